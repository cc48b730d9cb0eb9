#pragma once
// Data-parallel inner loops used throughout the library.
//
// Point sets are passed column-wise (structure of arrays): cols[a][j] is
// coordinate a of point j. Every kernel has a scalar reference version and,
// where the CPU allows it, an AVX2+FMA version picked once at runtime. The two
// variants agree to rounding (reductions run in a different order).

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace geotomo::kernels {

struct KernelTable {
  std::string_view name;

  // max_j sum_a cols[a][j] * q[a]; -inf when count == 0.
  double (*maxDot)(const double* const* cols, int dims, std::size_t count, const double* q);

  // Index of the maximizer of the same expression (first on ties); count > 0.
  std::size_t (*argMaxDot)(const double* const* cols, int dims, std::size_t count,
                           const double* q);

  // minSq[j] = min(minSq[j], sum_a (cols[a][j] - q[a])^2)
  void (*updateMinSqDist)(const double* const* cols, int dims, std::size_t count,
                          const double* q, double* minSq);

  // sum_j w[j] * |sum_a cols[a][j] * q[a]|
  double (*weightedAbsDot)(const double* const* cols, int dims, std::size_t count,
                           const double* w, const double* q);

  // out[j] = |sum_a cols[a][j] * q[a]|
  void (*absDot)(const double* const* cols, int dims, std::size_t count, const double* q,
                 double* out);

  double (*sumSquares)(const double* x, std::size_t count);

  // max_j x[j]; -inf when count == 0.
  double (*maxValue)(const double* x, std::size_t count);
};

const KernelTable& scalarKernels();

// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2Kernels();

// The table used by the library. Chosen on first use: AVX2 when available,
// unless the environment variable GEOTOMO_SIMD is set to "scalar".
const KernelTable& active();

// Forces a specific table (tests and benchmarks). Pass nullptr to restore the
// automatic choice.
void setActive(const KernelTable* table);

/// Column-major copy of a point set, padded so that every column has the same
/// length. Owns its storage; pointers() stays valid while the object lives.
class PointColumns {
 public:
  PointColumns() = default;
  explicit PointColumns(int dims) : dims_(dims), cols_(static_cast<std::size_t>(dims)) {}

  int dims() const { return dims_; }
  std::size_t size() const { return cols_.empty() ? 0 : cols_[0].size(); }

  template <typename Point>
  void push(const Point& p) {
    for (int a = 0; a < dims_; ++a) cols_[static_cast<std::size_t>(a)].push_back(p[a]);
  }

  void reserve(std::size_t n) {
    for (auto& c : cols_) c.reserve(n);
  }

  const double* const* pointers() const {
    ptrs_.resize(cols_.size());
    for (std::size_t a = 0; a < cols_.size(); ++a) ptrs_[a] = cols_[a].data();
    return ptrs_.data();
  }

  std::span<const double> column(int a) const { return cols_[static_cast<std::size_t>(a)]; }

 private:
  int dims_ = 0;
  std::vector<std::vector<double>> cols_;
  mutable std::vector<const double*> ptrs_;
};

}  // namespace geotomo::kernels
