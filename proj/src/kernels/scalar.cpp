#include <cmath>
#include <limits>

#include "geotomo/kernels/kernels.hpp"

namespace geotomo::kernels {
namespace {

inline double dotAt(const double* const* cols, int dims, std::size_t j, const double* q) {
  double s = 0.0;
  for (int a = 0; a < dims; ++a) s += cols[a][j] * q[a];
  return s;
}

double maxDot(const double* const* cols, int dims, std::size_t count, const double* q) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < count; ++j) best = std::max(best, dotAt(cols, dims, j, q));
  return best;
}

std::size_t argMaxDot(const double* const* cols, int dims, std::size_t count, const double* q) {
  std::size_t arg = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < count; ++j) {
    const double v = dotAt(cols, dims, j, q);
    if (v > best) {
      best = v;
      arg = j;
    }
  }
  return arg;
}

void updateMinSqDist(const double* const* cols, int dims, std::size_t count, const double* q,
                     double* minSq) {
  for (std::size_t j = 0; j < count; ++j) {
    double s = 0.0;
    for (int a = 0; a < dims; ++a) {
      const double d = cols[a][j] - q[a];
      s += d * d;
    }
    if (s < minSq[j]) minSq[j] = s;
  }
}

double weightedAbsDot(const double* const* cols, int dims, std::size_t count, const double* w,
                      const double* q) {
  double s = 0.0;
  for (std::size_t j = 0; j < count; ++j) s += w[j] * std::abs(dotAt(cols, dims, j, q));
  return s;
}

void absDot(const double* const* cols, int dims, std::size_t count, const double* q,
            double* out) {
  for (std::size_t j = 0; j < count; ++j) out[j] = std::abs(dotAt(cols, dims, j, q));
}

double sumSquares(const double* x, std::size_t count) {
  double s = 0.0;
  for (std::size_t j = 0; j < count; ++j) s += x[j] * x[j];
  return s;
}

double maxValue(const double* x, std::size_t count) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < count; ++j) best = std::max(best, x[j]);
  return best;
}

}  // namespace

const KernelTable& scalarKernels() {
  static const KernelTable table{"scalar",       maxDot, argMaxDot, updateMinSqDist,
                                 weightedAbsDot, absDot, sumSquares, maxValue};
  return table;
}

}  // namespace geotomo::kernels
