// AVX2 + FMA variants. This translation unit is the only one compiled with
// -mavx2 -mfma; nothing here may run before dispatch.cpp has checked the CPU.

#include <immintrin.h>

#include <cmath>
#include <limits>

#include "geotomo/kernels/kernels.hpp"

namespace geotomo::kernels {
namespace {

inline __m256d dot4(const double* const* cols, int dims, std::size_t j, const double* q) {
  __m256d acc = _mm256_mul_pd(_mm256_loadu_pd(cols[0] + j), _mm256_set1_pd(q[0]));
  for (int a = 1; a < dims; ++a)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(cols[a] + j), _mm256_set1_pd(q[a]), acc);
  return acc;
}

// Same rounding as one lane of dot4, so argMaxDot can find the value maxDot returned.
inline double dotAt(const double* const* cols, int dims, std::size_t j, const double* q) {
  double s = cols[0][j] * q[0];
  for (int a = 1; a < dims; ++a) s = std::fma(cols[a][j], q[a], s);
  return s;
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d m = _mm_max_pd(lo, hi);
  m = _mm_max_pd(m, _mm_unpackhi_pd(m, m));
  return _mm_cvtsd_f64(m);
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d s = _mm_add_pd(lo, hi);
  s = _mm_add_sd(s, _mm_unpackhi_pd(s, s));
  return _mm_cvtsd_f64(s);
}

inline __m256d abs4(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

double maxDot(const double* const* cols, int dims, std::size_t count, const double* q) {
  double best = -std::numeric_limits<double>::infinity();
  std::size_t j = 0;
  if (count >= 4) {
    __m256d vbest = _mm256_set1_pd(best);
    for (; j + 4 <= count; j += 4) vbest = _mm256_max_pd(vbest, dot4(cols, dims, j, q));
    best = hmax(vbest);
  }
  for (; j < count; ++j) best = std::max(best, dotAt(cols, dims, j, q));
  return best;
}

std::size_t argMaxDot(const double* const* cols, int dims, std::size_t count, const double* q) {
  // Vectorized max first, then the first index attaining it.
  const double best = maxDot(cols, dims, count, q);
  for (std::size_t j = 0; j < count; ++j)
    if (dotAt(cols, dims, j, q) >= best) return j;
  return 0;
}

void updateMinSqDist(const double* const* cols, int dims, std::size_t count, const double* q,
                     double* minSq) {
  std::size_t j = 0;
  for (; j + 4 <= count; j += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(cols[0] + j), _mm256_set1_pd(q[0]));
    __m256d acc = _mm256_mul_pd(d, d);
    for (int a = 1; a < dims; ++a) {
      d = _mm256_sub_pd(_mm256_loadu_pd(cols[a] + j), _mm256_set1_pd(q[a]));
      acc = _mm256_fmadd_pd(d, d, acc);
    }
    _mm256_storeu_pd(minSq + j, _mm256_min_pd(_mm256_loadu_pd(minSq + j), acc));
  }
  for (; j < count; ++j) {
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
  std::size_t j = 0;
  double s = 0.0;
  if (count >= 4) {
    __m256d acc = _mm256_setzero_pd();
    for (; j + 4 <= count; j += 4)
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + j), abs4(dot4(cols, dims, j, q)), acc);
    s = hsum(acc);
  }
  for (; j < count; ++j) s += w[j] * std::abs(dotAt(cols, dims, j, q));
  return s;
}

void absDot(const double* const* cols, int dims, std::size_t count, const double* q,
            double* out) {
  std::size_t j = 0;
  for (; j + 4 <= count; j += 4) _mm256_storeu_pd(out + j, abs4(dot4(cols, dims, j, q)));
  for (; j < count; ++j) out[j] = std::abs(dotAt(cols, dims, j, q));
}

double sumSquares(const double* x, std::size_t count) {
  std::size_t j = 0;
  double s = 0.0;
  if (count >= 4) {
    __m256d acc = _mm256_setzero_pd();
    for (; j + 4 <= count; j += 4) {
      const __m256d v = _mm256_loadu_pd(x + j);
      acc = _mm256_fmadd_pd(v, v, acc);
    }
    s = hsum(acc);
  }
  for (; j < count; ++j) s += x[j] * x[j];
  return s;
}

double maxValue(const double* x, std::size_t count) {
  double best = -std::numeric_limits<double>::infinity();
  std::size_t j = 0;
  if (count >= 4) {
    __m256d vbest = _mm256_set1_pd(best);
    for (; j + 4 <= count; j += 4) vbest = _mm256_max_pd(vbest, _mm256_loadu_pd(x + j));
    best = hmax(vbest);
  }
  for (; j < count; ++j) best = std::max(best, x[j]);
  return best;
}

}  // namespace

const KernelTable& avx2KernelTable() {
  static const KernelTable table{"avx2",         maxDot, argMaxDot, updateMinSqDist,
                                 weightedAbsDot, absDot, sumSquares, maxValue};
  return table;
}

}  // namespace geotomo::kernels
