#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "geotomo/kernels/kernels.hpp"
#include "support.hpp"

using namespace geotomo;
using namespace geotomo::testing;

namespace {

struct Data {
  kernels::PointColumns cols;
  std::vector<double> q, w, flat;
};

Data make(int dims, std::size_t count, std::uint64_t seed) {
  Draw d(seed);
  Data out{kernels::PointColumns(dims), {}, {}, {}};
  for (std::size_t j = 0; j < count; ++j) {
    std::vector<double> p(dims);
    for (auto& x : p) x = d.gaussian();
    out.cols.push(p);
    out.w.push_back(d.uniform());
    out.flat.push_back(d.gaussian());
  }
  for (int a = 0; a < dims; ++a) out.q.push_back(d.gaussian());
  return out;
}

}  // namespace

class KernelEquivalence : public ::testing::TestWithParam<std::tuple<int, std::size_t>> {};

TEST_P(KernelEquivalence, Avx2MatchesScalar) {
  const auto* fast = kernels::avx2Kernels();
  if (!fast) GTEST_SKIP() << "AVX2 not available";
  const auto& ref = kernels::scalarKernels();
  const auto [dims, count] = GetParam();
  const auto d = make(dims, count, dims * 1000 + count);
  const auto* p = d.cols.pointers();
  const double tol = 1e-13 * std::max<double>(1.0, static_cast<double>(count));

  if (count == 0)
    EXPECT_EQ(fast->maxDot(p, dims, count, d.q.data()), ref.maxDot(p, dims, count, d.q.data()));
  else
    EXPECT_NEAR(fast->maxDot(p, dims, count, d.q.data()), ref.maxDot(p, dims, count, d.q.data()), 1e-13);
  if (count > 0) EXPECT_EQ(fast->argMaxDot(p, dims, count, d.q.data()), ref.argMaxDot(p, dims, count, d.q.data()));
  EXPECT_NEAR(fast->weightedAbsDot(p, dims, count, d.w.data(), d.q.data()),
              ref.weightedAbsDot(p, dims, count, d.w.data(), d.q.data()), tol);
  EXPECT_NEAR(fast->sumSquares(d.flat.data(), count), ref.sumSquares(d.flat.data(), count), tol);
  EXPECT_EQ(fast->maxValue(d.flat.data(), count), ref.maxValue(d.flat.data(), count));

  std::vector<double> a(count), b(count);
  fast->absDot(p, dims, count, d.q.data(), a.data());
  ref.absDot(p, dims, count, d.q.data(), b.data());
  for (std::size_t j = 0; j < count; ++j) EXPECT_NEAR(a[j], b[j], 1e-14);

  std::vector<double> m1(count, 4.0), m2(count, 4.0);
  fast->updateMinSqDist(p, dims, count, d.q.data(), m1.data());
  ref.updateMinSqDist(p, dims, count, d.q.data(), m2.data());
  for (std::size_t j = 0; j < count; ++j) EXPECT_NEAR(m1[j], m2[j], 1e-14);
}

INSTANTIATE_TEST_SUITE_P(Sizes, KernelEquivalence,
                         ::testing::Combine(::testing::Values(2, 3, 4, 5),
                                            ::testing::Values<std::size_t>(0, 1, 3, 4, 7, 8, 9, 31, 1000, 1003)));

TEST(KernelDispatch, ForcingScalarChangesNothingObservable) {
  const auto d = make(3, 501, 77);
  kernels::setActive(&kernels::scalarKernels());
  EXPECT_EQ(kernels::active().name, kernels::scalarKernels().name);
  const double s = kernels::active().maxDot(d.cols.pointers(), 3, 501, d.q.data());
  kernels::setActive(nullptr);
  const double f = kernels::active().maxDot(d.cols.pointers(), 3, 501, d.q.data());
  EXPECT_NEAR(s, f, 1e-13);
}

TEST(KernelDispatch, TiesPickFirstIndex) {
  kernels::PointColumns c(2);
  for (int j = 0; j < 9; ++j) c.push(std::vector<double>{1.0, 0.0});
  const double q[2] = {1.0, 0.0};
  EXPECT_EQ(kernels::scalarKernels().argMaxDot(c.pointers(), 2, 9, q), 0u);
  if (const auto* fast = kernels::avx2Kernels()) EXPECT_EQ(fast->argMaxDot(c.pointers(), 2, 9, q), 0u);
}
