#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "geotomo/directions.hpp"
#include "geotomo/error.hpp"
#include "support.hpp"

using namespace geotomo;
using namespace geotomo::testing;

namespace {

// Largest distance from a test point to its nearest direction.
double worstCover(const DirectionSequence& dirs, const std::vector<Vector>& probes) {
  double worst = 0.0;
  for (const auto& p : probes) {
    double best = 1e300;
    for (const auto& d : dirs) best = std::min(best, (p - d.vec()).norm());
    worst = std::max(worst, best);
  }
  return worst;
}

std::vector<Vector> circleProbes(int count) {
  std::vector<Vector> out;
  for (int i = 0; i < count; ++i) {
    const double t = 2.0 * kPi * i / count;
    out.push_back(Vector{{std::cos(t), std::sin(t)}});
  }
  return out;
}

DirectionSequence octahedron() {
  return DirectionSequence(3, {Direction{1, 0, 0}, Direction{-1, 0, 0}, Direction{0, 1, 0}, Direction{0, -1, 0},
                               Direction{0, 0, 1}, Direction{0, 0, -1}});
}

}  // namespace

TEST(Direction, Renormalizes) {
  const Direction d{3.0, 4.0};
  EXPECT_NEAR(d.vec().norm(), 1.0, 1e-15);
  EXPECT_NEAR(d[0], 0.6, 1e-15);
  EXPECT_THROW(Direction({0.0, 0.0}), Error);
  EXPECT_THROW(Direction({1.0}), Error);
}

TEST(DirectionSequence, RejectsMixedDimensions) {
  DirectionSequence s(2);
  s.push_back(Direction{1, 0});
  EXPECT_THROW(s.push_back(Direction{1, 0, 0}), Error);
}

TEST(EpsilonNet, WholeCircleForEpsTwo) {
  const auto net = epsilonNet(2, 2.0);
  EXPECT_GE(net.size(), 1u);
  EXPECT_LE(worstCover(net, circleProbes(1000)), 2.0 + 1e-12);
}

TEST(EpsilonNet, CircleNetProperty) {
  const auto net = epsilonNet(2, 0.5);
  EXPECT_LE(worstCover(net, circleProbes(100000)), 0.5);
  std::vector<double> a;
  for (const auto& d : net) a.push_back(d.angle());
  std::sort(a.begin(), a.end());
  double gap = a.front() + 2 * kPi - a.back();
  for (std::size_t i = 1; i < a.size(); ++i) gap = std::max(gap, a[i] - a[i - 1]);
  EXPECT_LE(gap, 2.0 * std::asin(0.25) + 1e-12);
}

TEST(EpsilonNet, SphereNetProperty) {
  for (double eps : {1.0, 0.5, 0.2}) {
    const auto net = epsilonNet(3, eps);
    EXPECT_LE(worstCover(net, fibonacciSphere(100000)), eps) << eps;
    EXPECT_LE(static_cast<double>(net.size()), 8.0 * kPi / (eps * eps) + 4.0 * kPi / eps) << eps;
  }
}

TEST(EpsilonNet, HigherDimensionRandomProbes) {
  const auto net = epsilonNet(4, 0.9);
  Draw draw(11);
  double worst = 0;
  for (int i = 0; i < 20000; ++i) {
    const auto p = draw.direction(4);
    double best = 1e300;
    for (const auto& d : net) best = std::min(best, p.chordTo(d));
    worst = std::max(worst, best);
  }
  EXPECT_LE(worst, 0.9);
}

TEST(EpsilonNet, LexicographicOrder) {
  const auto net = epsilonNet(3, 0.5);
  for (std::size_t i = 1; i < net.size(); ++i) {
    const auto& a = net[i - 1].vec();
    const auto& b = net[i].vec();
    EXPECT_TRUE(std::lexicographical_compare(a.data(), a.data() + 3, b.data(), b.data() + 3));
  }
}

TEST(EpsilonNet, RejectsBadEps) {
  EXPECT_THROW(epsilonNet(2, 0.0), Error);
  EXPECT_THROW(epsilonNet(3, -1.0), Error);
  EXPECT_THROW(epsilonNet(3, 2.5), Error);
}

TEST(StackedNet, PrefixOfConcatenatedNets) {
  const auto first = epsilonNet(2, 0.5);
  const auto s = stackedNetSequence(2, first.size() + 3);
  for (std::size_t i = 0; i < first.size(); ++i) EXPECT_LT(s[i].chordTo(first[i]), 1e-15);
  const auto second = epsilonNet(2, 0.25);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_LT(s[first.size() + i].chordTo(second[i]), 1e-15);
  EXPECT_LT(stackedNetSequence(2, 1)[0].chordTo(first[0]), 1e-15);
  EXPECT_THROW(stackedNetSequence(2, 0), Error);
}

TEST(StackedNet, Deterministic) {
  const auto a = stackedNetSequence(3, 500), b = stackedNetSequence(3, 500);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].vec(), b[i].vec());
}

TEST(EquallySpaced, Angles) {
  const auto four = equallySpaced2D(4);
  EXPECT_NEAR(four[1][1], 1.0, 1e-15);
  EXPECT_NEAR(four[2][0], -1.0, 1e-15);
  const auto one = equallySpaced2D(1, kPi / 2);
  EXPECT_NEAR(one[0][1], 1.0, 1e-15);
  const auto k35 = equallySpaced2D(35);
  for (std::size_t j = 0; j < 35; ++j) EXPECT_NEAR(k35[j][0], std::cos(2 * kPi * j / 35), 1e-15);
  EXPECT_THROW(equallySpaced2D(0), Error);
}

TEST(Spread, SinglePointReachesAntipode) {
  EXPECT_NEAR(spread(DirectionSequence(2, {Direction{1, 0}})).value, 2.0, 1e-12);
}

TEST(Spread, SquareMatchesGridSearch) {
  const auto d = equallySpaced2D(4);
  const double oracle = worstCover(d, circleProbes(1000000));
  EXPECT_NEAR(spread(d).value, 2.0 * std::sin(kPi / 8), 1e-12);
  EXPECT_NEAR(spread(d).value, oracle, 1e-5);
}

TEST(Spread, RandomCircleSetsMatchGridSearch) {
  Draw draw(3);
  for (int trial = 0; trial < 10; ++trial) {
    DirectionSequence d(2);
    for (int i = 0; i < 7; ++i) d.push_back(draw.direction(2));
    EXPECT_NEAR(spread(d).value, worstCover(d, circleProbes(200000)), 5e-5);
  }
}

TEST(Spread, OctahedronWithinCertifiedBound) {
  const auto d = octahedron();
  const auto s = spread(d);
  const double oracle = worstCover(d, fibonacciSphere(100000));
  EXPECT_NEAR(s.value, 2.0 * std::sin(std::acos(1.0 / std::sqrt(3.0)) / 2.0), 1e-12);
  EXPECT_LE(oracle, s.upper() + 1e-12);
  EXPECT_GE(oracle, s.value - 0.02);
}

TEST(Spread, CoplanarSphereSetUsesNet) {
  // All on the equator: the pole is at chord sqrt(2).
  DirectionSequence d(3, {Direction{1, 0, 0}, Direction{0, 1, 0}, Direction{-1, 0, 0}, Direction{0, -1, 0}});
  const auto s = spread(d, 0.01);
  EXPECT_GT(s.certifiedError, 0.0);
  EXPECT_LE(s.value, std::sqrt(2.0) + 1e-12);
  EXPECT_GE(s.upper(), std::sqrt(2.0) - 1e-12);
}

TEST(Spread, RandomSphereSetsMatchGridSearch) {
  Draw draw(5);
  const auto probes = fibonacciSphere(50000);
  for (int trial = 0; trial < 5; ++trial) {
    DirectionSequence d(3);
    for (int i = 0; i < 12; ++i) d.push_back(draw.direction(3));
    const auto s = spread(d);
    const double oracle = worstCover(d, probes);
    EXPECT_LE(oracle, s.upper() + 1e-12);
    EXPECT_GE(oracle, s.value - 0.03);
  }
}

TEST(Spread, AntitoneUnderInsertion2D) {
  Draw draw(8);
  DirectionSequence d(2);
  double last = 2.0;
  for (int i = 0; i < 200; ++i) {
    d.push_back(draw.direction(2));
    const double s = spread(d).value;
    EXPECT_LE(s, last + 1e-15);
    last = s;
  }
}

TEST(SpreadTracker, AgreesWithDirectEvaluation) {
  Draw draw(9);
  SpreadTracker t2(2), t3(3, 0.05);
  DirectionSequence d2(2), d3(3);
  for (int i = 0; i < 60; ++i) {
    const auto a = draw.direction(2);
    const auto b = draw.direction(3);
    t2.add(a);
    d2.push_back(a);
    t3.add(b);
    d3.push_back(b);
    EXPECT_NEAR(t2.current().value, spread(d2).value, 1e-12);
    const auto exact = spread(d3, 0.05);
    // Both bracket the true spread.
    EXPECT_LE(t3.current().value, exact.upper() + 1e-12);
    EXPECT_LE(exact.value, t3.current().upper() + 1e-12);
  }
}

TEST(Spread, EmptyThrows) { EXPECT_THROW(spread(DirectionSequence(2)), Error); }

TEST(Voronoi, EquallySpacedCells) {
  for (std::size_t k : {3u, 7u, 35u}) EXPECT_NEAR(voronoiMaxMeasure(equallySpaced2D(k)), 2 * kPi / k, 1e-12);
  EXPECT_NEAR(voronoiMaxMeasure(DirectionSequence(2, {Direction{1, 0}})), 2 * kPi, 1e-12);
}

TEST(Voronoi, OctahedronCells) {
  const auto cells = voronoiCellMeasures(octahedron());
  for (double c : cells) EXPECT_NEAR(c, 4 * kPi / 6, 1e-12);
}

TEST(Voronoi, CellsSumToSphere) {
  Draw draw(12);
  for (int n : {2, 3}) {
    DirectionSequence d(n);
    for (int i = 0; i < 40; ++i) d.push_back(draw.direction(n));
    const auto cells = voronoiCellMeasures(d);
    double sum = 0;
    for (double c : cells) sum += c;
    EXPECT_NEAR(sum, sphereMeasure(n), 1e-8);
  }
}

TEST(Voronoi, MonteCarloCellAreas) {
  Draw draw(13);
  DirectionSequence d(3);
  for (int i = 0; i < 10; ++i) d.push_back(draw.direction(3));
  const auto cells = voronoiCellMeasures(d);
  const int samples = 400000;
  std::vector<int> hits(d.size(), 0);
  for (int s = 0; s < samples; ++s) {
    const auto p = draw.direction(3);
    std::size_t best = 0;
    for (std::size_t i = 1; i < d.size(); ++i)
      if (p.dot(d[i]) > p.dot(d[best])) best = i;
    ++hits[best];
  }
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double frac = cells[i] / (4 * kPi);
    const double sd = std::sqrt(frac * (1 - frac) / samples);
    EXPECT_NEAR(static_cast<double>(hits[i]) / samples, frac, 5 * sd + 1e-4) << i;
  }
}

TEST(Voronoi, HemisphereAndCoplanarSets) {
  // Everything in the upper hemisphere; the big cell of the bottom is shared.
  DirectionSequence up(3, {Direction{0, 0, 1}, Direction{1, 0, 1}, Direction{0, 1, 1}, Direction{-1, -1, 1}});
  double sum = 0;
  for (double c : voronoiCellMeasures(up)) sum += c;
  EXPECT_NEAR(sum, 4 * kPi, 1e-8);
  DirectionSequence flat(3, {Direction{1, 0, 0}, Direction{0, 1, 0}, Direction{-1, 0, 0}, Direction{0, -1, 0}});
  for (double c : voronoiCellMeasures(flat)) EXPECT_NEAR(c, kPi, 1e-10);
}

TEST(Voronoi, DuplicateDirectionsRejected) {
  DirectionSequence d(2, {Direction{1, 0}, Direction{0, 1}, Direction{1, 1e-12}});
  try {
    voronoiCellMeasures(d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DuplicateDirection);
  }
}

TEST(Symmetrize, Interleaves) {
  const auto s = symmetrize(DirectionSequence(2, {Direction{1, 0}, Direction{0, 1}}));
  ASSERT_EQ(s.size(), 4u);
  EXPECT_NEAR(s[1][0], -1.0, 1e-15);
  EXPECT_NEAR(s[3][1], -1.0, 1e-15);
}

TEST(Symmetrize, SpreadOfSingleAxis) {
  const DirectionSequence e1(2, {Direction{1, 0}});
  EXPECT_NEAR(symmetrizedSpread(e1).value, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(symmetrizedSpread(e1).value, worstCover(symmetrize(e1), circleProbes(1000000)), 1e-5);
}

TEST(Symmetrize, NeverIncreasesSpread) {
  Draw draw(14);
  for (int trial = 0; trial < 20; ++trial) {
    DirectionSequence d(2);
    for (int i = 0; i < 5; ++i) d.push_back(draw.direction(2));
    EXPECT_LE(symmetrizedSpread(d).value, spread(d).value + 1e-15);
  }
}

TEST(Nodes, AxisSets) {
  const auto n2 = nodes(DirectionSequence(2, {Direction{1, 0}, Direction{0, 1}}));
  EXPECT_EQ(n2.size(), 4u);
  const auto n3 = nodes(DirectionSequence(3, {Direction{1, 0, 0}, Direction{0, 1, 0}, Direction{0, 0, 1}}));
  EXPECT_EQ(n3.size(), 6u);
  std::set<std::pair<int, int>> seen;
  for (const auto& v : n3) {
    int axis = 0;
    for (int a = 0; a < 3; ++a)
      if (std::abs(v[a]) > 0.5) axis = a;
    EXPECT_NEAR(std::abs(v[axis]), 1.0, 1e-15);
    seen.insert({axis, v[axis] > 0 ? 1 : -1});
  }
  EXPECT_EQ(seen.size(), 6u);
}

TEST(Nodes, OrthogonalToTwoInputs) {
  Draw draw(15);
  DirectionSequence d(3);
  for (int i = 0; i < 10; ++i) d.push_back(draw.direction(3));
  const auto out = nodes(d);
  EXPECT_LE(out.size(), 90u);
  EXPECT_EQ(out.size() % 2, 0u);
  for (const auto& v : out) {
    int orth = 0;
    for (const auto& u : d)
      if (std::abs(u.dot(v)) < 1e-10) ++orth;
    EXPECT_GE(orth, 2);
  }
  for (std::size_t i = 0; i + 1 < out.size(); i += 2) EXPECT_LT((out[i].vec() + out[i + 1].vec()).norm(), 1e-15);
}

TEST(Nodes, Errors) {
  try {
    nodes(DirectionSequence(3, {Direction{1, 0, 0}, Direction{0, 1, 0}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Span);
  }
  EXPECT_THROW(nodes(epsilonNet(4, 1.5)), Error);
}

TEST(PositiveHull, Cases) {
  EXPECT_TRUE(positiveHullIsWhole(equallySpaced2D(3)));
  EXPECT_FALSE(positiveHullIsWhole(equallySpacedHalfCircle(8)));
  EXPECT_TRUE(positiveHullIsWhole(octahedron()));
  EXPECT_FALSE(positiveHullIsWhole(DirectionSequence(3, {Direction{1, 0, 0}, Direction{0, 1, 0}, Direction{0, 0, 1},
                                                         Direction{-1, -1, 0}})));
}
