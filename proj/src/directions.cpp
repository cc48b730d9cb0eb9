#include "geotomo/directions.hpp"

#include <Eigen/Geometry>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "geotomo/error.hpp"
#include "geotomo/hull.hpp"

namespace geotomo {

namespace {

constexpr double kPi = std::numbers::pi;

double wrapAngle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a < 0) a += 2.0 * kPi;
  if (a >= 2.0 * kPi) a = 0.0;
  return a;
}

std::vector<double> sortedAngles(const DirectionSequence& dirs) {
  std::vector<double> a;
  a.reserve(dirs.size());
  for (const auto& d : dirs) a.push_back(wrapAngle(d.angle()));
  std::sort(a.begin(), a.end());
  return a;
}

double maxCyclicGap(const std::vector<double>& sorted) {
  if (sorted.size() <= 1) return 2.0 * kPi;
  double g = sorted.front() + 2.0 * kPi - sorted.back();
  for (std::size_t i = 1; i < sorted.size(); ++i) g = std::max(g, sorted[i] - sorted[i - 1]);
  return g;
}

std::vector<Vector> netPoints(int n, double eps) {
  if (n == 2) {
    const std::size_t m =
        eps >= 2.0 ? 1 : static_cast<std::size_t>(std::ceil(kPi / std::asin(eps / 2.0)));
    std::vector<Vector> out;
    out.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
      const double t = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(m);
      out.push_back(Vector{{std::cos(t), std::sin(t)}});
    }
    return out;
  }
  const auto bands = static_cast<std::size_t>(std::ceil(kPi / (4.0 * std::asin(eps / 4.0))));
  std::vector<Vector> out;
  for (std::size_t b = 0; b < bands; ++b) {
    const double phi = -kPi / 2.0 + (static_cast<double>(b) + 0.5) * kPi / static_cast<double>(bands);
    const double c = std::cos(phi);
    const double sub = eps / (2.0 * c);
    std::vector<Vector> ring;
    if (sub >= 2.0) {
      Vector p = Vector::Zero(n - 1);
      p[0] = 1.0;
      ring.push_back(p);
    } else {
      ring = netPoints(n - 1, sub);
    }
    for (const auto& w : ring) {
      Vector p(n);
      p.head(n - 1) = c * w;
      p[n - 1] = std::sin(phi);
      out.push_back(p);
    }
  }
  return out;
}

}  // namespace

Direction::Direction(Vector coords) : v_(std::move(coords)) {
  require(v_.size() >= 2, ErrorCode::InvalidParameter, "direction needs at least two coordinates");
  const double norm = v_.norm();
  require(std::isfinite(norm) && norm > 0.0, ErrorCode::InvalidParameter,
          "direction must be a finite nonzero vector");
  // Leave unit input bit-identical so that serialization round trips.
  if (std::abs(norm - 1.0) > 4.0 * std::numeric_limits<double>::epsilon()) v_ /= norm;
}

Direction::Direction(std::initializer_list<double> coords)
    : Direction(Vector(Eigen::Map<const Vector>(coords.begin(), static_cast<Eigen::Index>(coords.size())))) {}

Direction Direction::fromAngle(double theta) {
  return Direction(Vector{{std::cos(theta), std::sin(theta)}});
}

double Direction::angleTo(const Direction& other) const {
  // atan2 form stays accurate near 0 and pi.
  const double c = v_.dot(other.v_);
  const double s = (v_ - c * other.v_).norm();
  return std::atan2(s, c);
}

double Direction::angle() const {
  require(dims() == 2, ErrorCode::UnsupportedDimension, "angle() is defined for n = 2 only");
  return std::atan2(v_[1], v_[0]);
}

Direction Direction::operator-() const {
  Direction d;
  d.v_ = -v_;
  return d;
}

DirectionSequence::DirectionSequence(int dims, std::vector<Direction> items) : dims_(dims) {
  items_.reserve(items.size());
  for (auto& d : items) push_back(std::move(d));
}

void DirectionSequence::push_back(Direction d) {
  require(d.dims() == dims_, ErrorCode::InvalidParameter,
          "direction of dimension " + std::to_string(d.dims()) + " added to a sequence in R^" +
              std::to_string(dims_));
  items_.push_back(std::move(d));
}

DirectionSequence DirectionSequence::prefix(std::size_t k) const {
  DirectionSequence out(dims_);
  const std::size_t m = std::min(k, items_.size());
  out.items_.assign(items_.begin(), items_.begin() + static_cast<std::ptrdiff_t>(m));
  return out;
}

kernels::PointColumns DirectionSequence::columns() const {
  kernels::PointColumns cols(dims_);
  cols.reserve(items_.size());
  for (const auto& d : items_) cols.push(d.vec());
  return cols;
}

double sphereMeasure(int n) {
  require(n >= 1, ErrorCode::InvalidParameter, "sphere dimension must be positive");
  return 2.0 * std::pow(kPi, n / 2.0) / std::tgamma(n / 2.0);
}

DirectionSequence epsilonNet(int n, double eps) {
  require(n >= 2, ErrorCode::InvalidParameter, "epsilonNet needs n >= 2");
  require(eps > 0.0 && eps <= 2.0, ErrorCode::InvalidParameter, "epsilonNet needs eps in (0, 2]");
  std::vector<Direction> pts;
  for (auto& p : netPoints(n, eps)) pts.emplace_back(std::move(p));
  std::sort(pts.begin(), pts.end(), [](const Direction& a, const Direction& b) {
    return std::lexicographical_compare(a.vec().begin(), a.vec().end(), b.vec().begin(), b.vec().end());
  });
  DirectionSequence out(n);
  out.reserve(pts.size());
  for (auto& d : pts) out.push_back(std::move(d));
  return out;
}

DirectionSequence stackedNetSequence(int n, std::size_t k) {
  require(k >= 1, ErrorCode::InvalidParameter, "stackedNetSequence needs k >= 1");
  DirectionSequence out(n);
  out.reserve(k);
  for (int m = 1; out.size() < k; ++m) {
    const auto net = epsilonNet(n, std::ldexp(1.0, -m));
    for (const auto& d : net) {
      if (out.size() == k) break;
      out.push_back(d);
    }
  }
  return out;
}

DirectionSequence equallySpaced2D(std::size_t k, double offset) {
  require(k >= 1, ErrorCode::InvalidParameter, "equallySpaced2D needs k >= 1");
  DirectionSequence out(2);
  out.reserve(k);
  for (std::size_t j = 0; j < k; ++j)
    out.push_back(Direction::fromAngle(offset + 2.0 * kPi * static_cast<double>(j) / static_cast<double>(k)));
  return out;
}

DirectionSequence equallySpacedHalfCircle(std::size_t k, double offset) {
  require(k >= 1, ErrorCode::InvalidParameter, "equallySpacedHalfCircle needs k >= 1");
  DirectionSequence out(2);
  out.reserve(k);
  for (std::size_t j = 0; j < k; ++j)
    out.push_back(Direction::fromAngle(offset + kPi * static_cast<double>(j) / static_cast<double>(k)));
  return out;
}

double defaultSpreadResolution(int n) { return n <= 3 ? 0.01 : 0.1; }

namespace {

SpreadEstimate netSpread(const DirectionSequence& dirs, double resolution) {
  const int n = dirs.dims();
  const auto net = epsilonNet(n, resolution).columns();
  std::vector<double> minSq(net.size(), std::numeric_limits<double>::infinity());
  const auto& k = kernels::active();
  for (const auto& d : dirs) k.updateMinSqDist(net.pointers(), n, net.size(), d.vec().data(), minSq.data());
  const double v = std::sqrt(k.maxValue(minSq.data(), minSq.size()));
  return {v, resolution};
}

}  // namespace

SpreadEstimate spread(const DirectionSequence& dirs, double resolution) {
  require(!dirs.empty(), ErrorCode::InvalidParameter, "spread of an empty sequence");
  const int n = dirs.dims();
  if (n == 2) return {2.0 * std::sin(maxCyclicGap(sortedAngles(dirs)) / 4.0), 0.0};
  if (n == 3 && dirs.size() >= 4) {
    // The farthest point from the set is a spherical Voronoi vertex, i.e. the
    // outer normal of a hull facet; its distance to the facet's vertices is
    // sqrt(2 - 2 * offset).
    std::vector<Vec3> pts;
    pts.reserve(dirs.size());
    for (const auto& d : dirs) pts.emplace_back(d[0], d[1], d[2]);
    const auto hull = convexHull3D(pts, 1e-13);
    if (hull.dimension == 3) {
      double best = 0.0;
      for (const auto& f : hull.facets) best = std::max(best, 2.0 - 2.0 * f.offset);
      return {std::sqrt(std::clamp(best, 0.0, 4.0)), 0.0};
    }
  }
  if (resolution <= 0.0) resolution = defaultSpreadResolution(n);
  return netSpread(dirs, resolution);
}

SpreadEstimate symmetrizedSpread(const DirectionSequence& dirs, double resolution) {
  return spread(symmetrize(dirs), resolution);
}

SpreadTracker::SpreadTracker(int n, double resolution) : n_(n) {
  require(n >= 2, ErrorCode::InvalidParameter, "SpreadTracker needs n >= 2");
  if (n >= 3) {
    resolution_ = resolution > 0.0 ? resolution : defaultSpreadResolution(n);
    net_ = epsilonNet(n, resolution_).columns();
    minSq_.assign(net_.size(), std::numeric_limits<double>::infinity());
  }
}

void SpreadTracker::add(const Direction& d) {
  require(d.dims() == n_, ErrorCode::InvalidParameter, "dimension mismatch in SpreadTracker");
  ++count_;
  if (n_ == 2) {
    const double a = wrapAngle(d.angle());
    angles_.insert(std::upper_bound(angles_.begin(), angles_.end(), a), a);
    return;
  }
  kernels::active().updateMinSqDist(net_.pointers(), n_, net_.size(), d.vec().data(), minSq_.data());
}

SpreadEstimate SpreadTracker::current() const {
  require(count_ > 0, ErrorCode::InvalidParameter, "spread of an empty sequence");
  if (n_ == 2) return {2.0 * std::sin(maxCyclicGap(angles_) / 4.0), 0.0};
  return {std::sqrt(kernels::active().maxValue(minSq_.data(), minSq_.size())), resolution_};
}

double voronoiMaxMeasure(const DirectionSequence& dirs) {
  const auto cells = voronoiCellMeasures(dirs);
  return *std::max_element(cells.begin(), cells.end());
}

DirectionSequence symmetrize(const DirectionSequence& dirs) {
  DirectionSequence out(dirs.dims());
  out.reserve(2 * dirs.size());
  for (const auto& d : dirs) {
    out.push_back(d);
    out.push_back(-d);
  }
  return out;
}

namespace {

bool isSymmetric(const DirectionSequence& dirs) {
  const double tol = 2.0 * std::sin(kDuplicateAngle / 2.0) + 1e-15;
  for (const auto& d : dirs) {
    bool found = false;
    for (const auto& e : dirs)
      if ((d.vec() + e.vec()).norm() <= tol) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

}  // namespace

SpreadStats spreadStats(const DirectionSequence& dirs) {
  SpreadStats s;
  s.spread = spread(dirs);
  s.maxVoronoiMeasure = voronoiMaxMeasure(dirs);
  s.symmetric = isSymmetric(dirs);
  return s;
}

Direction canonical(const Direction& d) {
  for (int a = 0; a < d.dims(); ++a) {
    if (std::abs(d[a]) > 1e-12) return d[a] > 0 ? d : -d;
  }
  return d;
}

namespace {

// Unique representatives up to sign, in order of first appearance.
std::vector<Direction> dedupeUpToSign(std::vector<Direction> reps) {
  const std::size_t m = reps.size();
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double xa = std::abs(reps[a][0]), xb = std::abs(reps[b][0]);
    return xa < xb || (xa == xb && a < b);
  });
  const double tol = 2.0 * std::sin(kDuplicateAngle / 2.0) + 1e-15;
  std::vector<std::size_t> owner(m);
  for (std::size_t i = 0; i < m; ++i) owner[i] = i;
  for (std::size_t s = 0; s < m; ++s) {
    const std::size_t i = order[s];
    for (std::size_t t = s + 1; t < m; ++t) {
      const std::size_t j = order[t];
      if (std::abs(reps[j][0]) - std::abs(reps[i][0]) > tol) break;
      const double d = std::min((reps[i].vec() - reps[j].vec()).norm(), (reps[i].vec() + reps[j].vec()).norm());
      if (d <= tol) {
        const std::size_t lo = std::min(owner[i], owner[j]);
        owner[i] = owner[j] = lo;
      }
    }
  }
  // Resolve chains to their smallest index.
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t r = owner[i];
    while (owner[r] != r) r = owner[r];
    owner[i] = r;
  }
  std::vector<Direction> out;
  for (std::size_t i = 0; i < m; ++i)
    if (owner[i] == i) out.push_back(reps[i]);
  return out;
}

}  // namespace

DirectionSequence nodeRepresentatives(const DirectionSequence& dirs) {
  const int n = dirs.dims();
  require(n == 2 || n == 3, ErrorCode::UnsupportedDimension, "nodes are implemented for n = 2, 3");
  require(spanRank(dirs) == n, ErrorCode::Span, "directions do not span R^" + std::to_string(n));
  std::vector<Direction> reps;
  if (n == 2) {
    for (const auto& u : dirs) reps.push_back(canonical(Direction(Vector{{-u[1], u[0]}})));
  } else {
    for (std::size_t i = 0; i < dirs.size(); ++i)
      for (std::size_t j = i + 1; j < dirs.size(); ++j) {
        const Eigen::Vector3d a(dirs[i][0], dirs[i][1], dirs[i][2]);
        const Eigen::Vector3d b(dirs[j][0], dirs[j][1], dirs[j][2]);
        const Eigen::Vector3d c = a.cross(b);
        if (c.norm() < 1e-8) continue;
        reps.push_back(canonical(Direction(Vector(c))));
      }
  }
  DirectionSequence out(n, dedupeUpToSign(std::move(reps)));
  return out;
}

DirectionSequence nodes(const DirectionSequence& dirs) {
  return symmetrize(nodeRepresentatives(dirs));
}

int spanRank(const DirectionSequence& dirs) {
  if (dirs.empty()) return 0;
  Eigen::MatrixXd m(dirs.dims(), static_cast<Eigen::Index>(dirs.size()));
  for (std::size_t j = 0; j < dirs.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = dirs[j].vec();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > 1e-10 * s[0]) ++r;
  return r;
}

bool positiveHullIsWhole(const DirectionSequence& dirs) {
  const int n = dirs.dims();
  if (dirs.size() < static_cast<std::size_t>(n + 1)) return false;
  if (n == 2) return maxCyclicGap(sortedAngles(dirs)) < kPi - 1e-12;
  require(n == 3, ErrorCode::UnsupportedDimension, "positive hull test is implemented for n = 2, 3");
  std::vector<Vec3> pts;
  for (const auto& d : dirs) pts.emplace_back(d[0], d[1], d[2]);
  const auto hull = convexHull3D(pts, 1e-13);
  if (hull.dimension < 3) return false;
  for (const auto& f : hull.facets)
    if (f.offset <= 1e-12) return false;
  return true;
}

}  // namespace geotomo
