#include "geotomo/bodies.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <numeric>

#include "geotomo/error.hpp"
#include "geotomo/hull.hpp"
#include "geotomo/lp.hpp"

namespace geotomo {

namespace {

constexpr double kPi = std::numbers::pi;

Vec2 to2(const Vector& v) { return {v[0], v[1]}; }
Vec3 to3(const Vector& v) { return {v[0], v[1], v[2]}; }
Vector from2(const Vec2& v) { return Vector{{v.x(), v.y()}}; }
Vector from3(const Vec3& v) { return Vector{{v.x(), v.y(), v.z()}}; }

std::vector<Vec3> points3(const VPolytope& p) {
  std::vector<Vec3> out;
  out.reserve(p.vertices().size());
  for (const auto& v : p.vertices()) out.push_back(to3(v));
  return out;
}

double polygonArea(const std::vector<Vector>& ring) {
  double a = 0.0;
  const std::size_t k = ring.size();
  for (std::size_t i = 0; i < k; ++i) {
    const auto& p = ring[i];
    const auto& q = ring[(i + 1) % k];
    a += p[0] * q[1] - p[1] * q[0];
  }
  return 0.5 * a;
}

kernels::PointColumns vertexColumns(const VPolytope& p) {
  kernels::PointColumns cols(p.dims());
  cols.reserve(p.vertices().size());
  for (const auto& v : p.vertices()) cols.push(v);
  return cols;
}

}  // namespace

VPolytope::VPolytope(int dims, const std::vector<Vector>& points) : dims_(dims) {
  require(dims >= 2, ErrorCode::InvalidParameter, "polytope dimension must be >= 2");
  for (const auto& p : points)
    require(p.size() == dims && p.allFinite(), ErrorCode::InvalidBody, "bad polytope vertex");
  if (points.empty()) return;
  if (dims == 2) {
    std::vector<Vec2> pts;
    pts.reserve(points.size());
    for (const auto& p : points) pts.push_back(to2(p));
    for (const auto& q : convexHull2D(std::move(pts))) vertices_.push_back(from2(q));
  } else if (dims == 3) {
    std::vector<Vec3> pts;
    pts.reserve(points.size());
    for (const auto& p : points) pts.push_back(to3(p));
    const auto hull = convexHull3D(pts);
    for (const auto& q : hull.vertices) vertices_.push_back(from3(q));
  } else {
    for (const auto& p : points) {
      bool dup = false;
      for (const auto& q : vertices_)
        if ((p - q).norm() <= 1e-12 * std::max(1.0, p.norm())) dup = true;
      if (!dup) vertices_.push_back(p);
    }
  }
}

int VPolytope::affineDimension() const {
  if (vertices_.empty()) return -1;
  if (vertices_.size() == 1) return 0;
  Eigen::MatrixXd m(dims_, static_cast<Eigen::Index>(vertices_.size() - 1));
  for (std::size_t j = 1; j < vertices_.size(); ++j) m.col(static_cast<Eigen::Index>(j - 1)) = vertices_[j] - vertices_[0];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > 1e-10 * std::max(s[0], 1e-300)) ++r;
  return r;
}

VPolytope VPolytope::translated(const Vector& t) const {
  VPolytope out(dims_);
  out.vertices_ = vertices_;
  for (auto& v : out.vertices_) v += t;
  return out;
}

VPolytope VPolytope::scaled(double s) const {
  require(s > 0, ErrorCode::InvalidParameter, "scale factor must be positive");
  VPolytope out(dims_);
  out.vertices_ = vertices_;
  for (auto& v : out.vertices_) v *= s;
  return out;
}

Zonotope::Zonotope(int dims, std::vector<Generator> generators) : dims_(dims) {
  for (auto& g : generators) {
    require(g.direction.dims() == dims, ErrorCode::InvalidParameter, "generator dimension mismatch");
    require(std::isfinite(g.halfLength) && g.halfLength >= 0.0, ErrorCode::InvalidBody,
            "generator half-lengths must be nonnegative");
    if (g.halfLength >= 1e-14) generators_.push_back(std::move(g));
  }
}

VPolytope Zonotope::toVPolytope() const {
  require(dims_ == 2 || dims_ == 3, ErrorCode::UnsupportedDimension, "zonotope vertices for n = 2, 3 only");
  std::vector<Vector> pts{Vector::Zero(dims_)};
  VPolytope current(dims_, pts);
  for (const auto& g : generators_) {
    const Vector s = g.halfLength * g.direction.vec();
    std::vector<Vector> next;
    next.reserve(2 * current.vertices().size());
    for (const auto& v : current.vertices()) {
      next.push_back(v + s);
      next.push_back(v - s);
    }
    current = VPolytope(dims_, next);
  }
  return current;
}

AtomicMeasure::AtomicMeasure(int dims, std::vector<Atom> atoms) : dims_(dims), atoms_(std::move(atoms)) {
  for (const auto& a : atoms_) {
    require(a.direction.dims() == dims, ErrorCode::InvalidParameter, "atom dimension mismatch");
    require(std::isfinite(a.mass) && a.mass >= 0.0, ErrorCode::InvalidData, "atom masses must be nonnegative");
  }
}

double AtomicMeasure::totalMass() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.mass;
  return s;
}

Vector AtomicMeasure::barycenterSum() const {
  Vector s = Vector::Zero(dims_);
  for (const auto& a : atoms_) s += a.mass * a.direction.vec();
  return s;
}

AtomicMeasure AtomicMeasure::scaled(double s) const {
  require(s >= 0, ErrorCode::InvalidParameter, "measure scale must be nonnegative");
  AtomicMeasure out = *this;
  for (auto& a : out.atoms_) a.mass *= s;
  return out;
}

AtomicMeasure AtomicMeasure::merged() const {
  const double tol = 2.0 * std::sin(kDuplicateAngle / 2.0) + 1e-15;
  std::vector<Atom> out;
  for (const auto& a : atoms_) {
    if (a.mass <= 0.0) continue;
    bool found = false;
    for (auto& b : out)
      if (a.direction.chordTo(b.direction) <= tol) {
        b.mass += a.mass;
        found = true;
        break;
      }
    if (!found) out.push_back(a);
  }
  return AtomicMeasure(dims_, std::move(out));
}

namespace {

// Groups atoms by antipodal pair: (canonical direction, mass at +rep, mass at -rep).
struct PairMass {
  Direction rep;
  double plus = 0.0;
  double minus = 0.0;
};

std::vector<PairMass> pairMasses(const AtomicMeasure& s) {
  const double tol = 2.0 * std::sin(kDuplicateAngle / 2.0) + 1e-15;
  std::vector<PairMass> out;
  for (const auto& a : s.atoms()) {
    const Direction c = canonical(a.direction);
    const bool positive = c.dot(a.direction) > 0;
    PairMass* slot = nullptr;
    for (auto& p : out)
      if (p.rep.chordTo(c) <= tol) {
        slot = &p;
        break;
      }
    if (!slot) {
      out.push_back({c, 0.0, 0.0});
      slot = &out.back();
    }
    (positive ? slot->plus : slot->minus) += a.mass;
  }
  return out;
}

}  // namespace

bool AtomicMeasure::isEven(double tol) const {
  const double scale = std::max(1.0, totalMass());
  for (const auto& p : pairMasses(*this))
    if (std::abs(p.plus - p.minus) > tol * scale) return false;
  return true;
}

double supportFunction(const VPolytope& body, const Direction& u) {
  require(!body.isEmpty(), ErrorCode::InvalidBody, "support function of the empty set");
  require(u.dims() == body.dims(), ErrorCode::InvalidParameter, "dimension mismatch");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : body.vertices()) best = std::max(best, u.dot(v));
  return best;
}

double supportFunction(const Zonotope& body, const Direction& u) {
  require(u.dims() == body.dims(), ErrorCode::InvalidParameter, "dimension mismatch");
  double s = 0.0;
  for (const auto& g : body.generators()) s += g.halfLength * std::abs(u.dot(g.direction));
  return s;
}

double supportFunction(const HPolytope& body, const Direction& u) {
  return supportFunction(polytopeFromSupports(body), u);
}

std::vector<double> supportValues(const VPolytope& body, const DirectionSequence& dirs) {
  require(!body.isEmpty(), ErrorCode::InvalidBody, "support function of the empty set");
  require(dirs.dims() == body.dims(), ErrorCode::InvalidParameter, "dimension mismatch");
  const auto cols = vertexColumns(body);
  const auto& k = kernels::active();
  std::vector<double> out;
  out.reserve(dirs.size());
  for (const auto& u : dirs) out.push_back(k.maxDot(cols.pointers(), body.dims(), cols.size(), u.vec().data()));
  return out;
}

std::vector<double> supportValues(const Zonotope& body, const DirectionSequence& dirs) {
  require(dirs.dims() == body.dims(), ErrorCode::InvalidParameter, "dimension mismatch");
  kernels::PointColumns cols(body.dims());
  std::vector<double> w;
  for (const auto& g : body.generators()) {
    cols.push(g.direction.vec());
    w.push_back(g.halfLength);
  }
  const auto& k = kernels::active();
  std::vector<double> out;
  out.reserve(dirs.size());
  for (const auto& u : dirs)
    out.push_back(k.weightedAbsDot(cols.pointers(), body.dims(), cols.size(), w.data(), u.vec().data()));
  return out;
}

namespace {

struct HalfPlane {
  Vec2 n;  // unit normal
  double h;
  double angle;  // of the boundary direction (-n.y, n.x)
};

bool lineIntersection(const HalfPlane& a, const HalfPlane& b, Vec2& out) {
  const double det = a.n.x() * b.n.y() - a.n.y() * b.n.x();
  if (std::abs(det) < 1e-14) return false;
  out = Vec2((a.h * b.n.y() - b.h * a.n.y()) / det, (a.n.x() * b.h - b.n.x() * a.h) / det);
  return true;
}

std::vector<Vec2> pairwiseVertices(const std::vector<HalfPlane>& hp, double tol) {
  std::vector<Vec2> pts;
  for (std::size_t i = 0; i < hp.size(); ++i)
    for (std::size_t j = i + 1; j < hp.size(); ++j) {
      Vec2 p;
      if (!lineIntersection(hp[i], hp[j], p)) continue;
      bool ok = true;
      for (const auto& c : hp)
        if (c.n.dot(p) > c.h + tol) {
          ok = false;
          break;
        }
      if (ok) pts.push_back(p);
    }
  return pts;
}

// Sorted-angle sweep with a deque (half-plane intersection).
bool sweepVertices(std::vector<HalfPlane> hp, double tol, std::vector<Vec2>& out) {
  std::sort(hp.begin(), hp.end(), [](const HalfPlane& a, const HalfPlane& b) {
    return a.angle < b.angle || (a.angle == b.angle && a.h < b.h);
  });
  std::vector<HalfPlane> uniq;
  for (const auto& p : hp)
    if (uniq.empty() || std::abs(p.angle - uniq.back().angle) > 1e-15) uniq.push_back(p);
  auto outside = [&](const HalfPlane& p, const Vec2& x) { return p.n.dot(x) > p.h + tol; };
  std::deque<HalfPlane> dq;
  Vec2 x;
  for (const auto& p : uniq) {
    while (dq.size() >= 2) {
      if (!lineIntersection(dq[dq.size() - 1], dq[dq.size() - 2], x)) return false;
      if (!outside(p, x)) break;
      dq.pop_back();
    }
    while (dq.size() >= 2) {
      if (!lineIntersection(dq[0], dq[1], x)) return false;
      if (!outside(p, x)) break;
      dq.pop_front();
    }
    dq.push_back(p);
  }
  while (dq.size() >= 3) {
    if (!lineIntersection(dq[dq.size() - 1], dq[dq.size() - 2], x)) return false;
    if (!outside(dq[0], x)) break;
    dq.pop_back();
  }
  while (dq.size() >= 3) {
    if (!lineIntersection(dq[0], dq[1], x)) return false;
    if (!outside(dq[dq.size() - 1], x)) break;
    dq.pop_front();
  }
  if (dq.size() < 3) return false;
  out.clear();
  for (std::size_t i = 0; i < dq.size(); ++i) {
    if (!lineIntersection(dq[i], dq[(i + 1) % dq.size()], x)) return false;
    out.push_back(x);
  }
  for (const auto& q : out)
    for (const auto& c : hp)
      if (c.n.dot(q) > c.h + 1e2 * tol) return false;
  return true;
}

VPolytope fromSupports2D(const HPolytope& h, double scale) {
  std::vector<HalfPlane> hp;
  for (std::size_t i = 0; i < h.normals.size(); ++i) {
    const Vec2 n = to2(h.normals[i].vec());
    hp.push_back({n, h.supports[i], std::atan2(n.x(), -n.y())});
  }
  const double tol = 1e-10 * scale;
  std::vector<Vec2> verts;
  if (!sweepVertices(hp, tol, verts)) verts = pairwiseVertices(hp, tol);
  std::vector<Vector> pts;
  for (const auto& v : verts) pts.push_back(from2(v));
  return VPolytope(2, pts);
}

std::vector<Vec3> tripleVertices(const HPolytope& h, double tol) {
  const std::size_t k = h.normals.size();
  std::vector<Vec3> normals;
  for (const auto& u : h.normals) normals.push_back(to3(u.vec()));
  std::vector<Vec3> pts;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b)
      for (std::size_t c = b + 1; c < k; ++c) {
        Eigen::Matrix3d m;
        m.row(0) = normals[a];
        m.row(1) = normals[b];
        m.row(2) = normals[c];
        if (std::abs(m.determinant()) < 1e-12) continue;
        const Vec3 x = m.partialPivLu().solve(Vec3(h.supports[a], h.supports[b], h.supports[c]));
        bool ok = true;
        for (std::size_t i = 0; i < k && ok; ++i) ok = normals[i].dot(x) <= h.supports[i] + tol;
        if (ok) pts.push_back(x);
      }
  return pts;
}

// Chebyshev centre: the point deepest inside all halfspaces and its depth.
std::pair<Vec3, double> chebyshevCentre(const HPolytope& h, double scale) {
  LinearProgram lp(4);
  lp.objective[3] = 1.0;
  for (int j = 0; j < 4; ++j) lp.freeVariable[j] = true;
  for (std::size_t i = 0; i < h.normals.size(); ++i) {
    Eigen::VectorXd row(4);
    row << h.normals[i][0], h.normals[i][1], h.normals[i][2], 1.0;
    lp.addRow(row, RowSense::LessEqual, h.supports[i]);
  }
  Eigen::VectorXd cap = Eigen::VectorXd::Zero(4);
  cap[3] = 1.0;
  lp.addRow(cap, RowSense::LessEqual, scale);
  const auto res = solveLinearProgram(lp);
  if (res.status != LpStatus::Optimal) return {Vec3::Zero(), -std::numeric_limits<double>::infinity()};
  return {Vec3(res.x[0], res.x[1], res.x[2]), res.x[3]};
}

VPolytope fromSupports3D(const HPolytope& h, double scale) {
  const std::size_t k = h.normals.size();
  double minH = std::numeric_limits<double>::infinity();
  for (double v : h.supports) minH = std::min(minH, v);
  Vec3 shift = Vec3::Zero();
  std::vector<double> hs = h.supports;
  if (minH <= 1e-3 * scale) {
    const auto [c, depth] = chebyshevCentre(h, scale);
    if (depth < -1e-9 * scale) return VPolytope(3);
    if (depth <= 1e-6 * scale) {
      std::vector<Vector> pts;
      for (const auto& p : tripleVertices(h, 1e-9 * scale)) pts.push_back(from3(p));
      return VPolytope(3, pts);
    }
    shift = c;
    for (std::size_t i = 0; i < k; ++i) hs[i] -= to3(h.normals[i].vec()).dot(c);
  }
  // Polar: facets of conv{u_i / h_i} are the vertices of P.
  std::vector<Vec3> dual;
  dual.reserve(k);
  for (std::size_t i = 0; i < k; ++i) dual.push_back(to3(h.normals[i].vec()) / hs[i]);
  const auto hull = convexHull3D(dual, 1e-12);
  std::vector<Vector> pts;
  if (hull.dimension == 3) {
    for (const auto& f : hull.facets) {
      if (f.offset <= 0) {
        pts.clear();
        break;
      }
      pts.push_back(from3(f.normal / f.offset + shift));
    }
  }
  if (pts.empty()) {
    for (const auto& p : tripleVertices(h, 1e-9 * scale)) pts.push_back(from3(p));
  }
  return VPolytope(3, pts);
}

}  // namespace

VPolytope polytopeFromSupports(const HPolytope& h) {
  const int n = h.dims();
  require(h.normals.size() == h.supports.size(), ErrorCode::InvalidParameter,
          "normals and supports differ in length");
  require(n == 2 || n == 3, ErrorCode::UnsupportedDimension, "polytopeFromSupports handles n = 2, 3");
  for (double v : h.supports) require(std::isfinite(v), ErrorCode::InvalidData, "support values must be finite");
  if (!positiveHullIsWhole(h.normals))
    fail(ErrorCode::UnboundedPolytope, "normals do not positively span R^" + std::to_string(n));
  double scale = 1.0;
  for (double v : h.supports) scale = std::max(scale, std::abs(v));
  return n == 2 ? fromSupports2D(h, scale) : fromSupports3D(h, scale);
}

double volume(const VPolytope& body) {
  if (body.dims() == 2) return body.vertices().size() < 3 ? 0.0 : polygonArea(body.vertices());
  require(body.dims() == 3, ErrorCode::UnsupportedDimension, "volume for n = 2, 3");
  return convexHull3D(points3(body)).volume();
}

Vector centroid(const VPolytope& body) {
  require(!body.isEmpty(), ErrorCode::InvalidBody, "centroid of the empty set");
  const auto& v = body.vertices();
  if (body.dims() == 2 && v.size() >= 3) {
    double a = 0.0;
    Vector c = Vector::Zero(2);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto& p = v[i];
      const auto& q = v[(i + 1) % v.size()];
      const double cr = p[0] * q[1] - p[1] * q[0];
      a += cr;
      c += cr * (p + q);
    }
    return c / (3.0 * a);
  }
  if (body.dims() == 3 && body.affineDimension() == 3) return from3(convexHull3D(points3(body)).centroid());
  Vector c = Vector::Zero(body.dims());
  for (const auto& p : v) c += p;
  return c / static_cast<double>(v.size());
}

AtomicMeasure surfaceAreaMeasure(const VPolytope& body) {
  const int n = body.dims();
  require(n == 2 || n == 3, ErrorCode::UnsupportedDimension, "surface area measure for n = 2, 3");
  require(body.affineDimension() == n, ErrorCode::InvalidBody, "body is not full-dimensional");
  std::vector<AtomicMeasure::Atom> atoms;
  if (n == 2) {
    const auto& v = body.vertices();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Vector e = v[(i + 1) % v.size()] - v[i];
      atoms.push_back({Direction(Vector{{e[1], -e[0]}}), e.norm()});
    }
  } else {
    const auto hull = convexHull3D(points3(body));
    for (const auto& f : hull.facets) atoms.push_back({Direction(from3(f.normal)), f.area});
  }
  return AtomicMeasure(n, std::move(atoms)).merged();
}

double brightness(const VPolytope& body, const Direction& u) {
  require(u.dims() == body.dims(), ErrorCode::InvalidParameter, "dimension mismatch");
  return roseOfIntersections(surfaceAreaMeasure(body), u) / 2.0;
}

std::vector<double> brightnessValues(const VPolytope& body, const DirectionSequence& dirs) {
  auto v = roseValues(surfaceAreaMeasure(body), dirs);
  for (auto& x : v) x /= 2.0;
  return v;
}

Zonotope projectionBody(const AtomicMeasure& s) {
  require(s.isEven(), ErrorCode::Evenness, "projection body needs an even measure");
  std::vector<Zonotope::Generator> gens;
  for (const auto& p : pairMasses(s)) gens.push_back({p.rep, 0.5 * (p.plus + p.minus)});
  return Zonotope(s.dims(), std::move(gens));
}

AtomicMeasure zonotopeSurfaceMeasure(const Zonotope& z) {
  DirectionSequence dirs(z.dims());
  for (const auto& g : z.generators()) dirs.push_back(g.direction);
  require(spanRank(dirs) == z.dims(), ErrorCode::Span, "zonotope generators do not span R^" + std::to_string(z.dims()));
  std::vector<AtomicMeasure::Atom> atoms;
  for (const auto& g : z.generators()) {
    const Direction c = canonical(g.direction);
    atoms.push_back({c, g.halfLength});
    atoms.push_back({-c, g.halfLength});
  }
  return AtomicMeasure(z.dims(), std::move(atoms)).merged();
}

double roseOfIntersections(const AtomicMeasure& mu, const Direction& u) {
  require(u.dims() == mu.dims(), ErrorCode::InvalidParameter, "dimension mismatch");
  double s = 0.0;
  for (const auto& a : mu.atoms()) s += a.mass * std::abs(u.dot(a.direction));
  return s;
}

std::vector<double> roseValues(const AtomicMeasure& mu, const DirectionSequence& dirs) {
  require(dirs.dims() == mu.dims(), ErrorCode::InvalidParameter, "dimension mismatch");
  kernels::PointColumns cols(mu.dims());
  std::vector<double> w;
  for (const auto& a : mu.atoms()) {
    cols.push(a.direction.vec());
    w.push_back(a.mass);
  }
  const auto& k = kernels::active();
  std::vector<double> out;
  out.reserve(dirs.size());
  for (const auto& u : dirs)
    out.push_back(k.weightedAbsDot(cols.pointers(), mu.dims(), cols.size(), w.data(), u.vec().data()));
  return out;
}

namespace {

void checkClosure(const AtomicMeasure& s) {
  const double gap = s.barycenterSum().norm();
  require(gap <= 1e-8 * std::max(1.0, s.totalMass()), ErrorCode::Closure,
          "sum of m_j v_j is " + std::to_string(gap) + ", not the origin");
}

}  // namespace

VPolytope minkowskiReconstruct2D(const AtomicMeasure& input) {
  require(input.dims() == 2, ErrorCode::InvalidParameter, "minkowskiReconstruct2D needs n = 2");
  const AtomicMeasure s = input.merged();
  checkClosure(s);
  DirectionSequence dirs(2);
  for (const auto& a : s.atoms()) dirs.push_back(a.direction);
  require(spanRank(dirs) == 2, ErrorCode::DegenerateMeasure, "measure is concentrated on a line");

  std::vector<std::pair<double, double>> edges;  // (normal angle, length)
  for (const auto& a : s.atoms()) {
    double t = a.direction.angle();
    if (t >= kPi) t -= 2.0 * kPi;
    edges.emplace_back(t, a.mass);
  }
  std::sort(edges.begin(), edges.end());
  std::vector<Vector> pts;
  Vector p = Vector::Zero(2);
  for (const auto& [t, len] : edges) {
    pts.push_back(p);
    p += len * Vector{{-std::sin(t), std::cos(t)}};
  }
  VPolytope poly(2, pts);
  return poly.translated(-centroid(poly));
}

VPolytope minkowskiReconstruct(const AtomicMeasure& s) {
  if (s.dims() == 2) return minkowskiReconstruct2D(s);
  if (s.dims() == 3) return minkowskiReconstruct3D(s);
  fail(ErrorCode::UnsupportedDimension, "Minkowski reconstruction for n = 2, 3 only");
}

}  // namespace geotomo
