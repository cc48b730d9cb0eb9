#include <Eigen/Cholesky>
#include <Eigen/Geometry>
#include <cmath>
#include <limits>
#include <map>

#include "geotomo/bodies.hpp"
#include "geotomo/error.hpp"
#include "geotomo/hull.hpp"

namespace geotomo {

namespace {

struct Geometry {
  bool valid = false;       // every facet present with positive area
  double volume = 0.0;
  Eigen::VectorXd areas;    // F_j = dV/dh_j
  Eigen::MatrixXd hessian;  // d^2 V / dh dh
  std::vector<Vec3> vertices;
};

// Facet areas, volume and the Hessian of the volume of P(h), from the polar
// hull conv{u_j / h_j}. Requires the origin inside P(h), i.e. all h_j > 0.
Geometry polarGeometry(const std::vector<Vec3>& u, const Eigen::VectorXd& h) {
  const int n = static_cast<int>(u.size());
  Geometry g;
  std::vector<Vec3> polar(n);
  for (int j = 0; j < n; ++j) {
    if (!(h[j] > 0)) return g;
    polar[j] = u[j] / h[j];
  }
  const auto hull = convexHull3D(polar, 1e-12);
  if (hull.dimension < 3 || static_cast<int>(hull.vertices.size()) < n) return g;

  // One primal vertex per hull triangle, from the plane of its own three
  // points; merged facets would drop short primal edges.
  const auto& hv = hull.vertices;
  std::vector<Vec3> primal(hull.triangles.size());
  for (std::size_t t = 0; t < hull.triangles.size(); ++t) {
    const auto& tri = hull.triangles[t];
    Vec3 nrm = (hv[tri[1]] - hv[tri[0]]).cross(hv[tri[2]] - hv[tri[0]]);
    if (nrm.dot(hull.triangleNormals[t]) < 0) nrm = -nrm;
    const double offset = nrm.dot(hv[tri[0]]);
    if (!(offset > 0)) return g;
    primal[t] = nrm / offset;
  }

  std::map<std::pair<int, int>, double> edgeLength;
  for (std::size_t t = 0; t < hull.triangles.size(); ++t)
    for (int e = 0; e < 3; ++e) {
      const int nb = hull.neighbors[t][e];
      if (nb <= static_cast<int>(t)) continue;
      const int a = hull.sourceIndex[hull.triangles[t][e]];
      const int b = hull.sourceIndex[hull.triangles[t][(e + 1) % 3]];
      edgeLength[{std::min(a, b), std::max(a, b)}] += (primal[t] - primal[nb]).norm();
    }

  g.areas = Eigen::VectorXd::Zero(n);
  g.hessian = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [jl, len] : edgeLength) {
    const auto [j, l] = jl;
    const double c = u[j].dot(u[l]);
    const double s = u[j].cross(u[l]).norm();
    g.areas[j] += 0.5 * len * (h[l] - h[j] * c) / s;
    g.areas[l] += 0.5 * len * (h[j] - h[l] * c) / s;
    g.hessian(j, l) += len / s;
    g.hessian(l, j) += len / s;
    g.hessian(j, j) -= len * c / s;
    g.hessian(l, l) -= len * c / s;
  }
  g.volume = h.dot(g.areas) / 3.0;
  if (!(g.volume > 0) || g.areas.minCoeff() <= 0) return g;
  g.vertices = std::move(primal);
  g.valid = true;
  return g;
}

}  // namespace

VPolytope minkowskiReconstruct3D(const AtomicMeasure& input, const MinkowskiOptions& options) {
  require(input.dims() == 3, ErrorCode::InvalidParameter, "minkowskiReconstruct3D needs n = 3");
  const AtomicMeasure s = input.merged();
  {
    const double gap = s.barycenterSum().norm();
    require(gap <= 1e-8 * std::max(1.0, s.totalMass()), ErrorCode::Closure,
            "sum of m_j v_j is " + std::to_string(gap) + ", not the origin");
  }
  DirectionSequence dirs(3);
  for (const auto& a : s.atoms()) dirs.push_back(a.direction);
  require(spanRank(dirs) == 3, ErrorCode::DegenerateMeasure, "measure is concentrated on a great circle");

  const int n = static_cast<int>(s.atoms().size());
  std::vector<Vec3> u(n);
  Eigen::VectorXd w(n);
  for (int j = 0; j < n; ++j) {
    const auto& a = s.atoms()[j];
    u[j] = Vec3(a.direction[0], a.direction[1], a.direction[2]);
    w[j] = a.mass;
  }
  const double totalMass = w.sum();
  w /= totalMass;

  auto objective = [&](const Geometry& g, const Eigen::VectorXd& h) {
    return g.valid ? w.dot(h) - std::log(g.volume) : std::numeric_limits<double>::infinity();
  };
  // Moves the origin to the vertex mean; f is translation invariant.
  auto recentre = [&](Eigen::VectorXd& h, const Geometry& g) {
    Vec3 c = Vec3::Zero();
    for (const auto& v : g.vertices) c += v;
    c /= static_cast<double>(g.vertices.size());
    for (int j = 0; j < n; ++j) h[j] -= u[j].dot(c);
  };

  // Planes tangent to the ball of radius 3: every facet present, sum w h = 3.
  Eigen::VectorXd h = Eigen::VectorXd::Constant(n, 3.0);
  Geometry geo = polarGeometry(u, h);
  require(geo.valid, ErrorCode::DegenerateMeasure, "initial polytope is degenerate");
  double f = objective(geo, h);
  double lambda = 1e-8;
  int iter = 0;
  double gradNorm = std::numeric_limits<double>::infinity();
  for (; iter < options.maxIterations; ++iter) {
    const Eigen::VectorXd grad = w - geo.areas / geo.volume;
    gradNorm = grad.lpNorm<Eigen::Infinity>();
    if (gradNorm <= options.gradientTolerance) break;
    const Eigen::MatrixXd hess =
        -geo.hessian / geo.volume + geo.areas * geo.areas.transpose() / (geo.volume * geo.volume);
    const double scale = std::max(hess.diagonal().cwiseAbs().maxCoeff(), 1e-300);

    bool accepted = false;
    for (int attempt = 0; attempt < 60 && !accepted; ++attempt) {
      Eigen::MatrixXd m = hess;
      m.diagonal().array() += lambda * scale;
      const Eigen::VectorXd step = m.ldlt().solve(-grad);
      const double slope = grad.dot(step);
      if (!step.allFinite() || slope >= 0) {
        lambda = std::max(lambda * 10.0, 1e-12);
        continue;
      }
      double alpha = 1.0;
      for (int ls = 0; ls < 30; ++ls, alpha *= 0.5) {
        const Eigen::VectorXd trial = h + alpha * step;
        Geometry tg = polarGeometry(u, trial);
        const double tf = objective(tg, trial);
        if (tf <= f + 1e-4 * alpha * slope || (tg.valid && std::abs(tf - f) <= 1e-15 * std::abs(f) &&
                                                std::abs(alpha * slope) < 1e-14)) {
          h = trial;
          geo = std::move(tg);
          f = tf;
          accepted = true;
          break;
        }
      }
      if (accepted) {
        lambda = alpha == 1.0 ? std::max(lambda / 10.0, 1e-14) : lambda;
      } else {
        lambda = std::max(lambda * 10.0, 1e-12);
      }
    }
    if (!accepted) break;
    recentre(h, geo);
    geo = polarGeometry(u, h);
    require(geo.valid, ErrorCode::Convergence, "lost a facet while recentring");
    f = objective(geo, h);
  }
  if (gradNorm > options.gradientTolerance)
    fail(ErrorCode::Convergence, "Minkowski solver stopped after " + std::to_string(iter) +
                                     " iterations with gradient residual " + std::to_string(gradNorm));

  const double t = std::sqrt(totalMass / geo.areas.sum());
  std::vector<Vector> pts;
  pts.reserve(geo.vertices.size());
  for (const auto& v : geo.vertices) pts.push_back(Vector{{t * v.x(), t * v.y(), t * v.z()}});
  VPolytope poly(3, pts);
  return poly.translated(-centroid(poly));
}

}  // namespace geotomo
