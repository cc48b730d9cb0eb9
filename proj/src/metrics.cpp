#include "geotomo/metrics.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "geotomo/error.hpp"
#include "geotomo/lp.hpp"

namespace geotomo {

namespace {

constexpr double kPi = std::numbers::pi;

void sameDims(int a, int b) {
  require(a == b, ErrorCode::InvalidParameter,
          "dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

// Wolfe's algorithm for the point of smallest norm in conv(points).
Vector minNormPoint(const std::vector<Vector>& pts) {
  const std::size_t m = pts.size();
  double scale = 0.0;
  for (const auto& p : pts) scale = std::max(scale, p.squaredNorm());
  const double eps = 1e-14 * std::max(scale, 1e-300);

  std::size_t first = 0;
  for (std::size_t i = 1; i < m; ++i)
    if (pts[i].squaredNorm() < pts[first].squaredNorm()) first = i;
  std::vector<std::size_t> set{first};
  std::vector<double> lambda{1.0};
  Vector x = pts[first];

  for (int major = 0; major < 10000; ++major) {
    std::size_t j = 0;
    double best = x.dot(pts[0]);
    for (std::size_t i = 1; i < m; ++i)
      if (double v = x.dot(pts[i]); v < best) {
        best = v;
        j = i;
      }
    if (x.squaredNorm() - best <= 1e-12 * scale) return x;
    if (std::find(set.begin(), set.end(), j) != set.end()) return x;
    set.push_back(j);
    lambda.push_back(0.0);

    for (int minor = 0; minor < 1000; ++minor) {
      const int s = static_cast<int>(set.size());
      Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(s + 1, s + 1);
      for (int a = 0; a < s; ++a) {
        for (int b = 0; b < s; ++b) kkt(a, b) = pts[set[a]].dot(pts[set[b]]);
        kkt(a, s) = kkt(s, a) = 1.0;
      }
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(s + 1);
      rhs[s] = 1.0;
      const Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);
      const Eigen::VectorXd alpha = sol.head(s);
      if ((alpha.array() > eps).all()) {
        lambda.assign(alpha.data(), alpha.data() + s);
        break;
      }
      double theta = 1.0;
      for (int a = 0; a < s; ++a)
        if (alpha[a] <= eps) theta = std::min(theta, lambda[a] / (lambda[a] - alpha[a]));
      std::vector<std::size_t> keepSet;
      std::vector<double> keepLambda;
      for (int a = 0; a < s; ++a) {
        const double l = (1.0 - theta) * lambda[a] + theta * alpha[a];
        if (l > eps) {
          keepSet.push_back(set[a]);
          keepLambda.push_back(l);
        }
      }
      set = std::move(keepSet);
      lambda = std::move(keepLambda);
      double sum = 0.0;
      for (double l : lambda) sum += l;
      for (double& l : lambda) l /= sum;
    }
    x = Vector::Zero(pts[0].size());
    for (std::size_t a = 0; a < set.size(); ++a) x += lambda[a] * pts[set[a]];
  }
  return x;
}

double maxVertexDistance(const VPolytope& from, const VPolytope& to) {
  double best = 0.0;
  for (const auto& v : from.vertices()) best = std::max(best, distanceToPolytope(v, to));
  return best;
}

double radius(const VPolytope& p) {
  double r = 0.0;
  for (const auto& v : p.vertices()) r = std::max(r, v.norm());
  return r;
}

// Breakpoints of the normal fan of a convex polygon (CCW vertex order).
std::vector<double> fanBreakpoints(const VPolytope& p) {
  std::vector<double> out;
  const auto& v = p.vertices();
  if (v.size() < 2) return out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vector e = v[(i + 1) % v.size()] - v[i];
    double t = std::atan2(-e[0], e[1]);
    if (t < 0) t += 2.0 * kPi;
    out.push_back(t);
  }
  return out;
}

Vector activeVertex(const VPolytope& p, double theta) {
  const Vector u{{std::cos(theta), std::sin(theta)}};
  std::size_t best = 0;
  for (std::size_t i = 1; i < p.vertices().size(); ++i)
    if (p.vertices()[i].dot(u) > p.vertices()[best].dot(u)) best = i;
  return p.vertices()[best];
}

double l2Squared2D(const VPolytope& a, const VPolytope& b) {
  auto bp = fanBreakpoints(a);
  const auto bb = fanBreakpoints(b);
  bp.insert(bp.end(), bb.begin(), bb.end());
  std::sort(bp.begin(), bp.end());
  if (bp.empty()) bp.push_back(0.0);
  auto primitive = [](double p, double q, double t) {
    return p * p * (t / 2.0 + std::sin(2.0 * t) / 4.0) + q * q * (t / 2.0 - std::sin(2.0 * t) / 4.0) +
           p * q * std::sin(t) * std::sin(t);
  };
  double total = 0.0;
  for (std::size_t i = 0; i < bp.size(); ++i) {
    const double t0 = bp[i];
    const double t1 = i + 1 < bp.size() ? bp[i + 1] : bp[0] + 2.0 * kPi;
    if (t1 - t0 <= 0.0) continue;
    const double mid = 0.5 * (t0 + t1);
    const Vector d = activeVertex(a, mid) - activeVertex(b, mid);
    total += primitive(d[0], d[1], t1) - primitive(d[0], d[1], t0);
  }
  return std::max(total, 0.0);
}

void gaussLegendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

double l2Squared3D(const VPolytope& a, const VPolytope& b, int heightNodes, int azimuthNodes) {
  std::vector<double> z, wz;
  gaussLegendre(heightNodes, z, wz);
  DirectionSequence dirs(3);
  std::vector<double> weight;
  dirs.reserve(static_cast<std::size_t>(heightNodes) * azimuthNodes);
  const double dphi = 2.0 * kPi / azimuthNodes;
  for (int i = 0; i < heightNodes; ++i) {
    const double r = std::sqrt(std::max(0.0, 1.0 - z[i] * z[i]));
    for (int j = 0; j < azimuthNodes; ++j) {
      const double phi = (j + 0.5) * dphi;
      dirs.push_back(Direction(Vector{{r * std::cos(phi), r * std::sin(phi), z[i]}}));
      weight.push_back(wz[i] * dphi);
    }
  }
  const auto ha = supportValues(a, dirs);
  const auto hb = supportValues(b, dirs);
  double total = 0.0;
  for (std::size_t i = 0; i < ha.size(); ++i) total += weight[i] * (ha[i] - hb[i]) * (ha[i] - hb[i]);
  return total;
}

}  // namespace

double pseudonormK(std::span<const double> diffs) {
  require(!diffs.empty(), ErrorCode::InvalidParameter, "pseudonorm of an empty list");
  const double ss = kernels::active().sumSquares(diffs.data(), diffs.size());
  return std::sqrt(ss / static_cast<double>(diffs.size()));
}

double distanceToPolytope(const Vector& x, const VPolytope& body) {
  require(!body.isEmpty(), ErrorCode::InvalidBody, "distance to the empty set");
  sameDims(static_cast<int>(x.size()), body.dims());
  std::vector<Vector> shifted;
  shifted.reserve(body.vertices().size());
  for (const auto& v : body.vertices()) shifted.push_back(v - x);
  return minNormPoint(shifted).norm();
}

MetricValue hausdorff(const VPolytope& a, const VPolytope& b) {
  sameDims(a.dims(), b.dims());
  require(!a.isEmpty() && !b.isEmpty(), ErrorCode::InvalidBody, "Hausdorff distance to the empty set");
  return {std::max(maxVertexDistance(a, b), maxVertexDistance(b, a)), 0.0};
}

MetricValue hausdorffSampled(const VPolytope& a, const VPolytope& b, double resolution) {
  sameDims(a.dims(), b.dims());
  const auto net = epsilonNet(a.dims(), resolution);
  const auto ha = supportValues(a, net);
  const auto hb = supportValues(b, net);
  double best = 0.0;
  for (std::size_t i = 0; i < ha.size(); ++i) best = std::max(best, std::abs(ha[i] - hb[i]));
  return {best, resolution * (radius(a) + radius(b))};
}

MetricValue l2dist(const VPolytope& a, const VPolytope& b, const L2Options& options) {
  sameDims(a.dims(), b.dims());
  require(!a.isEmpty() && !b.isEmpty(), ErrorCode::InvalidBody, "L2 distance to the empty set");
  if (a.dims() == 2) return {std::sqrt(l2Squared2D(a, b)), 0.0};
  require(a.dims() == 3, ErrorCode::UnsupportedDimension, "l2dist handles n = 2, 3");
  require(options.heightNodes >= 2 && options.azimuthNodes >= 4, ErrorCode::InvalidParameter,
          "quadrature too coarse");
  const double fine = std::sqrt(l2Squared3D(a, b, options.heightNodes, options.azimuthNodes));
  const double coarse = std::sqrt(l2Squared3D(a, b, options.heightNodes / 2, options.azimuthNodes / 2));
  return {fine, std::abs(fine - coarse)};
}

double dudley(const AtomicMeasure& mu, const AtomicMeasure& nu) {
  sameDims(mu.dims(), nu.dims());
  // Signed weights on the union of the supports.
  const double tol = 2.0 * std::sin(kDuplicateAngle / 2.0) + 1e-15;
  std::vector<Vector> pts;
  std::vector<double> c;
  auto add = [&](const AtomicMeasure& m, double sign) {
    for (const auto& a : m.atoms()) {
      bool found = false;
      for (std::size_t i = 0; i < pts.size(); ++i)
        if ((pts[i] - a.direction.vec()).norm() <= tol) {
          c[i] += sign * a.mass;
          found = true;
          break;
        }
      if (!found) {
        pts.push_back(a.direction.vec());
        c.push_back(sign * a.mass);
      }
    }
  };
  add(mu, 1.0);
  add(nu, -1.0);
  {
    std::vector<Vector> p2;
    std::vector<double> c2;
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (c[i] != 0.0) {
        p2.push_back(pts[i]);
        c2.push_back(c[i]);
      }
    pts = std::move(p2);
    c = std::move(c2);
  }
  const int m = static_cast<int>(pts.size());
  if (m == 0) return 0.0;
  double csum = 0.0;
  for (double v : c) csum += v;

  // Variables g_p = f_p + s in [0, 2s], then s, L.
  const int sVar = m, lVar = m + 1;
  LinearProgram lp(m + 2);
  for (int p = 0; p < m; ++p) lp.objective[p] = c[p];
  lp.objective[sVar] = -csum;
  for (int p = 0; p < m; ++p) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(m + 2);
    row[p] = 1.0;
    row[sVar] = -2.0;
    lp.addRow(row, RowSense::LessEqual, 0.0);
  }
  {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(m + 2);
    row[sVar] = row[lVar] = 1.0;
    lp.addRow(row, RowSense::LessEqual, 1.0);
  }
  auto dist = [&](int p, int q) { return (pts[p] - pts[q]).norm(); };
  auto addPair = [&](int p, int q) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(m + 2);
    row[p] = 1.0;
    row[q] = -1.0;
    row[lVar] = -dist(p, q);
    lp.addRow(row, RowSense::LessEqual, 0.0);
    row[p] = -1.0;
    row[q] = 1.0;
    lp.addRow(row, RowSense::LessEqual, 0.0);
  };
  // Start from the nearest-neighbour pairs; add violated pairs until none remain.
  std::vector<std::vector<char>> present(m, std::vector<char>(m, 0));
  for (int p = 0; p < m; ++p) {
    int nearest = -1;
    for (int q = 0; q < m; ++q)
      if (q != p && (nearest < 0 || dist(p, q) < dist(p, nearest))) nearest = q;
    if (nearest >= 0 && !present[p][nearest]) {
      present[p][nearest] = present[nearest][p] = 1;
      addPair(p, nearest);
    }
  }
  for (int round = 0;; ++round) {
    const auto res = solveLinearProgram(lp);
    require(res.status == LpStatus::Optimal, ErrorCode::Convergence, "Dudley LP did not reach an optimum");
    struct Violation {
      double amount;
      int p, q;
    };
    std::vector<Violation> viol;
    const double L = res.x[lVar];
    for (int p = 0; p < m; ++p)
      for (int q = p + 1; q < m; ++q) {
        if (present[p][q]) continue;
        const double v = std::abs(res.x[p] - res.x[q]) - L * dist(p, q);
        if (v > 1e-12) viol.push_back({v, p, q});
      }
    if (viol.empty() || round > 4 * m * m) return std::max(res.objective, 0.0);
    std::sort(viol.begin(), viol.end(), [](const Violation& x, const Violation& y) {
      return x.amount > y.amount || (x.amount == y.amount && (x.p < y.p || (x.p == y.p && x.q < y.q)));
    });
    const std::size_t take = std::min<std::size_t>(viol.size(), static_cast<std::size_t>(std::max(4, m)));
    for (std::size_t i = 0; i < take; ++i) {
      present[viol[i].p][viol[i].q] = present[viol[i].q][viol[i].p] = 1;
      addPair(viol[i].p, viol[i].q);
    }
  }
}

ProhorovBound prohorovUpper(const AtomicMeasure& mu, const AtomicMeasure& nu) {
  const double m0 = mu.totalMass();
  require(m0 > 0.0, ErrorCode::InvalidParameter, "Prohorov bound needs mu(S) > 0");
  ProhorovBound out;
  out.dudley = dudley(mu, nu);
  out.valid = out.dudley <= 1.0;
  if (out.valid) out.bound = (1.0 + std::sqrt(3.0 + m0)) * std::sqrt(out.dudley);
  return out;
}

}  // namespace geotomo
