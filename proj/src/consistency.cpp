#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "geotomo/error.hpp"
#include "geotomo/lp.hpp"
#include "geotomo/solvers.hpp"

namespace geotomo {

namespace {

constexpr double kPi = std::numbers::pi;

double scaleOf(const Eigen::VectorXd& y) { return std::max(1.0, y.cwiseAbs().maxCoeff()); }

}  // namespace

QPSolution projectOntoPolyhedralCone(const Eigen::MatrixXd& g, const Eigen::VectorXd& y) {
  require(g.cols() == y.size(), ErrorCode::InvalidParameter, "constraint matrix has the wrong width");
  QPSolution s;
  s.constraintCount = static_cast<int>(g.rows());
  if (g.rows() == 0) {
    s.solution = y;
    s.multipliers.resize(0);
    return s;
  }
  const NnlsResult dual = nnls(g.transpose(), -y);
  s.multipliers = dual.x;
  s.solution = y + g.transpose() * dual.x;
  s.iterations = dual.iterations;
  s.objective = (y - s.solution).squaredNorm();
  s.activeSet = dual.passiveSet;
  const Eigen::VectorXd gh = g * s.solution;
  double kkt = 0.0;
  for (Eigen::Index i = 0; i < gh.size(); ++i) {
    kkt = std::max(kkt, -gh[i]);
    kkt = std::max(kkt, std::abs(dual.x[i] * gh[i]));
  }
  s.kktResidual = kkt;
  return s;
}

Eigen::MatrixXd rademacherConstraints(const std::vector<double>& t) {
  const int k = static_cast<int>(t.size());
  require(k >= 3, ErrorCode::InvalidParameter, "consistency constraints need k >= 3");
  auto diff = [&](int a, int b) {  // t_b - t_a going counter-clockwise
    double d = t[b] - t[a];
    if (d <= 0) d += 2.0 * kPi;
    return d;
  };
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    const int prev = (i + k - 1) % k, next = (i + 1) % k;
    const double a = diff(prev, i), b = diff(i, next);
    g(i, prev) += std::sin(b);
    g(i, next) += std::sin(a);
    g(i, i) -= std::sin(a + b);
  }
  return g;
}

QPSolution consistencyConstrainedLSQ2D(const Eigen::VectorXd& y, const std::vector<double>& angles) {
  const int k = static_cast<int>(angles.size());
  require(y.size() == k, ErrorCode::InvalidParameter, "values and angles differ in length");
  require(k >= 3, ErrorCode::InvalidParameter, "consistency fit needs k >= 3");
  std::vector<double> wrapped(k);
  for (int i = 0; i < k; ++i) {
    double a = std::fmod(angles[i], 2.0 * kPi);
    if (a < 0) a += 2.0 * kPi;
    wrapped[i] = a;
  }
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return wrapped[a] < wrapped[b]; });
  std::vector<double> sorted(k);
  Eigen::VectorXd ys(k);
  for (int s = 0; s < k; ++s) {
    sorted[s] = wrapped[order[s]];
    ys[s] = y[order[s]];
  }
  double maxGap = sorted[0] + 2.0 * kPi - sorted[k - 1];
  for (int s = 1; s < k; ++s) {
    require(sorted[s] - sorted[s - 1] > 1e-12, ErrorCode::DuplicateDirection, "repeated measurement angle");
    maxGap = std::max(maxGap, sorted[s] - sorted[s - 1]);
  }
  require(maxGap < kPi, ErrorCode::PositiveHull, "an angular gap of at least pi leaves the polygon unbounded");

  QPSolution sol = projectOntoPolyhedralCone(rademacherConstraints(sorted), ys);
  Eigen::VectorXd h(k);
  for (int s = 0; s < k; ++s) h[order[s]] = sol.solution[s];
  sol.solution = h;
  std::vector<int> active;
  for (int c : sol.activeSet) active.push_back(order[c]);
  std::sort(active.begin(), active.end());
  sol.activeSet = active;
  Eigen::VectorXd mult(k);
  for (int s = 0; s < k; ++s) mult[order[s]] = sol.multipliers[s];
  sol.multipliers = mult;
  return sol;
}

bool isConsistent(const Eigen::VectorXd& h, const DirectionSequence& dirs, double tol) {
  HPolytope hp{dirs, std::vector<double>(h.data(), h.data() + h.size())};
  const VPolytope p = polytopeFromSupports(hp);
  if (p.isEmpty()) return false;
  const double scale = scaleOf(h);
  const auto s = supportValues(p, dirs);
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] < h[static_cast<Eigen::Index>(i)] - tol * scale) return false;
  return true;
}

namespace {

// lambda >= 0 with sum lambda_j u_j = 0 and sum lambda_j = 1 minimizing
// lambda . h; a negative optimum certifies that P(h) is empty.
bool farkasCut(const Eigen::VectorXd& h, const DirectionSequence& dirs, Eigen::VectorXd& cut) {
  const int k = static_cast<int>(dirs.size());
  LinearProgram lp(k);
  lp.objective = -h;
  for (int a = 0; a < 3; ++a) {
    Eigen::VectorXd row(k);
    for (int j = 0; j < k; ++j) row[j] = dirs[static_cast<std::size_t>(j)][a];
    lp.addRow(row, RowSense::Equal, 0.0);
  }
  lp.addRow(Eigen::VectorXd::Ones(k), RowSense::Equal, 1.0);
  const auto res = solveLinearProgram(lp);
  if (res.status != LpStatus::Optimal || res.x.dot(h) >= 0) return false;
  cut = res.x;
  return true;
}

}  // namespace

QPSolution consistencyConstrainedLSQ3D(const Eigen::VectorXd& y, const DirectionSequence& dirs,
                                       const CuttingPlaneOptions& options) {
  const int k = static_cast<int>(dirs.size());
  require(dirs.dims() == 3, ErrorCode::InvalidParameter, "consistencyConstrainedLSQ3D needs n = 3");
  require(y.size() == k, ErrorCode::InvalidParameter, "values and directions differ in length");
  require(positiveHullIsWhole(dirs), ErrorCode::PositiveHull, "directions do not positively span R^3");
  const double scale = scaleOf(y);
  const double tol = options.violationTolerance * scale;

  std::vector<Eigen::VectorXd> cuts;
  QPSolution sol;
  sol.solution = y;
  int totalIterations = 0;
  for (int round = 0;; ++round) {
    const Eigen::VectorXd& h = sol.solution;
    HPolytope hp{dirs, std::vector<double>(h.data(), h.data() + k)};
    const VPolytope p = polytopeFromSupports(hp);
    std::vector<Eigen::VectorXd> fresh;
    if (p.isEmpty()) {
      Eigen::VectorXd lambda;
      if (farkasCut(h, dirs, lambda)) fresh.push_back(lambda);
    } else {
      for (int i = 0; i < k; ++i) {
        const Direction& u = dirs[static_cast<std::size_t>(i)];
        std::size_t arg = 0;
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t v = 0; v < p.vertices().size(); ++v)
          if (double d = u.dot(p.vertices()[v]); d > best) {
            best = d;
            arg = v;
          }
        if (best >= h[i] - tol) continue;
        // Normals active at the maximizing vertex; u_i lies in their cone.
        const Vector& x = p.vertices()[arg];
        std::vector<int> active;
        for (int j = 0; j < k; ++j)
          if (j != i && std::abs(dirs[static_cast<std::size_t>(j)].dot(x) - h[j]) <= 1e-7 * scale) active.push_back(j);
        if (active.empty()) continue;
        Eigen::MatrixXd a(3, static_cast<Eigen::Index>(active.size()));
        for (std::size_t c = 0; c < active.size(); ++c) a.col(static_cast<Eigen::Index>(c)) = dirs[static_cast<std::size_t>(active[c])].vec();
        const NnlsResult lam = nnls(a, u.vec());
        if (lam.residualNorm > 1e-6) continue;
        Eigen::VectorXd row = Eigen::VectorXd::Zero(k);
        for (std::size_t c = 0; c < active.size(); ++c) row[active[c]] = lam.x[static_cast<Eigen::Index>(c)];
        row[i] -= 1.0;
        fresh.push_back(row);
      }
    }
    if (fresh.empty()) {
      sol.cutRounds = round;
      sol.iterations = totalIterations;
      return sol;
    }
    if (round >= options.maxRounds)
      fail(ErrorCode::Convergence, "cutting planes did not converge in " + std::to_string(options.maxRounds) + " rounds");
    for (auto& c : fresh) {
      bool dup = false;
      for (const auto& old : cuts)
        if ((old - c).lpNorm<Eigen::Infinity>() <= 1e-12) dup = true;
      if (!dup) cuts.push_back(std::move(c));
    }
    Eigen::MatrixXd g(static_cast<Eigen::Index>(cuts.size()), k);
    for (std::size_t r = 0; r < cuts.size(); ++r) g.row(static_cast<Eigen::Index>(r)) = cuts[r].transpose();
    const Eigen::VectorXd prev = sol.solution;
    sol = projectOntoPolyhedralCone(g, y);
    totalIterations += sol.iterations;
    if ((sol.solution - prev).lpNorm<Eigen::Infinity>() <= 1e-14 * scale) {
      // Only repeated cuts: the remaining violations are below the geometry
      // tolerance.
      sol.cutRounds = round + 1;
      sol.iterations = totalIterations;
      return sol;
    }
  }
}

QPSolution consistencyConstrainedLSQ(const Eigen::VectorXd& y, const DirectionSequence& dirs) {
  if (dirs.dims() == 2) {
    std::vector<double> angles;
    angles.reserve(dirs.size());
    for (const auto& d : dirs) angles.push_back(d.angle());
    return consistencyConstrainedLSQ2D(y, angles);
  }
  require(dirs.dims() == 3, ErrorCode::UnsupportedDimension, "consistency fitting for n = 2, 3");
  return consistencyConstrainedLSQ3D(y, dirs);
}

}  // namespace geotomo
