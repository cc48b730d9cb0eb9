#include <Eigen/QR>
#include <cmath>
#include <limits>

#include "geotomo/error.hpp"
#include "geotomo/solvers.hpp"

namespace geotomo {

namespace {

Eigen::VectorXd solvePassive(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const std::vector<int>& passive) {
  Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(passive.size()));
  for (std::size_t c = 0; c < passive.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = a.col(passive[c]);
  return sub.colPivHouseholderQr().solve(b);
}

}  // namespace

NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const NnlsOptions& options) {
  require(a.rows() == b.size(), ErrorCode::InvalidParameter, "nnls: A and b differ in row count");
  require(a.allFinite() && b.allFinite(), ErrorCode::InvalidData, "nnls: non-finite entries");
  const int n = static_cast<int>(a.cols());
  const int maxIter = options.maxIterations > 0 ? options.maxIterations : 3 * n + 100;
  const double tol = options.tolerance > 0
                         ? options.tolerance
                         : 10.0 * std::numeric_limits<double>::epsilon() *
                               (n > 0 ? a.cwiseAbs().colwise().sum().maxCoeff() : 0.0) *
                               static_cast<double>(std::max<Eigen::Index>(a.rows(), n));

  NnlsResult r;
  r.x = Eigen::VectorXd::Zero(n);
  std::vector<char> inP(n, 0);
  std::vector<int> passive;
  Eigen::VectorXd w = a.transpose() * b;
  while (r.iterations < maxIter) {
    int enter = -1;
    double best = tol;
    for (int j = 0; j < n; ++j)
      if (!inP[j] && w[j] > best) {
        best = w[j];
        enter = j;
      }
    if (enter < 0) break;
    inP[enter] = 1;
    passive.push_back(enter);

    while (true) {
      ++r.iterations;
      const Eigen::VectorXd z = solvePassive(a, b, passive);
      bool allPositive = true;
      for (std::size_t c = 0; c < passive.size(); ++c)
        if (z[static_cast<Eigen::Index>(c)] <= tol) allPositive = false;
      if (allPositive) {
        for (std::size_t c = 0; c < passive.size(); ++c) r.x[passive[c]] = z[static_cast<Eigen::Index>(c)];
        break;
      }
      double alpha = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < passive.size(); ++c) {
        const double zc = z[static_cast<Eigen::Index>(c)];
        if (zc <= tol) {
          const double xc = r.x[passive[c]];
          alpha = std::min(alpha, xc / (xc - zc));
        }
      }
      for (std::size_t c = 0; c < passive.size(); ++c) {
        const int j = passive[c];
        r.x[j] += alpha * (z[static_cast<Eigen::Index>(c)] - r.x[j]);
      }
      std::vector<int> keep;
      for (int j : passive) {
        if (r.x[j] <= tol) {
          r.x[j] = 0.0;
          inP[j] = 0;
        } else {
          keep.push_back(j);
        }
      }
      passive = std::move(keep);
      if (passive.empty() || r.iterations >= maxIter) break;
    }
    w = a.transpose() * (b - a * r.x);
  }
  if (r.iterations >= maxIter)
    fail(ErrorCode::Convergence, "nnls hit the iteration cap (" + std::to_string(maxIter) + ")");

  const Eigen::VectorXd resid = a * r.x - b;
  r.residualNorm = resid.norm();
  const Eigen::VectorXd g = a.transpose() * resid;
  r.kktResidual = 0.0;
  for (int j = 0; j < n; ++j) {
    r.kktResidual = std::max(r.kktResidual, r.x[j] > 0 ? std::abs(g[j]) : std::max(-g[j], 0.0));
    if (r.x[j] > 0) r.passiveSet.push_back(j);
  }
  return r;
}

}  // namespace geotomo
