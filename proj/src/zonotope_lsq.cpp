#include <cmath>

#include "geotomo/error.hpp"
#include "geotomo/solvers.hpp"

namespace geotomo {

ZonotopeFit zonotopeLSQ(const Eigen::VectorXd& y, const DirectionSequence& dirs, const DirectionSequence& nodeDirs) {
  const int n = dirs.dims();
  require(nodeDirs.dims() == n, ErrorCode::InvalidParameter, "node dimension mismatch");
  require(y.size() == static_cast<Eigen::Index>(dirs.size()), ErrorCode::InvalidParameter,
          "values and directions differ in length");
  require(spanRank(dirs) == n, ErrorCode::Span, "measurement directions do not span R^" + std::to_string(n));

  // One representative per antipodal pair, first appearance wins.
  const double tol = 2.0 * std::sin(kDuplicateAngle / 2.0) + 1e-15;
  DirectionSequence reps(n);
  for (const auto& v : nodeDirs) {
    const Direction c = canonical(v);
    bool dup = false;
    for (const auto& r : reps)
      if (std::min(r.chordTo(c), r.chordTo(-c)) <= tol) {
        dup = true;
        break;
      }
    if (!dup) reps.push_back(c);
  }

  const auto cols = dirs.columns();
  const auto& kern = kernels::active();
  const std::size_t k = dirs.size();
  std::vector<std::vector<double>> kept;
  ZonotopeFit fit;
  fit.columns = DirectionSequence(n);
  std::vector<double> col(k);
  for (const auto& v : reps) {
    kern.absDot(cols.pointers(), n, k, v.vec().data(), col.data());
    if (kern.maxValue(col.data(), k) < 1e-12) continue;
    kept.push_back(col);
    fit.columns.push_back(v);
  }
  Eigen::MatrixXd a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t j = 0; j < kept.size(); ++j)
    for (std::size_t i = 0; i < k; ++i) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = kept[j][i];

  fit.nnls = nnls(a, y);
  std::vector<Zonotope::Generator> gens;
  for (std::size_t j = 0; j < kept.size(); ++j) {
    const double x = fit.nnls.x[static_cast<Eigen::Index>(j)];
    if (x >= 1e-14) gens.push_back({fit.columns[j], x});
  }
  fit.zonotope = Zonotope(n, std::move(gens));
  fit.residualNorm = fit.nnls.residualNorm;
  return fit;
}

}  // namespace geotomo
