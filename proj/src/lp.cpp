#include "geotomo/lp.hpp"

#include <cmath>
#include <limits>

#include "geotomo/error.hpp"

namespace geotomo {

namespace {

class Tableau {
 public:
  // The last column is a perturbed right-hand side that drives the ratio
  // test; exact_ follows the same pivots with the unperturbed one.
  Tableau(int rows, int cols)
      : t_(Eigen::MatrixXd::Zero(rows + 1, cols + 1)), exact_(Eigen::VectorXd::Zero(rows + 1)), basis_(rows, -1) {}

  Eigen::MatrixXd& t() { return t_; }
  std::vector<int>& basis() { return basis_; }
  int rows() const { return static_cast<int>(t_.rows()) - 1; }
  int cols() const { return static_cast<int>(t_.cols()) - 1; }
  double rhs(int r) const { return t_(r, cols()); }
  double objectiveValue() const { return t_(rows(), cols()); }

  Eigen::VectorXd& exact() { return exact_; }

  // row i -= f * row r, in both right-hand sides.
  void subtractRow(int i, int r, double f) {
    t_.row(i) -= f * t_.row(r);
    exact_[i] -= f * exact_[r];
  }

  void pivot(int r, int c) {
    const double p = t_(r, c);
    t_.row(r) /= p;
    exact_[r] /= p;
    for (int i = 0; i <= rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) subtractRow(i, r, f);
    }
    basis_[r] = c;
  }

  // Runs the simplex on the current objective row (maximization in the form
  // z - c x = 0). Columns with allowed[c] == false never enter. Stops early
  // once the objective reaches ceiling, a known upper bound.
  LpStatus run(const std::vector<char>& allowed, const LpOptions& opt, int& iterations,
               double ceiling = std::numeric_limits<double>::infinity()) {
    const int m = rows(), n = cols();
    int stall = 0;
    double lastObj = objectiveValue();
    while (true) {
      if (objectiveValue() >= ceiling) return LpStatus::Optimal;
      if (iterations >= opt.maxIterations) return LpStatus::IterationLimit;
      const bool bland = stall >= opt.stallLimit;
      int enter = -1;
      double best = -opt.tolerance;
      for (int c = 0; c < n; ++c) {
        if (!allowed[c]) continue;
        const double rc = t_(m, c);
        if (rc < best) {
          enter = c;
          best = rc;
          if (bland) break;
        }
      }
      if (enter < 0) return LpStatus::Optimal;
      int leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (int r = 0; r < m; ++r) {
        const double a = t_(r, enter);
        if (a <= opt.tolerance) continue;
        const double q = t_(r, n) / a;
        // Ties: the largest pivot for stability, the smallest basic index
        // under Bland's rule.
        const bool tie = leave >= 0 && std::abs(q - ratio) <= 1e-12;
        if (q < ratio - 1e-12 || (tie && (bland ? basis_[r] < basis_[leave] : a > t_(leave, enter)))) {
          ratio = q;
          leave = r;
        }
      }
      if (leave < 0) return LpStatus::Unbounded;
      pivot(leave, enter);
      ++iterations;
      const double obj = objectiveValue();
      if (obj > lastObj + opt.tolerance) {
        stall = 0;
        lastObj = obj;
      } else {
        ++stall;
      }
    }
  }

 private:
  Eigen::MatrixXd t_;
  Eigen::VectorXd exact_;
  std::vector<int> basis_;
};

}  // namespace

LpResult solveLinearProgram(const LinearProgram& lp, const LpOptions& opt) {
  const int nv = lp.numVariables();
  for (const auto& row : lp.rows)
    require(row.coeffs.size() == nv, ErrorCode::InvalidParameter, "LP row has the wrong length");

  // Column layout: original (free ones split into +/-), slacks, artificials.
  std::vector<int> posCol(nv), negCol(nv, -1);
  int cols = 0;
  for (int j = 0; j < nv; ++j) {
    posCol[j] = cols++;
    if (lp.freeVariable[j]) negCol[j] = cols++;
  }
  const int structural = cols;
  const int m = static_cast<int>(lp.rows.size());

  // Normalize rows to nonnegative right-hand sides.
  std::vector<RowSense> sense(m);
  std::vector<double> sign(m, 1.0);
  int slackCount = 0, artificialCount = 0;
  for (int r = 0; r < m; ++r) {
    sense[r] = lp.rows[r].sense;
    if (lp.rows[r].rhs < 0) {
      sign[r] = -1.0;
      if (sense[r] == RowSense::LessEqual)
        sense[r] = RowSense::GreaterEqual;
      else if (sense[r] == RowSense::GreaterEqual)
        sense[r] = RowSense::LessEqual;
    }
    if (sense[r] != RowSense::Equal) ++slackCount;
    if (sense[r] != RowSense::LessEqual) ++artificialCount;
  }
  const int total = structural + slackCount + artificialCount;
  Tableau tab(m, total);
  double rhsScale = 1.0;
  for (const auto& row : lp.rows) rhsScale = std::max(rhsScale, std::abs(row.rhs));
  const double perturb = 1e-10 * rhsScale;
  auto& t = tab.t();
  int slack = structural, art = structural + slackCount;
  std::vector<char> isArtificial(total, 0);
  for (int r = 0; r < m; ++r) {
    const auto& row = lp.rows[r];
    for (int j = 0; j < nv; ++j) {
      const double a = sign[r] * row.coeffs[j];
      t(r, posCol[j]) = a;
      if (negCol[j] >= 0) t(r, negCol[j]) = -a;
    }
    tab.exact()[r] = sign[r] * row.rhs;
    t(r, total) = tab.exact()[r] + perturb * static_cast<double>(1 + (r * 7919) % 997) / 997.0;
    if (sense[r] == RowSense::LessEqual) {
      t(r, slack) = 1.0;
      tab.basis()[r] = slack++;
    } else {
      if (sense[r] == RowSense::GreaterEqual) t(r, slack++) = -1.0;
      t(r, art) = 1.0;
      isArtificial[art] = 1;
      tab.basis()[r] = art++;
    }
  }

  LpResult result;
  std::vector<char> allowed(total, 1);
  if (artificialCount > 0) {
    // Phase 1: maximize -sum(artificials).
    t.row(m).setZero();
    for (int c = 0; c < total; ++c)
      if (isArtificial[c]) t(m, c) = 1.0;
    for (int r = 0; r < m; ++r)
      if (isArtificial[tab.basis()[r]]) tab.subtractRow(m, r, 1.0);
    // -sum(artificials) <= 0, so reaching zero ends Phase 1.
    const double feasTol = opt.tolerance * std::max(1.0, t.col(total).head(m).cwiseAbs().maxCoeff());
    const auto st = tab.run(allowed, opt, result.iterations, -feasTol);
    if (st == LpStatus::IterationLimit) {
      result.status = st;
      return result;
    }
    if (tab.objectiveValue() < -feasTol) {
      result.status = LpStatus::Infeasible;
      return result;
    }
    for (int r = 0; r < m; ++r) {
      if (!isArtificial[tab.basis()[r]]) continue;
      int c = 0;
      while (c < total && (isArtificial[c] || std::abs(t(r, c)) <= opt.tolerance)) ++c;
      if (c < total) tab.pivot(r, c);
    }
    for (int c = 0; c < total; ++c)
      if (isArtificial[c]) allowed[c] = 0;
  }

  // Phase 2.
  t.row(m).setZero();
  tab.exact()[m] = 0.0;
  for (int j = 0; j < nv; ++j) {
    t(m, posCol[j]) = -lp.objective[j];
    if (negCol[j] >= 0) t(m, negCol[j]) = lp.objective[j];
  }
  for (int r = 0; r < m; ++r) {
    const int b = tab.basis()[r];
    const double f = t(m, b);
    if (f != 0.0) tab.subtractRow(m, r, f);
  }
  result.status = tab.run(allowed, opt, result.iterations);

  Eigen::VectorXd colValue = Eigen::VectorXd::Zero(total);
  for (int r = 0; r < m; ++r) colValue[tab.basis()[r]] = std::max(0.0, tab.exact()[r]);
  result.x.resize(nv);
  for (int j = 0; j < nv; ++j) {
    result.x[j] = colValue[posCol[j]];
    if (negCol[j] >= 0) result.x[j] -= colValue[negCol[j]];
  }
  result.objective = lp.objective.dot(result.x);
  return result;
}

}  // namespace geotomo
