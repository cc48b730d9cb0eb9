#pragma once
// Dense two-phase simplex for small linear programs.

#include <Eigen/Core>
#include <vector>

namespace geotomo {

enum class RowSense { LessEqual, GreaterEqual, Equal };

/// maximize objective . x  subject to  rows, x_j >= 0 unless freeVariable[j].
struct LinearProgram {
  struct Row {
    Eigen::VectorXd coeffs;
    RowSense sense = RowSense::LessEqual;
    double rhs = 0.0;
  };

  explicit LinearProgram(int numVariables)
      : objective(Eigen::VectorXd::Zero(numVariables)), freeVariable(numVariables, false) {}

  int numVariables() const { return static_cast<int>(objective.size()); }
  void addRow(Eigen::VectorXd coeffs, RowSense sense, double rhs) {
    rows.push_back({std::move(coeffs), sense, rhs});
  }

  Eigen::VectorXd objective;
  std::vector<bool> freeVariable;
  std::vector<Row> rows;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpResult {
  LpStatus status = LpStatus::IterationLimit;
  Eigen::VectorXd x;
  double objective = 0.0;
  int iterations = 0;
};

struct LpOptions {
  double tolerance = 1e-9;
  int maxIterations = 100000;
  /// Switch from Dantzig pricing to Bland's rule after this many pivots
  /// without objective progress.
  int stallLimit = 50;
};

LpResult solveLinearProgram(const LinearProgram& lp, const LpOptions& options = {});

}  // namespace geotomo
