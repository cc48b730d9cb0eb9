#pragma once
// Constrained least-squares kernels: projection onto polyhedral cones
// (consistent support vectors) and nonnegative least squares (zonotope
// generator lengths).

#include <Eigen/Core>
#include <vector>

#include "geotomo/bodies.hpp"

namespace geotomo {

struct NnlsResult {
  Eigen::VectorXd x;
  double residualNorm = 0.0;  // ||Ax - b||
  /// max over j of |g_j| (x_j > 0) or max(-g_j, 0) (x_j = 0), g = A^T (Ax - b).
  double kktResidual = 0.0;
  int iterations = 0;
  std::vector<int> passiveSet;  // indices with x_j > 0
};

struct NnlsOptions {
  int maxIterations = 0;  // 0: 3 * columns + 100
  double tolerance = 0.0;  // 0: 10 eps ||A||_1 max(rows, cols)
};

/// min ||Ax - b|| subject to x >= 0 (Lawson-Hanson active set; the entering
/// index is the largest dual value, smallest index on ties).
NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const NnlsOptions& options = {});

struct QPSolution {
  Eigen::VectorXd solution;
  double objective = 0.0;    // sum (y_i - h_i)^2
  double kktResidual = 0.0;  // max of primal infeasibility and complementarity
  std::vector<int> activeSet;  // constraints with positive multiplier
  Eigen::VectorXd multipliers;
  int iterations = 0;
  int cutRounds = 0;
  int constraintCount = 0;
};

/// Euclidean projection of y onto {h : G h >= 0}, through the dual problem
/// lambda = nnls(G^T, -y), h = y + G^T lambda.
QPSolution projectOntoPolyhedralCone(const Eigen::MatrixXd& g, const Eigen::VectorXd& y);

/// Rows of the local consistency inequalities for strictly increasing angles
/// spanning less than 2 pi (cyclic):
///   h_{i-1} sin(t_{i+1} - t_i) + h_{i+1} sin(t_i - t_{i-1}) - h_i sin(t_{i+1} - t_{i-1}) >= 0.
Eigen::MatrixXd rademacherConstraints(const std::vector<double>& sortedAngles);

/// Closest consistent support vector to y for directions at the given angles
/// (any order; the result follows the input order). Needs k >= 3 and every
/// angular gap below pi.
QPSolution consistencyConstrainedLSQ2D(const Eigen::VectorXd& y, const std::vector<double>& angles);

struct CuttingPlaneOptions {
  int maxRounds = 1000;
  double violationTolerance = 1e-8;  // relative to max(1, max |y|)
};

/// Same for n = 3, by cutting planes: each round builds P(h), and every i with
/// h_{P(h)}(u_i) < h_i yields the cut h_i <= sum_j lambda_j h_j from the
/// normals active at the vertex maximizing u_i (lambda >= 0, u_i = sum lambda_j u_j).
/// An empty P(h) yields the Farkas cut sum_j lambda_j h_j >= 0 with
/// sum_j lambda_j u_j = 0.
QPSolution consistencyConstrainedLSQ3D(const Eigen::VectorXd& y, const DirectionSequence& dirs,
                                       const CuttingPlaneOptions& options = {});

/// Dispatches on the dimension.
QPSolution consistencyConstrainedLSQ(const Eigen::VectorXd& y, const DirectionSequence& dirs);

/// True when every u_i touches P(h): h_{P(h)}(u_i) >= h_i - tol.
bool isConsistent(const Eigen::VectorXd& h, const DirectionSequence& dirs, double tol = 1e-8);

struct ZonotopeFit {
  Zonotope zonotope;
  NnlsResult nnls;
  DirectionSequence columns;  // node representatives kept as NNLS columns
  double residualNorm = 0.0;
};

/// Zonotope with generators along the node directions minimizing
/// sum_i (y_i - h_Z(u_i))^2. Antipodal nodes collapse to one representative;
/// columns with max_i |u_i . v_j| < 1e-12 are dropped.
ZonotopeFit zonotopeLSQ(const Eigen::VectorXd& y, const DirectionSequence& dirs, const DirectionSequence& nodeDirs);

}  // namespace geotomo
