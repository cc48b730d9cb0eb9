#pragma once
// End-to-end reconstruction from noisy measurements and the synthetic
// measurement generator.

#include <cstdint>
#include <string>

#include "geotomo/solvers.hpp"

namespace geotomo {

enum class MeasurementKind { Support, Brightness, Rose };

const char* toString(MeasurementKind kind);
MeasurementKind measurementKindFromString(const std::string& s);

struct MeasurementSet {
  DirectionSequence dirs;
  std::vector<double> values;
  double noiseSigma = 0.0;
  std::uint64_t seed = 0;
  MeasurementKind kind = MeasurementKind::Support;

  Eigen::VectorXd valueVector() const;
};

/// Exact h_K or b_K at dirs plus independent N(0, sigma^2) noise; draw i
/// depends only on (seed, i).
MeasurementSet simulateMeasurements(const VPolytope& source, MeasurementKind kind, const DirectionSequence& dirs,
                                    double sigma, std::uint64_t seed);
/// Rose of intersections gamma(u) = sum_j m_j |u . v_j| plus noise.
MeasurementSet simulateMeasurements(const AtomicMeasure& source, MeasurementKind kind, const DirectionSequence& dirs,
                                    double sigma, std::uint64_t seed);

struct SupportReport {
  VPolytope body;
  Eigen::VectorXd fitted;  // consistent support values at the directions
  QPSolution solver;
  double residual = 0.0;   // pseudonorm of y - fitted
  double wallSeconds = 0.0;
};

/// Closest consistent support vector, then the polytope it defines.
SupportReport noisySupportLSQ(const MeasurementSet& m);

struct BrightnessReport {
  ZonotopeFit fit;            // Phase I
  AtomicMeasure surfaceMeasure;
  VPolytope body;             // Phase II; empty when it failed
  bool phase2Ok = false;
  std::string phase2Error;
  double residual = 0.0;
  double wallSeconds = 0.0;
};

/// Phase I fits a zonotope with node generators to the data; Phase II finds
/// the origin-symmetric body whose projection body it is. A zonotope that is
/// not full-dimensional stops Phase II (reported, not thrown).
BrightnessReport noisyBrightLSQ(const MeasurementSet& m);

struct RoseReport {
  ZonotopeFit fit;
  AtomicMeasure measure;  // mass x_j / 2 at each of +-v_j
  double residual = 0.0;
  double wallSeconds = 0.0;
};

RoseReport noisyRoseLSQ(const MeasurementSet& m);

}  // namespace geotomo
