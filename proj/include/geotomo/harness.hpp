#pragma once
// Monte Carlo experiments: repeated noisy reconstruction over a grid of k, R
// or sigma, power-law fits of the error curves, CSV and SVG output.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geotomo/algorithms.hpp"
#include "json.hpp"

namespace geotomo {

enum class Pipeline { Support, Brightness, Rose };
enum class SweepVariable { K, R, Sigma };
enum class ErrorMetric { Pseudonorm, L2, Hausdorff, Dudley };

const char* toString(Pipeline p);
const char* toString(SweepVariable v);
const char* toString(ErrorMetric m);
ErrorMetric errorMetricFromString(const std::string& s);

/// Named test bodies: "11-gon" (regular, circumradius 1, a vertex at angle 0),
/// "9-gon" (irregular), "12-gon" (regular, circumradius 1), "octagon"
/// (affinely regular, origin-symmetric), "square" ([-1,1]^2), "cube"
/// ([-1,1]^3).
const std::map<std::string, VPolytope>& referenceBodies();

/// Named directional measures: "rose-2d" (three atom pairs), "rose-3d" (four
/// atom pairs in S^2).
const std::map<std::string, AtomicMeasure>& referenceMeasures();

struct ExperimentConfig {
  std::string sourceName = "11-gon";
  std::optional<VPolytope> body;        // overrides sourceName for support/brightness
  std::optional<AtomicMeasure> measure;  // overrides sourceName for rose
  Pipeline pipeline = Pipeline::Support;
  SweepVariable sweep = SweepVariable::K;
  std::vector<double> grid;
  std::size_t k = 35;
  double scale = 1.0;  // R
  double sigma = 0.1;
  int iterations = 300;
  std::uint64_t seed = 1;
  std::vector<ErrorMetric> metrics{ErrorMetric::Pseudonorm, ErrorMetric::L2, ErrorMetric::Hausdorff};
  int threads = 0;  // 0: hardware concurrency

  /// Checks the invariants; throws InvalidParameter.
  void validate() const;
};

ExperimentConfig experimentConfigFromJson(const nlohmann::json& j);
nlohmann::json toJson(const ExperimentConfig& cfg);

/// from, from + step, ..., up to `to` (inclusive, with rounding slack).
std::vector<double> rangeGrid(double from, double to, double step);

struct GridPointResult {
  double x = 0.0;
  std::vector<double> mean;  // per metric
  std::vector<double> max;
  int failures = 0;
};

struct ErrorTable {
  SweepVariable sweep = SweepVariable::K;
  std::vector<ErrorMetric> metrics;
  std::vector<GridPointResult> rows;

  int metricIndex(ErrorMetric m) const;
};

/// Every (grid point, iteration) pair draws its noise from the seed
/// rng::derive(cfg.seed, grid index, iteration). Iterations run in parallel;
/// the reduction is in index order, so the table does not depend on the
/// thread count. Failed iterations are counted, not thrown.
ErrorTable runExperiment(const ExperimentConfig& cfg);

enum class Statistic { Mean, Max };

struct RateFit {
  double exponent = 0.0;
  double amplitude = 0.0;
  double rSquared = 0.0;
  std::vector<double> x, mean, max;
};

/// Least squares fit of log(error) = log(C) + b log(x). Needs at least three
/// points, all positive (InvalidData otherwise).
RateFit fitRate(const std::vector<double>& x, const std::vector<double>& error);
RateFit fitRate(const ErrorTable& table, ErrorMetric metric, Statistic which);

/// Header: x,failures,<metric>_mean,<metric>_max,...
void emitCsv(const ErrorTable& table, const std::filesystem::path& path);
ErrorTable parseCsv(const std::filesystem::path& path);
void emitFitCsv(const std::vector<std::pair<std::string, RateFit>>& fits, const std::filesystem::path& path);

/// Log-log plot of mean (circles) and max (crosses) per grid point with the
/// fitted line through the means.
std::string renderSvg(const ErrorTable& table, ErrorMetric metric);
void emitSvg(const ErrorTable& table, ErrorMetric metric, const std::filesystem::path& path);

}  // namespace geotomo
