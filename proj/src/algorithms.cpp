#include "geotomo/algorithms.hpp"

#include <chrono>

#include "geotomo/error.hpp"
#include "geotomo/metrics.hpp"
#include "geotomo/rng.hpp"

namespace geotomo {

namespace {

using Clock = std::chrono::steady_clock;

double secondsSince(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void addNoise(std::vector<double>& values, double sigma, std::uint64_t seed) {
  if (sigma == 0.0) return;
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += sigma * rng::gaussian(seed, i);
}

double residualOf(const Eigen::VectorXd& y, const Eigen::VectorXd& fitted) {
  const Eigen::VectorXd d = y - fitted;
  return pseudonormK(std::span<const double>(d.data(), static_cast<std::size_t>(d.size())));
}

void checkSet(const MeasurementSet& m) {
  require(m.values.size() == m.dirs.size(), ErrorCode::InvalidData, "values and directions differ in length");
  require(!m.dirs.empty(), ErrorCode::InvalidData, "no measurements");
  require(m.noiseSigma >= 0.0, ErrorCode::InvalidData, "negative noise level");
  const int n = m.dirs.dims();
  require(n == 2 || n == 3, ErrorCode::UnsupportedDimension, "reconstruction handles n = 2, 3");
}

// Phase I shared by the brightness and rose pipelines.
ZonotopeFit fitZonotope(const MeasurementSet& m) {
  const auto y = m.valueVector();
  return zonotopeLSQ(y, m.dirs, nodes(m.dirs));
}

Eigen::VectorXd zonotopeValues(const Zonotope& z, const DirectionSequence& dirs) {
  const auto v = supportValues(z, dirs);
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

const char* toString(MeasurementKind kind) {
  switch (kind) {
    case MeasurementKind::Support:
      return "support";
    case MeasurementKind::Brightness:
      return "brightness";
    case MeasurementKind::Rose:
      return "rose";
  }
  return "?";
}

MeasurementKind measurementKindFromString(const std::string& s) {
  if (s == "support") return MeasurementKind::Support;
  if (s == "brightness") return MeasurementKind::Brightness;
  if (s == "rose") return MeasurementKind::Rose;
  fail(ErrorCode::InvalidData, "unknown measurement kind '" + s + "'");
}

Eigen::VectorXd MeasurementSet::valueVector() const {
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

MeasurementSet simulateMeasurements(const VPolytope& source, MeasurementKind kind, const DirectionSequence& dirs,
                                    double sigma, std::uint64_t seed) {
  require(kind != MeasurementKind::Rose, ErrorCode::IncompatibleKind, "rose measurements need a measure");
  require(sigma >= 0.0, ErrorCode::InvalidParameter, "sigma must be nonnegative");
  MeasurementSet m{dirs, {}, sigma, seed, kind};
  m.values = kind == MeasurementKind::Support ? supportValues(source, dirs) : brightnessValues(source, dirs);
  addNoise(m.values, sigma, seed);
  return m;
}

MeasurementSet simulateMeasurements(const AtomicMeasure& source, MeasurementKind kind, const DirectionSequence& dirs,
                                    double sigma, std::uint64_t seed) {
  require(kind == MeasurementKind::Rose, ErrorCode::IncompatibleKind,
          "support and brightness measurements need a polytope");
  require(sigma >= 0.0, ErrorCode::InvalidParameter, "sigma must be nonnegative");
  MeasurementSet m{dirs, roseValues(source, dirs), sigma, seed, kind};
  addNoise(m.values, sigma, seed);
  return m;
}

SupportReport noisySupportLSQ(const MeasurementSet& m) {
  const auto t0 = Clock::now();
  checkSet(m);
  const int n = m.dirs.dims();
  require(m.dirs.size() >= static_cast<std::size_t>(n + 1), ErrorCode::InvalidData, "need at least n + 1 measurements");
  require(positiveHullIsWhole(m.dirs), ErrorCode::PositiveHull, "directions do not positively span R^" + std::to_string(n));
  const auto y = m.valueVector();
  SupportReport r;
  r.solver = consistencyConstrainedLSQ(y, m.dirs);
  r.fitted = r.solver.solution;
  r.body = polytopeFromSupports(HPolytope{m.dirs, std::vector<double>(r.fitted.data(), r.fitted.data() + r.fitted.size())});
  r.residual = residualOf(y, r.fitted);
  r.wallSeconds = secondsSince(t0);
  return r;
}

BrightnessReport noisyBrightLSQ(const MeasurementSet& m) {
  const auto t0 = Clock::now();
  checkSet(m);
  BrightnessReport r;
  r.fit = fitZonotope(m);
  r.residual = residualOf(m.valueVector(), zonotopeValues(r.fit.zonotope, m.dirs));
  try {
    r.surfaceMeasure = zonotopeSurfaceMeasure(r.fit.zonotope);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Span) throw;
    r.phase2Error = std::string(toString(ErrorCode::DegenerateZonotope)) +
                    ": fitted zonotope is not full-dimensional";
    r.wallSeconds = secondsSince(t0);
    return r;
  }
  r.body = minkowskiReconstruct(r.surfaceMeasure);
  r.phase2Ok = true;
  r.wallSeconds = secondsSince(t0);
  return r;
}

RoseReport noisyRoseLSQ(const MeasurementSet& m) {
  const auto t0 = Clock::now();
  checkSet(m);
  RoseReport r;
  r.fit = fitZonotope(m);
  std::vector<AtomicMeasure::Atom> atoms;
  for (const auto& g : r.fit.zonotope.generators()) {
    atoms.push_back({g.direction, g.halfLength / 2.0});
    atoms.push_back({-g.direction, g.halfLength / 2.0});
  }
  r.measure = AtomicMeasure(m.dirs.dims(), std::move(atoms));
  r.residual = residualOf(m.valueVector(), zonotopeValues(r.fit.zonotope, m.dirs));
  r.wallSeconds = secondsSince(t0);
  return r;
}

}  // namespace geotomo
