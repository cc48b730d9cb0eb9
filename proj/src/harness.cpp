#include "geotomo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "geotomo/error.hpp"
#include "geotomo/io.hpp"
#include "geotomo/metrics.hpp"
#include "geotomo/rng.hpp"

namespace geotomo {

namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

VPolytope regularPolygon(int m, double radius, double phase) {
  std::vector<Vector> pts;
  for (int i = 0; i < m; ++i) {
    const double t = phase + 2.0 * kPi * i / m;
    pts.push_back(Vector{{radius * std::cos(t), radius * std::sin(t)}});
  }
  return VPolytope(2, pts);
}

VPolytope irregularNonagon() {
  // Points of an ellipse (semi-axes 1, 0.7) at uneven angles, then shifted.
  const double deg[] = {0, 35, 80, 120, 160, 200, 245, 290, 330};
  std::vector<Vector> pts;
  for (double d : deg) {
    const double t = d * kPi / 180.0;
    pts.push_back(Vector{{0.1 + std::cos(t), -0.05 + 0.7 * std::sin(t)}});
  }
  return VPolytope(2, pts);
}

VPolytope affineOctagon() {
  Eigen::Matrix2d a;
  a << 1.0, 0.3, 0.0, 0.6;
  std::vector<Vector> pts;
  const VPolytope regular = regularPolygon(8, 1.0, kPi / 8.0);
  for (const auto& v : regular.vertices()) pts.push_back(a * v);
  return VPolytope(2, pts);
}

VPolytope cube() {
  std::vector<Vector> pts;
  for (int i = 0; i < 8; ++i)
    pts.push_back(Vector{{i & 1 ? 1.0 : -1.0, i & 2 ? 1.0 : -1.0, i & 4 ? 1.0 : -1.0}});
  return VPolytope(3, pts);
}

AtomicMeasure symmetricMeasure(int n, const std::vector<std::pair<Vector, double>>& pairs) {
  std::vector<AtomicMeasure::Atom> atoms;
  for (const auto& [v, m] : pairs) {
    const Direction d(v);
    atoms.push_back({d, m});
    atoms.push_back({-d, m});
  }
  return AtomicMeasure(n, std::move(atoms));
}

std::vector<double> gridFromJson(const nlohmann::json& s) {
  if (s.contains("values")) return s["values"].get<std::vector<double>>();
  return rangeGrid(s.at("from").get<double>(), s.at("to").get<double>(), s.at("step").get<double>());
}

DirectionSequence designFor(Pipeline p, int n, std::size_t k) {
  if (n == 3) return stackedNetSequence(3, k);
  return p == Pipeline::Support ? equallySpaced2D(k) : equallySpacedHalfCircle(k);
}

// Everything about a grid point that does not depend on the noise.
struct GridSetup {
  double sigma = 0.0;
  DirectionSequence dirs;
  std::vector<double> exact;
  VPolytope body;
  AtomicMeasure measure;
};

double metricValue(ErrorMetric metric, const GridSetup& g, const std::vector<double>& fitted, const VPolytope* out,
                   const AtomicMeasure* outMeasure) {
  switch (metric) {
    case ErrorMetric::Pseudonorm: {
      std::vector<double> d(fitted.size());
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = g.exact[i] - fitted[i];
      return pseudonormK(d);
    }
    case ErrorMetric::L2:
      return l2dist(g.body, *out).value;
    case ErrorMetric::Hausdorff:
      return hausdorff(g.body, *out).value;
    case ErrorMetric::Dudley:
      return dudley(g.measure, *outMeasure);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

const char* toString(Pipeline p) {
  switch (p) {
    case Pipeline::Support:
      return "support";
    case Pipeline::Brightness:
      return "brightness";
    case Pipeline::Rose:
      return "rose";
  }
  return "?";
}

const char* toString(SweepVariable v) {
  switch (v) {
    case SweepVariable::K:
      return "k";
    case SweepVariable::R:
      return "R";
    case SweepVariable::Sigma:
      return "sigma";
  }
  return "?";
}

const char* toString(ErrorMetric m) {
  switch (m) {
    case ErrorMetric::Pseudonorm:
      return "pseudonorm";
    case ErrorMetric::L2:
      return "l2";
    case ErrorMetric::Hausdorff:
      return "hausdorff";
    case ErrorMetric::Dudley:
      return "dudley";
  }
  return "?";
}

ErrorMetric errorMetricFromString(const std::string& s) {
  for (auto m : {ErrorMetric::Pseudonorm, ErrorMetric::L2, ErrorMetric::Hausdorff, ErrorMetric::Dudley})
    if (s == toString(m)) return m;
  fail(ErrorCode::InvalidParameter, "unknown metric '" + s + "'");
}

const std::map<std::string, VPolytope>& referenceBodies() {
  static const std::map<std::string, VPolytope> bodies = {
      {"11-gon", regularPolygon(11, 1.0, 0.0)},
      {"9-gon", irregularNonagon()},
      {"12-gon", regularPolygon(12, 1.0, 0.0)},
      {"octagon", affineOctagon()},
      {"square", VPolytope(2, {Vector{{-1.0, -1.0}}, Vector{{1.0, -1.0}}, Vector{{1.0, 1.0}}, Vector{{-1.0, 1.0}}})},
      {"cube", cube()},
  };
  return bodies;
}

const std::map<std::string, AtomicMeasure>& referenceMeasures() {
  static const std::map<std::string, AtomicMeasure> measures = {
      {"rose-2d", symmetricMeasure(2, {{Vector{{1.0, 0.2}}, 0.5}, {Vector{{0.3, 1.0}}, 0.3}, {Vector{{-0.8, 0.6}}, 0.2}})},
      {"rose-3d", symmetricMeasure(3, {{Vector{{1.0, 0.0, 0.2}}, 0.4},
                                       {Vector{{0.1, 1.0, 0.3}}, 0.3},
                                       {Vector{{-0.5, 0.4, 1.0}}, 0.2},
                                       {Vector{{0.7, -0.6, 0.4}}, 0.1}})},
  };
  return measures;
}

std::vector<double> rangeGrid(double from, double to, double step) {
  require(step > 0 && to >= from, ErrorCode::InvalidParameter, "grid needs step > 0 and to >= from");
  std::vector<double> out;
  const auto count = static_cast<long>(std::floor((to - from) / step + 1e-9));
  for (long i = 0; i <= count; ++i) out.push_back(from + static_cast<double>(i) * step);
  return out;
}

void ExperimentConfig::validate() const {
  require(iterations >= 1, ErrorCode::InvalidParameter, "iterations must be >= 1");
  require(!grid.empty(), ErrorCode::InvalidParameter, "sweep grid is empty");
  for (double x : grid) require(x > 0, ErrorCode::InvalidParameter, "sweep values must be positive");
  if (sweep == SweepVariable::K)
    for (double x : grid) require(std::abs(x - std::round(x)) < 1e-9, ErrorCode::InvalidParameter, "k must be an integer");
  require(k >= 1 && scale > 0 && sigma >= 0, ErrorCode::InvalidParameter, "bad fixed parameters");
  require(!metrics.empty(), ErrorCode::InvalidParameter, "no metrics requested");
  for (auto m : metrics) {
    if (pipeline == Pipeline::Rose)
      require(m == ErrorMetric::Pseudonorm || m == ErrorMetric::Dudley, ErrorCode::InvalidParameter,
              "rose experiments record pseudonorm and dudley only");
    else
      require(m != ErrorMetric::Dudley, ErrorCode::InvalidParameter, "dudley applies to rose experiments only");
  }
  if (pipeline == Pipeline::Rose) {
    require(measure || referenceMeasures().count(sourceName), ErrorCode::InvalidParameter,
            "unknown measure '" + sourceName + "'");
  } else {
    require(body || referenceBodies().count(sourceName), ErrorCode::InvalidParameter, "unknown body '" + sourceName + "'");
  }
}

ExperimentConfig experimentConfigFromJson(const nlohmann::json& j) {
  ExperimentConfig cfg;
  try {
    if (j.contains("body")) {
      const auto& b = j["body"];
      if (b.is_string()) {
        cfg.sourceName = b.get<std::string>();
      } else {
        const Body body = bodyFromJson(b);
        if (const auto* p = std::get_if<VPolytope>(&body))
          cfg.body = *p;
        else if (const auto* m = std::get_if<AtomicMeasure>(&body))
          cfg.measure = *m;
        else
          fail(ErrorCode::InvalidParameter, "experiment body must be a vpolytope or a measure");
        cfg.sourceName = "custom";
      }
    }
    if (j.contains("pipeline")) {
      const auto p = j["pipeline"].get<std::string>();
      if (p == "support")
        cfg.pipeline = Pipeline::Support;
      else if (p == "brightness")
        cfg.pipeline = Pipeline::Brightness;
      else if (p == "rose")
        cfg.pipeline = Pipeline::Rose;
      else
        fail(ErrorCode::InvalidParameter, "unknown pipeline '" + p + "'");
      if (cfg.pipeline == Pipeline::Rose && !j.contains("body")) cfg.sourceName = "rose-2d";
      if (cfg.pipeline == Pipeline::Rose && !j.contains("metrics"))
        cfg.metrics = {ErrorMetric::Pseudonorm, ErrorMetric::Dudley};
    }
    if (j.contains("sweep")) {
      const auto& s = j["sweep"];
      const auto v = s.at("variable").get<std::string>();
      if (v == "k")
        cfg.sweep = SweepVariable::K;
      else if (v == "R")
        cfg.sweep = SweepVariable::R;
      else if (v == "sigma")
        cfg.sweep = SweepVariable::Sigma;
      else
        fail(ErrorCode::InvalidParameter, "unknown sweep variable '" + v + "'");
      cfg.grid = gridFromJson(s);
    }
    if (j.contains("k")) cfg.k = j["k"].get<std::size_t>();
    if (j.contains("R")) cfg.scale = j["R"].get<double>();
    if (j.contains("sigma")) cfg.sigma = j["sigma"].get<double>();
    if (j.contains("iterations")) cfg.iterations = j["iterations"].get<int>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
    if (j.contains("metrics")) {
      cfg.metrics.clear();
      for (const auto& m : j["metrics"]) cfg.metrics.push_back(errorMetricFromString(m.get<std::string>()));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidParameter, std::string("experiment config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

nlohmann::json toJson(const ExperimentConfig& cfg) {
  nlohmann::json j;
  if (cfg.body)
    j["body"] = bodyToJson(*cfg.body);
  else if (cfg.measure)
    j["body"] = bodyToJson(*cfg.measure);
  else
    j["body"] = cfg.sourceName;
  j["pipeline"] = toString(cfg.pipeline);
  j["sweep"] = {{"variable", toString(cfg.sweep)}, {"values", cfg.grid}};
  j["k"] = cfg.k;
  j["R"] = cfg.scale;
  j["sigma"] = cfg.sigma;
  j["iterations"] = cfg.iterations;
  j["seed"] = cfg.seed;
  std::vector<std::string> metrics;
  for (auto m : cfg.metrics) metrics.emplace_back(toString(m));
  j["metrics"] = metrics;
  j["threads"] = cfg.threads;
  return j;
}

int ErrorTable::metricIndex(ErrorMetric m) const {
  for (std::size_t i = 0; i < metrics.size(); ++i)
    if (metrics[i] == m) return static_cast<int>(i);
  fail(ErrorCode::InvalidParameter, std::string("metric '") + toString(m) + "' is not in the table");
}

ErrorTable runExperiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const bool rose = cfg.pipeline == Pipeline::Rose;
  const VPolytope base = rose ? VPolytope() : (cfg.body ? *cfg.body : referenceBodies().at(cfg.sourceName));
  const AtomicMeasure baseMeasure = rose ? (cfg.measure ? *cfg.measure : referenceMeasures().at(cfg.sourceName)) : AtomicMeasure();
  const int n = rose ? baseMeasure.dims() : base.dims();
  const std::size_t nm = cfg.metrics.size();

  std::vector<GridSetup> setups;
  for (double x : cfg.grid) {
    GridSetup g;
    const double scale = cfg.sweep == SweepVariable::R ? x : cfg.scale;
    const std::size_t k = cfg.sweep == SweepVariable::K ? static_cast<std::size_t>(std::llround(x)) : cfg.k;
    g.sigma = cfg.sweep == SweepVariable::Sigma ? x : cfg.sigma;
    g.dirs = designFor(cfg.pipeline, n, k);
    if (rose) {
      g.measure = baseMeasure.scaled(scale);
      g.exact = roseValues(g.measure, g.dirs);
    } else {
      g.body = base.scaled(scale);
      if (cfg.pipeline == Pipeline::Brightness) g.body = g.body.translated(-centroid(g.body));
      g.exact = cfg.pipeline == Pipeline::Support ? supportValues(g.body, g.dirs) : brightnessValues(g.body, g.dirs);
    }
    setups.push_back(std::move(g));
  }

  const std::size_t iters = static_cast<std::size_t>(cfg.iterations);
  const std::size_t tasks = setups.size() * iters;
  std::vector<double> values(tasks * nm, std::numeric_limits<double>::quiet_NaN());
  std::vector<char> failed(tasks, 0);

  auto runTask = [&](std::size_t t) {
    const std::size_t gi = t / iters, it = t % iters;
    const GridSetup& g = setups[gi];
    MeasurementSet m;
    m.dirs = g.dirs;
    m.values = g.exact;
    m.noiseSigma = g.sigma;
    m.seed = rng::derive(cfg.seed, gi, it);
    m.kind = cfg.pipeline == Pipeline::Support ? MeasurementKind::Support
             : cfg.pipeline == Pipeline::Brightness ? MeasurementKind::Brightness
                                                    : MeasurementKind::Rose;
    if (g.sigma > 0)
      for (std::size_t i = 0; i < m.values.size(); ++i) m.values[i] += g.sigma * rng::gaussian(m.seed, i);
    try {
      std::vector<double> fitted;
      VPolytope out;
      AtomicMeasure outMeasure;
      if (cfg.pipeline == Pipeline::Support) {
        const auto r = noisySupportLSQ(m);
        fitted.assign(r.fitted.data(), r.fitted.data() + r.fitted.size());
        out = r.body;
        if (out.isEmpty()) throw Error(ErrorCode::InvalidBody, "empty reconstruction");
      } else if (cfg.pipeline == Pipeline::Brightness) {
        const auto r = noisyBrightLSQ(m);
        fitted = supportValues(r.fit.zonotope, m.dirs);
        if (!r.phase2Ok) throw Error(ErrorCode::DegenerateZonotope, r.phase2Error);
        out = r.body;
      } else {
        const auto r = noisyRoseLSQ(m);
        fitted = supportValues(r.fit.zonotope, m.dirs);
        outMeasure = r.measure;
      }
      for (std::size_t q = 0; q < nm; ++q) values[t * nm + q] = metricValue(cfg.metrics[q], g, fitted, &out, &outMeasure);
    } catch (const std::exception&) {
      failed[t] = 1;
    }
  };

  int threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min<int>(threads, static_cast<int>(tasks)));
  if (threads == 1) {
    for (std::size_t t = 0; t < tasks; ++t) runTask(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < tasks; t = next++) runTask(t);
      });
    for (auto& th : pool) th.join();
  }

  ErrorTable table;
  table.sweep = cfg.sweep;
  table.metrics = cfg.metrics;
  for (std::size_t gi = 0; gi < setups.size(); ++gi) {
    GridPointResult row;
    row.x = cfg.grid[gi];
    row.mean.assign(nm, 0.0);
    row.max.assign(nm, 0.0);
    std::size_t ok = 0;
    for (std::size_t it = 0; it < iters; ++it) {
      const std::size_t t = gi * iters + it;
      if (failed[t]) {
        ++row.failures;
        continue;
      }
      ++ok;
      for (std::size_t q = 0; q < nm; ++q) {
        row.mean[q] += values[t * nm + q];
        row.max[q] = std::max(row.max[q], values[t * nm + q]);
      }
    }
    for (std::size_t q = 0; q < nm; ++q) {
      if (ok == 0) {
        row.mean[q] = row.max[q] = std::numeric_limits<double>::quiet_NaN();
      } else {
        row.mean[q] /= static_cast<double>(ok);
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

RateFit fitRate(const std::vector<double>& x, const std::vector<double>& error) {
  require(x.size() == error.size(), ErrorCode::InvalidData, "x and error differ in length");
  require(x.size() >= 3, ErrorCode::InvalidData, "a rate fit needs at least three points");
  const std::size_t m = x.size();
  double sx = 0, sy = 0;
  std::vector<double> lx(m), ly(m);
  for (std::size_t i = 0; i < m; ++i) {
    require(x[i] > 0 && error[i] > 0 && std::isfinite(x[i]) && std::isfinite(error[i]), ErrorCode::InvalidData,
            "rate fits need positive finite values");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(error[i]);
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / static_cast<double>(m), my = sy / static_cast<double>(m);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  require(sxx > 0, ErrorCode::InvalidData, "rate fits need at least two distinct x values");
  RateFit f;
  f.exponent = sxy / sxx;
  f.amplitude = std::exp(my - f.exponent * mx);
  double ssr = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = ly[i] - (my + f.exponent * (lx[i] - mx));
    ssr += r * r;
  }
  f.rSquared = syy > 0 ? 1.0 - ssr / syy : 1.0;
  f.x = x;
  f.mean = error;
  return f;
}

RateFit fitRate(const ErrorTable& table, ErrorMetric metric, Statistic which) {
  const int q = table.metricIndex(metric);
  std::vector<double> x, mean, max;
  for (const auto& r : table.rows) {
    x.push_back(r.x);
    mean.push_back(r.mean[q]);
    max.push_back(r.max[q]);
  }
  RateFit f = fitRate(x, which == Statistic::Mean ? mean : max);
  f.mean = mean;
  f.max = max;
  return f;
}

void emitCsv(const ErrorTable& table, const fs::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  out << toString(table.sweep) << ",failures";
  for (auto m : table.metrics) out << ',' << toString(m) << "_mean," << toString(m) << "_max";
  out << '\n';
  for (const auto& r : table.rows) {
    out << formatDouble(r.x) << ',' << r.failures;
    for (std::size_t q = 0; q < table.metrics.size(); ++q)
      out << ',' << formatDouble(r.mean[q]) << ',' << formatDouble(r.max[q]);
    out << '\n';
  }
  if (!out) fail(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

ErrorTable parseCsv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path.string() + "' for reading");
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::InvalidData, path.string() + ": missing header");
  std::vector<std::string> head;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) head.push_back(cell);
  }
  require(head.size() >= 2 && head.size() % 2 == 0 && head[1] == "failures", ErrorCode::InvalidData,
          path.string() + ": unexpected header");
  ErrorTable t;
  if (head[0] == "k")
    t.sweep = SweepVariable::K;
  else if (head[0] == "R")
    t.sweep = SweepVariable::R;
  else if (head[0] == "sigma")
    t.sweep = SweepVariable::Sigma;
  else
    fail(ErrorCode::InvalidData, path.string() + ": unknown sweep column '" + head[0] + "'");
  for (std::size_t c = 2; c < head.size(); c += 2) {
    const auto& name = head[c];
    require(name.size() > 5 && name.substr(name.size() - 5) == "_mean", ErrorCode::InvalidData,
            path.string() + ": bad column '" + name + "'");
    t.metrics.push_back(errorMetricFromString(name.substr(0, name.size() - 5)));
  }
  std::size_t lineNo = 1;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.find_first_not_of(" \r\t") == std::string::npos) continue;
    std::vector<double> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        cells.push_back(std::stod(cell));
      } catch (const std::exception&) {
        fail(ErrorCode::InvalidData, path.string() + ":" + std::to_string(lineNo) + ": bad number '" + cell + "'");
      }
    }
    require(cells.size() == head.size(), ErrorCode::InvalidData, path.string() + ":" + std::to_string(lineNo) + ": wrong field count");
    GridPointResult r;
    r.x = cells[0];
    r.failures = static_cast<int>(cells[1]);
    for (std::size_t c = 2; c < cells.size(); c += 2) {
      r.mean.push_back(cells[c]);
      r.max.push_back(cells[c + 1]);
    }
    t.rows.push_back(std::move(r));
  }
  return t;
}

void emitFitCsv(const std::vector<std::pair<std::string, RateFit>>& fits, const fs::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  out << "series,exponent,amplitude,r_squared\n";
  for (const auto& [name, f] : fits)
    out << name << ',' << formatDouble(f.exponent) << ',' << formatDouble(f.amplitude) << ','
        << formatDouble(f.rSquared) << '\n';
  if (!out) fail(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

void emitSvg(const ErrorTable& table, ErrorMetric metric, const fs::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  out << renderSvg(table, metric);
  if (!out) fail(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

}  // namespace geotomo
