// geotomo command line front end.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "geotomo/algorithms.hpp"
#include "geotomo/error.hpp"
#include "geotomo/harness.hpp"
#include "geotomo/io.hpp"

namespace fs = std::filesystem;
using namespace geotomo;

namespace {

enum Exit { kOk = 0, kInvalid = 2, kNoConvergence = 3, kIo = 4 };

int exitFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::Convergence:
      return kNoConvergence;
    case ErrorCode::Io:
      return kIo;
    default:
      return kInvalid;
  }
}

void writeJson(const nlohmann::json& j, const fs::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) fail(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

nlohmann::json readJson(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidData, path.string() + ": " + e.what());
  }
}

struct IoArgs {
  std::string input, meta, out;
};

MeasurementSet loadAs(const IoArgs& a, MeasurementKind kind) {
  MeasurementSet m = readMeasurements(a.input, a.meta);
  if (!a.meta.empty())
    require(m.kind == kind, ErrorCode::IncompatibleKind,
            std::string("input holds ") + toString(m.kind) + " data, expected " + toString(kind));
  m.kind = kind;
  return m;
}

nlohmann::json vectorJson(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reconstruction of convex bodies and directional measures from noisy tomographic data"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 1;
  int threads = 0;
  bool diagnostics = false;
  app.add_option("--seed", seed, "Base seed for simulated noise and Monte Carlo runs");
  app.add_option("--threads", threads, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  app.add_flag("--diagnostics", diagnostics, "Include solver diagnostics in the output");

  IoArgs sup, bri, rose;
  auto addIo = [](CLI::App* c, IoArgs& a) {
    c->add_option("--input", a.input, "Measurement CSV (u_1,...,u_n,value)")->required();
    c->add_option("--meta", a.meta, "JSON sidecar with sigma, seed and kind");
    c->add_option("--out", a.out, "Output JSON")->required();
  };
  auto* cSup = app.add_subcommand("reconstruct-support", "Consistent least squares polytope from support data");
  addIo(cSup, sup);
  auto* cBri = app.add_subcommand("reconstruct-brightness", "Origin-symmetric polytope from brightness data");
  addIo(cBri, bri);
  auto* cRose = app.add_subcommand("estimate-rose", "Directional measure from a rose of intersections");
  addIo(cRose, rose);

  std::string config, outDir;
  auto* cMc = app.add_subcommand("montecarlo", "Run a Monte Carlo error experiment");
  cMc->add_option("--config", config, "Experiment JSON")->required();
  cMc->add_option("--out-dir", outDir, "Directory for table.csv, fits.csv and plots")->required();

  std::string table, which = "mean";
  auto* cFit = app.add_subcommand("fit-rates", "Power-law fits of an error table");
  cFit->add_option("--table", table, "CSV written by montecarlo")->required();
  cFit->add_option("--which", which, "mean or max")->check(CLI::IsMember({"mean", "max"}));

  std::string simBody = "11-gon", simKind = "support", simCsv, simMeta;
  std::size_t simK = 35;
  double simSigma = 0.1, simScale = 1.0;
  auto* cSim = app.add_subcommand("simulate", "Write noisy measurements of a reference body or a body JSON");
  cSim->add_option("--body", simBody, "Reference name or path to a body JSON");
  cSim->add_option("--kind", simKind, "support, brightness or rose")
      ->check(CLI::IsMember({"support", "brightness", "rose"}));
  cSim->add_option("-k", simK, "Number of directions")->check(CLI::PositiveNumber);
  cSim->add_option("--sigma", simSigma, "Noise standard deviation")->check(CLI::NonNegativeNumber);
  cSim->add_option("--scale", simScale, "Scale factor R")->check(CLI::PositiveNumber);
  cSim->add_option("--out", simCsv, "Measurement CSV")->required();
  cSim->add_option("--meta", simMeta, "Sidecar JSON (default: <out>.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalid;
  }

  try {
    if (cSup->parsed()) {
      const auto m = loadAs(sup, MeasurementKind::Support);
      const auto r = noisySupportLSQ(m);
      nlohmann::json j;
      j["body"] = bodyToJson(r.body);
      j["supports"] = vectorJson(r.fitted);
      j["residual"] = r.residual;
      if (diagnostics) {
        j["solver"] = toJson(r.solver);
        j["wall_seconds"] = r.wallSeconds;
      }
      writeJson(j, sup.out);
    } else if (cBri->parsed()) {
      const auto m = loadAs(bri, MeasurementKind::Brightness);
      const auto r = noisyBrightLSQ(m);
      nlohmann::json j;
      j["zonotope"] = bodyToJson(r.fit.zonotope);
      j["residual"] = r.residual;
      j["phase2_ok"] = r.phase2Ok;
      if (r.phase2Ok) {
        j["surface_measure"] = bodyToJson(r.surfaceMeasure);
        j["body"] = bodyToJson(r.body);
      } else {
        j["phase2_error"] = r.phase2Error;
      }
      if (diagnostics) {
        j["nnls"] = toJson(r.fit.nnls);
        j["wall_seconds"] = r.wallSeconds;
      }
      writeJson(j, bri.out);
      if (!r.phase2Ok) {
        std::cerr << "geotomo: " << r.phase2Error << '\n';
        return kInvalid;
      }
    } else if (cRose->parsed()) {
      const auto m = loadAs(rose, MeasurementKind::Rose);
      const auto r = noisyRoseLSQ(m);
      nlohmann::json j;
      j["zonotope"] = bodyToJson(r.fit.zonotope);
      j["measure"] = bodyToJson(r.measure);
      j["length_density"] = r.measure.totalMass();
      j["residual"] = r.residual;
      if (diagnostics) {
        j["nnls"] = toJson(r.fit.nnls);
        j["wall_seconds"] = r.wallSeconds;
      }
      writeJson(j, rose.out);
    } else if (cMc->parsed()) {
      auto cfgJson = readJson(config);
      if (app.get_option("--seed")->count()) cfgJson["seed"] = seed;
      if (app.get_option("--threads")->count()) cfgJson["threads"] = threads;
      const ExperimentConfig cfg = experimentConfigFromJson(cfgJson);
      std::error_code ec;
      fs::create_directories(outDir, ec);
      if (ec) fail(ErrorCode::Io, "cannot create '" + outDir + "': " + ec.message());
      const ErrorTable t = runExperiment(cfg);
      const fs::path dir(outDir);
      emitCsv(t, dir / "table.csv");
      writeJson(toJson(cfg), dir / "config.json");
      std::vector<std::pair<std::string, RateFit>> fits;
      for (auto metric : t.metrics) {
        emitSvg(t, metric, dir / (std::string(toString(metric)) + ".svg"));
        for (auto st : {Statistic::Mean, Statistic::Max}) {
          try {
            fits.emplace_back(std::string(toString(metric)) + (st == Statistic::Mean ? "_mean" : "_max"),
                              fitRate(t, metric, st));
          } catch (const Error& e) {
            std::cerr << "geotomo: no fit for " << toString(metric) << ": " << e.what() << '\n';
          }
        }
      }
      emitFitCsv(fits, dir / "fits.csv");
      int failures = 0;
      for (const auto& r : t.rows) failures += r.failures;
      for (const auto& [name, f] : fits)
        std::printf("%-18s exponent %+.4f  amplitude %.4g  R^2 %.4f\n", name.c_str(), f.exponent, f.amplitude,
                    f.rSquared);
      if (failures > 0) std::printf("failed iterations: %d\n", failures);
    } else if (cFit->parsed()) {
      const ErrorTable t = parseCsv(table);
      const Statistic st = which == "max" ? Statistic::Max : Statistic::Mean;
      std::printf("metric,exponent,amplitude,r_squared\n");
      for (auto metric : t.metrics) {
        const RateFit f = fitRate(t, metric, st);
        std::printf("%s,%s,%s,%s\n", toString(metric), formatDouble(f.exponent).c_str(),
                    formatDouble(f.amplitude).c_str(), formatDouble(f.rSquared).c_str());
      }
    } else if (cSim->parsed()) {
      const auto kind = measurementKindFromString(simKind);
      Body body;
      if (fs::exists(simBody)) {
        body = readBodyJson(simBody);
      } else if (kind == MeasurementKind::Rose) {
        const auto& ms = referenceMeasures();
        require(ms.count(simBody), ErrorCode::InvalidParameter, "unknown measure '" + simBody + "'");
        body = ms.at(simBody);
      } else {
        const auto& bs = referenceBodies();
        require(bs.count(simBody), ErrorCode::InvalidParameter, "unknown body '" + simBody + "'");
        body = bs.at(simBody);
      }
      MeasurementSet m;
      if (const auto* p = std::get_if<VPolytope>(&body)) {
        const auto dirs = p->dims() == 3 ? stackedNetSequence(3, simK)
                          : kind == MeasurementKind::Support ? equallySpaced2D(simK)
                                                             : equallySpacedHalfCircle(simK);
        m = simulateMeasurements(p->scaled(simScale), kind, dirs, simSigma, seed);
      } else if (const auto* a = std::get_if<AtomicMeasure>(&body)) {
        const auto dirs = a->dims() == 3 ? stackedNetSequence(3, simK) : equallySpacedHalfCircle(simK);
        m = simulateMeasurements(a->scaled(simScale), kind, dirs, simSigma, seed);
      } else {
        fail(ErrorCode::InvalidParameter, "simulate needs a vpolytope or a measure");
      }
      writeMeasurements(m, simCsv, simMeta.empty() ? fs::path(simCsv + ".json") : fs::path(simMeta));
    }
  } catch (const Error& e) {
    std::cerr << "geotomo: " << e.what() << '\n';
    return exitFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "geotomo: " << e.what() << '\n';
    return kInvalid;
  }
  return kOk;
}
