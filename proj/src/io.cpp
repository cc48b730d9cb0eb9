#include "geotomo/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "geotomo/error.hpp"

namespace geotomo {

namespace fs = std::filesystem;

namespace {

std::ifstream openIn(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream openOut(const fs::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  return out;
}

std::vector<double> parseRow(const std::string& line, const fs::path& path, std::size_t lineNo) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    if (b == std::string::npos) fail(ErrorCode::InvalidData, path.string() + ":" + std::to_string(lineNo) + ": empty field");
    const std::string t = cell.substr(b, e - b + 1);
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size())
      fail(ErrorCode::InvalidData, path.string() + ":" + std::to_string(lineNo) + ": bad number '" + t + "'");
    out.push_back(v);
  }
  return out;
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

std::vector<double> numbers(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) fail(ErrorCode::InvalidData, std::string("missing array '") + key + "'");
  std::vector<double> out;
  for (const auto& v : j[key]) {
    if (!v.is_number()) fail(ErrorCode::InvalidData, std::string("non-numeric entry in '") + key + "'");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

std::string formatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

DirectionSequence readDirectionsCsv(const fs::path& path) {
  auto in = openIn(path);
  std::string line;
  std::size_t lineNo = 0;
  int n = 0;
  DirectionSequence out;
  while (std::getline(in, line)) {
    ++lineNo;
    if (blank(line)) continue;
    const auto row = parseRow(line, path, lineNo);
    if (n == 0) {
      n = static_cast<int>(row.size());
      require(n >= 2, ErrorCode::InvalidData, path.string() + ": directions need at least two components");
      out = DirectionSequence(n);
    }
    require(static_cast<int>(row.size()) == n, ErrorCode::InvalidData,
            path.string() + ":" + std::to_string(lineNo) + ": expected " + std::to_string(n) + " components");
    out.push_back(Direction(Eigen::Map<const Vector>(row.data(), n)));
  }
  return out;
}

void writeDirectionsCsv(const DirectionSequence& dirs, const fs::path& path) {
  auto out = openOut(path);
  for (const auto& d : dirs) {
    for (int a = 0; a < d.dims(); ++a) out << (a ? "," : "") << formatDouble(d[a]);
    out << '\n';
  }
  if (!out) fail(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

nlohmann::json bodyToJson(const Body& body) {
  nlohmann::json j;
  std::vector<double> data;
  if (const auto* p = std::get_if<VPolytope>(&body)) {
    j["dims"] = p->dims();
    j["kind"] = "vpolytope";
    for (const auto& v : p->vertices())
      for (int a = 0; a < p->dims(); ++a) data.push_back(v[a]);
  } else if (const auto* z = std::get_if<Zonotope>(&body)) {
    j["dims"] = z->dims();
    j["kind"] = "zonotope";
    for (const auto& g : z->generators()) {
      for (int a = 0; a < z->dims(); ++a) data.push_back(g.direction[a]);
      data.push_back(g.halfLength);
    }
  } else {
    const auto& m = std::get<AtomicMeasure>(body);
    j["dims"] = m.dims();
    j["kind"] = "measure";
    for (const auto& at : m.atoms()) {
      for (int a = 0; a < m.dims(); ++a) data.push_back(at.direction[a]);
      data.push_back(at.mass);
    }
  }
  j["data"] = data;
  return j;
}

Body bodyFromJson(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dims") || !j["dims"].is_number_integer() || !j.contains("kind") ||
      !j["kind"].is_string())
    fail(ErrorCode::InvalidData, "body JSON needs integer 'dims' and string 'kind'");
  const int n = j["dims"].get<int>();
  require(n >= 2, ErrorCode::InvalidData, "body dimension must be >= 2");
  const std::string kind = j["kind"].get<std::string>();
  const auto data = numbers(j, "data");
  if (kind == "vpolytope") {
    require(data.size() % static_cast<std::size_t>(n) == 0, ErrorCode::InvalidData, "vertex data length is not a multiple of dims");
    std::vector<Vector> pts;
    for (std::size_t i = 0; i < data.size(); i += static_cast<std::size_t>(n))
      pts.push_back(Eigen::Map<const Vector>(data.data() + i, n));
    return VPolytope(n, pts);
  }
  const std::size_t stride = static_cast<std::size_t>(n) + 1;
  require(data.size() % stride == 0, ErrorCode::InvalidData, "data length is not a multiple of dims + 1");
  if (kind == "zonotope") {
    std::vector<Zonotope::Generator> gens;
    for (std::size_t i = 0; i < data.size(); i += stride)
      gens.push_back({Direction(Eigen::Map<const Vector>(data.data() + i, n)), data[i + stride - 1]});
    return Zonotope(n, std::move(gens));
  }
  if (kind == "measure") {
    std::vector<AtomicMeasure::Atom> atoms;
    for (std::size_t i = 0; i < data.size(); i += stride)
      atoms.push_back({Direction(Eigen::Map<const Vector>(data.data() + i, n)), data[i + stride - 1]});
    return AtomicMeasure(n, std::move(atoms));
  }
  fail(ErrorCode::InvalidData, "unknown body kind '" + kind + "'");
}

Body readBodyJson(const fs::path& path) {
  auto in = openIn(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidData, path.string() + ": " + e.what());
  }
  return bodyFromJson(j);
}

void writeBodyJson(const Body& body, const fs::path& path) {
  auto out = openOut(path);
  out << bodyToJson(body).dump(2) << '\n';
  if (!out) fail(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

MeasurementSet readMeasurements(const fs::path& csv, const fs::path& meta) {
  auto in = openIn(csv);
  std::string line;
  std::size_t lineNo = 0;
  int n = 0;
  MeasurementSet m;
  while (std::getline(in, line)) {
    ++lineNo;
    if (blank(line)) continue;
    if (n == 0) {
      // Header u_1,...,u_n,value
      int cols = 1;
      for (char c : line) cols += c == ',';
      n = cols - 1;
      require(n >= 2 && line.rfind("u_1", 0) == 0, ErrorCode::InvalidData,
              csv.string() + ": expected header u_1,...,u_n,value");
      m.dirs = DirectionSequence(n);
      continue;
    }
    const auto row = parseRow(line, csv, lineNo);
    require(static_cast<int>(row.size()) == n + 1, ErrorCode::InvalidData,
            csv.string() + ":" + std::to_string(lineNo) + ": expected " + std::to_string(n + 1) + " fields");
    m.dirs.push_back(Direction(Eigen::Map<const Vector>(row.data(), n)));
    m.values.push_back(row[static_cast<std::size_t>(n)]);
  }
  require(n > 0, ErrorCode::InvalidData, csv.string() + ": empty measurement file");
  if (!meta.empty()) {
    auto mi = openIn(meta);
    nlohmann::json j;
    try {
      mi >> j;
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::InvalidData, meta.string() + ": " + e.what());
    }
    if (j.contains("sigma")) m.noiseSigma = j["sigma"].get<double>();
    if (j.contains("seed")) m.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("kind")) m.kind = measurementKindFromString(j["kind"].get<std::string>());
    require(m.noiseSigma >= 0, ErrorCode::InvalidData, meta.string() + ": sigma must be nonnegative");
  }
  return m;
}

void writeMeasurements(const MeasurementSet& m, const fs::path& csv, const fs::path& meta) {
  {
    auto out = openOut(csv);
    const int n = m.dirs.dims();
    for (int a = 1; a <= n; ++a) out << "u_" << a << ',';
    out << "value\n";
    for (std::size_t i = 0; i < m.dirs.size(); ++i) {
      for (int a = 0; a < n; ++a) out << formatDouble(m.dirs[i][a]) << ',';
      out << formatDouble(m.values[i]) << '\n';
    }
    if (!out) fail(ErrorCode::Io, "write failed for '" + csv.string() + "'");
  }
  if (!meta.empty()) {
    auto out = openOut(meta);
    nlohmann::json j{{"sigma", m.noiseSigma}, {"seed", m.seed}, {"kind", toString(m.kind)}};
    out << j.dump(2) << '\n';
    if (!out) fail(ErrorCode::Io, "write failed for '" + meta.string() + "'");
  }
}

nlohmann::json toJson(const QPSolution& s) {
  return {{"objective", s.objective},
          {"kkt_residual", s.kktResidual},
          {"iterations", s.iterations},
          {"cut_rounds", s.cutRounds},
          {"constraints", s.constraintCount},
          {"active_set", s.activeSet},
          {"solution", std::vector<double>(s.solution.data(), s.solution.data() + s.solution.size())}};
}

nlohmann::json toJson(const NnlsResult& r) {
  return {{"residual_norm", r.residualNorm},
          {"kkt_residual", r.kktResidual},
          {"iterations", r.iterations},
          {"passive_set", r.passiveSet},
          {"x", std::vector<double>(r.x.data(), r.x.data() + r.x.size())}};
}

}  // namespace geotomo
