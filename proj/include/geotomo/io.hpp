#pragma once
// Text formats: direction CSV, body JSON, measurement CSV with a JSON sidecar.

#include <filesystem>
#include <string>
#include <variant>

#include "geotomo/algorithms.hpp"
#include "json.hpp"

namespace geotomo {

/// One direction per line, n comma-separated components, no header.
DirectionSequence readDirectionsCsv(const std::filesystem::path& path);
void writeDirectionsCsv(const DirectionSequence& dirs, const std::filesystem::path& path);

using Body = std::variant<VPolytope, Zonotope, AtomicMeasure>;

/// {"dims": n, "kind": "vpolytope" | "zonotope" | "measure", "data": [...]}.
/// data is flat: n numbers per vertex, n + 1 per generator (direction, half
/// length) or atom (direction, mass). Invariants are checked on read.
nlohmann::json bodyToJson(const Body& body);
Body bodyFromJson(const nlohmann::json& j);
Body readBodyJson(const std::filesystem::path& path);
void writeBodyJson(const Body& body, const std::filesystem::path& path);

/// CSV with header u_1,...,u_n,value. The sidecar holds
/// {"sigma": s, "seed": k, "kind": "support" | "brightness" | "rose"}.
MeasurementSet readMeasurements(const std::filesystem::path& csv, const std::filesystem::path& meta = {});
void writeMeasurements(const MeasurementSet& m, const std::filesystem::path& csv, const std::filesystem::path& meta);

nlohmann::json toJson(const QPSolution& s);
nlohmann::json toJson(const NnlsResult& r);

std::string formatDouble(double v);

}  // namespace geotomo
