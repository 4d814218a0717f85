#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "prymlab/check.hpp"
#include "prymlab/surface.hpp"

namespace prym {

inline constexpr const char* kToolVersion = "0.1.0";

// { "p_roots": [[re,im] x6], "n_coeffs": [[re,im] x3], "basepoint": [re,im] | "auto",
//   "label_order": [6 ints], "marking": "standard" }. Plain numbers are accepted for real entries.
struct SurfaceFile {
  CurveSpec curve;
  QDiffSpec qdiff;
  std::optional<cplx> basepoint;
};

// Throws Error(BadInput) with the parser's byte position for malformed JSON.
// strict: unknown keys are rejected.
SurfaceFile parse_surface(const std::string& text, bool strict = false);
SurfaceFile load_surface(const std::string& path, bool strict = false);
nlohmann::json surface_to_json(const SurfaceFile& f);
Surface build_surface(const SurfaceFile& f);
// FNV-1a of the canonical curve data and basepoint, 16 hex digits.
std::string surface_hash(const Surface& s);

nlohmann::json to_json(cplx z);
cplx cplx_from_json(const nlohmann::json& j);

struct Report {
  std::string tool_version = kToolVersion;
  std::string surface_hash;
  std::string suite;
  std::vector<Check> checks;
  bool timings = false;  // wall_time is written only when set
  bool pass() const { return all_pass(checks); }
};

std::string report_schema_version();
nlohmann::json report_to_json(const Report& r);
// strict: unknown fields anywhere in the report are rejected
Report report_from_json(const nlohmann::json& j, bool strict = false);
std::string dump_report(const Report& r);

}  // namespace prym
