#include <set>

#include "prymlab/io.hpp"

namespace prym {

using nlohmann::json;

std::string report_schema_version() { return "prym-report/1"; }

namespace {

json number(double d) { return std::isfinite(d) ? json(d) : json(nullptr); }

json cnum(cplx z) { return json::array({number(z.real()), number(z.imag())}); }

double num_from(const json& j) {
  if (j.is_null()) return std::nan("");
  if (!j.is_number()) throw Error(Err::BadInput, "expected a number, got " + j.dump());
  return j.get<double>();
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw Error(Err::BadInput, "unknown field " + k + " in " + where);
}

}  // namespace

json report_to_json(const Report& r) {
  json j;
  j["schema"] = report_schema_version();
  j["tool_version"] = r.tool_version;
  j["surface_hash"] = r.surface_hash;
  j["suite"] = r.suite;
  j["pass"] = r.pass();
  j["checks"] = json::array();
  for (const Check& c : r.checks) {
    json e;
    e["check"] = c.id;
    e["anchor"] = c.anchor;
    e["lhs"] = cnum(c.lhs);
    e["rhs"] = cnum(c.rhs);
    e["residual"] = number(c.residual);
    e["tolerance"] = number(c.tolerance);
    e["pass"] = c.pass;
    if (r.timings) e["wall_time"] = c.wall_time;
    j["checks"].push_back(std::move(e));
  }
  return j;
}

Report report_from_json(const json& j, bool strict) {
  if (!j.is_object()) throw Error(Err::BadInput, "report must be a JSON object");
  if (j.value("schema", std::string()) != report_schema_version())
    throw Error(Err::BadInput, "unsupported report schema");
  if (strict) reject_unknown(j, {"schema", "tool_version", "surface_hash", "suite", "pass", "checks"}, "report");
  Report r;
  try {
    r.tool_version = j.at("tool_version").get<std::string>();
    r.surface_hash = j.at("surface_hash").get<std::string>();
    r.suite = j.value("suite", std::string());
    for (const json& e : j.at("checks")) {
      if (strict)
        reject_unknown(e, {"check", "anchor", "lhs", "rhs", "residual", "tolerance", "pass", "wall_time"}, "check");
      Check c;
      c.id = e.at("check").get<std::string>();
      c.anchor = e.at("anchor").get<std::string>();
      c.lhs = cplx_from_json(e.at("lhs"));
      c.rhs = cplx_from_json(e.at("rhs"));
      c.residual = num_from(e.at("residual"));
      c.tolerance = num_from(e.at("tolerance"));
      c.pass = e.at("pass").get<bool>();
      if (e.contains("wall_time")) {
        c.wall_time = num_from(e.at("wall_time"));
        r.timings = true;
      }
      r.checks.push_back(std::move(c));
    }
  } catch (const json::exception& e) {
    throw Error(Err::BadInput, std::string("bad report: ") + e.what());
  }
  return r;
}

std::string dump_report(const Report& r) { return report_to_json(r).dump(2) + "\n"; }

}  // namespace prym
