#include <cstdint>
#include <cstring>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "prymlab/io.hpp"

namespace prym {

using nlohmann::json;

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx cplx_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_null()) return {std::nan(""), 0.0};
  throw Error(Err::BadInput, "expected a number or [re, im], got " + j.dump());
}

namespace {

template <std::size_t N>
std::array<cplx, N> cplx_array(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(Err::BadInput, std::string("missing field ") + key);
  const json& a = j.at(key);
  if (!a.is_array() || a.size() != N)
    throw Error(Err::BadInput, std::string(key) + " needs " + std::to_string(N) + " entries");
  std::array<cplx, N> out;
  for (std::size_t i = 0; i < N; ++i) {
    try {
      out[i] = cplx_from_json(a[i]);
    } catch (const Error& e) {
      throw Error(Err::BadInput, std::string(key) + "[" + std::to_string(i) + "]: " + e.what());
    }
  }
  return out;
}

}  // namespace

SurfaceFile parse_surface(const std::string& text, bool strict) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Err::BadInput, "malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!j.is_object()) throw Error(Err::BadInput, "surface file must be a JSON object");
  if (strict) {
    static const std::set<std::string> known{"p_roots", "n_coeffs", "basepoint", "label_order", "marking"};
    for (const auto& [k, v] : j.items())
      if (!known.count(k)) throw Error(Err::BadInput, "unknown field " + k);
  }
  SurfaceFile f;
  f.curve.p_roots = cplx_array<6>(j, "p_roots");
  f.qdiff.n_coeffs = cplx_array<3>(j, "n_coeffs");
  if (j.contains("basepoint")) {
    const json& b = j.at("basepoint");
    if (!(b.is_string() && b.get<std::string>() == "auto")) f.basepoint = cplx_from_json(b);
  }
  if (j.contains("label_order")) {
    const json& l = j.at("label_order");
    if (!l.is_array() || l.size() != 6) throw Error(Err::BadInput, "label_order needs 6 entries");
    std::set<int> seen;
    for (int i = 0; i < 6; ++i) {
      if (!l[i].is_number_integer()) throw Error(Err::BadInput, "label_order entries must be integers");
      f.curve.label_order[i] = l[i].get<int>();
      if (f.curve.label_order[i] < 0 || f.curve.label_order[i] > 5) throw Error(Err::BadInput, "label_order out of range");
      seen.insert(f.curve.label_order[i]);
    }
    if (seen.size() != 6) throw Error(Err::BadInput, "label_order must be a permutation of 0..5");
  }
  if (j.contains("marking") && !(j.at("marking").is_string() && j.at("marking").get<std::string>() == "standard"))
    throw Error(Err::BadInput, "only the standard marking is supported");
  return f;
}

SurfaceFile load_surface(const std::string& path, bool strict) {
  std::ifstream in(path);
  if (!in) throw Error(Err::BadInput, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_surface(ss.str(), strict);
}

json surface_to_json(const SurfaceFile& f) {
  json j;
  j["p_roots"] = json::array();
  for (cplx r : f.curve.p_roots) j["p_roots"].push_back(to_json(r));
  j["n_coeffs"] = json::array();
  for (cplx c : f.qdiff.n_coeffs) j["n_coeffs"].push_back(to_json(c));
  j["basepoint"] = f.basepoint ? to_json(*f.basepoint) : json("auto");
  j["label_order"] = f.curve.label_order;
  return j;
}

Surface build_surface(const SurfaceFile& f) { return validate_surface(f.curve, f.qdiff, f.basepoint); }

std::string surface_hash(const Surface& s) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](double d) {
    unsigned char b[sizeof d];
    std::memcpy(b, &d, sizeof d);
    for (unsigned char c : b) h = (h ^ c) * 1099511628211ull;
  };
  for (cplx r : s.curve.p_roots) mix(r.real()), mix(r.imag());
  for (int k : s.curve.label_order) mix(double(k));
  for (cplx c : s.qdiff.n_coeffs) mix(c.real()), mix(c.imag());
  mix(s.x0.real()), mix(s.x0.imag());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace prym
