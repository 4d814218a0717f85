#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "prymlab/io.hpp"

using namespace prym;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(PRYM_CLI_PATH) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string data(const char* name) { return std::string(PRYM_DATA_DIR) + "/" + name; }

std::string write_tmp(const std::string& name, const std::string& text) {
  const std::string path = "/tmp/prymlab_test_" + name;
  std::ofstream(path) << text;
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("schema version") { CHECK(report_schema_version() == "prym-report/1"); }

TEST_CASE("surface files") {
  const SurfaceFile f = load_surface(data("s1.json"));
  CHECK(f.curve.p_roots[0] == cplx(-2, 0));
  CHECK(f.qdiff.n_coeffs[1] == cplx(0, 1));
  CHECK_FALSE(f.basepoint.has_value());
  const SurfaceFile g = parse_surface(surface_to_json(f).dump());
  CHECK(g.curve.p_roots == f.curve.p_roots);
  CHECK(g.qdiff.n_coeffs == f.qdiff.n_coeffs);
  CHECK(surface_hash(build_surface(f)) == surface_hash(build_surface(g)));

  CHECK(parse_surface(R"({"p_roots":[-2,-1,0,1,2,3],"n_coeffs":[2,[0,1],1],"basepoint":[0.5,2]})").basepoint ==
        cplx(0.5, 2));
  CHECK_THROWS_AS(parse_surface(R"({"p_roots":[1,2,3]})"), Error);
  CHECK_THROWS_AS(parse_surface(R"({"p_roots":[-2,-1,0,1,2,3],"n_coeffs":[2,[0,1],"x"]})"), Error);
  const std::string extra = R"({"p_roots":[-2,-1,0,1,2,3],"n_coeffs":[2,[0,1],1],"colour":"blue"})";
  CHECK_NOTHROW(parse_surface(extra));
  CHECK_THROWS_AS(parse_surface(extra, true), Error);
  try {
    parse_surface("{\"p_roots\": [1, 2,");
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("byte") != std::string::npos);
  }
}

TEST_CASE("report round trip") {
  Report r;
  r.surface_hash = "0123456789abcdef";
  r.suite = "geometry";
  r.checks.push_back(make_check("a.b", "an anchor", cplx(1.0 / 3, -2e-17), cplx(0.1, 0.7), 3.3e-12, 1e-9));
  r.checks.push_back(make_check("a.c", "failing", cplx(1, 0), cplx(2, 0), 1.0, 1e-6));
  const std::string text = dump_report(r);
  const Report back = report_from_json(nlohmann::json::parse(text), true);
  CHECK(dump_report(back) == text);
  CHECK(back.checks[0].lhs == r.checks[0].lhs);
  CHECK(back.checks[0].residual == r.checks[0].residual);
  CHECK_FALSE(back.pass());
  CHECK(text.find("wall_time") == std::string::npos);

  auto j = nlohmann::json::parse(text);
  j["checks"][0]["extra"] = 1;
  CHECK_NOTHROW(report_from_json(j));
  CHECK_THROWS_AS(report_from_json(j, true), Error);
  j = nlohmann::json::parse(text);
  j["schema"] = "prym-report/2";
  CHECK_THROWS_AS(report_from_json(j), Error);
}

TEST_CASE("cli validate") {
  Run r = run("validate " + data("s1.json"));
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["valid"] == true);
  CHECK(j["zeros"].size() == 2);
  CHECK(j["cover_genus"] == 5);

  r = run("validate " + write_tmp("bad.json", "{\"p_roots\": [1, 2,"));
  CHECK(r.code == 2);
  CHECK(r.out.find("byte") != std::string::npos);

  r = run("validate " + write_tmp("degenerate.json", R"({"p_roots":[-2,-1,0,1,2,3],"n_coeffs":[0,0,1]})"));
  CHECK(r.code == 1);
  CHECK(r.out.find("DegenerateZeros") != std::string::npos);

  r = run("periods " + write_tmp("degenerate.json", R"({"p_roots":[-2,-1,0,1,2,3],"n_coeffs":[0,0,1]})"));
  CHECK(r.code == 2);

  r = run("validate " + write_tmp("extra.json", R"({"p_roots":[-2,-1,0,1,2,3],"n_coeffs":[2,[0,1],1],"x":1})") +
          " --strict");
  CHECK(r.code == 2);
  CHECK(run("validate /nonexistent.json").code == 2);
}

TEST_CASE("cli usage errors") {
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("verify-all " + data("s1.json") + " --suite nonsense").code == 2);
  CHECK(run("bracket " + data("s1.json") + " --pair A1").code == 2);
  CHECK(run("flows " + data("s1.json") + " --hamiltonian 4").code == 2);
  CHECK(run("periods " + data("s1.json") + " --tol-quad -1").code == 2);
}

TEST_CASE("cli periods and monodromy") {
  Run r = run("periods " + data("s1.json"));
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["Omega"].size() == 2);
  CHECK(j["B_minus_PiA"].get<double>() < 1e-8);
  r = run("prym " + data("s1.json"));
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["Pi"].size() == 3);
  r = run("monodromy " + data("s1.json"));
  CHECK(r.code == 0);
  j = nlohmann::json::parse(r.out);
  CHECK(j["traces"].size() == 8);
  CHECK(j["relation_defect"].get<double>() < 1e-7);
}

TEST_CASE("cli bracket and flows") {
  Run r = run("bracket " + data("s1.json") + " --pair A1,B1");
  CHECK(r.code == 0);
  auto rep = report_from_json(nlohmann::json::parse(r.out), true);
  REQUIRE(rep.checks.size() == 1);
  CHECK(std::abs(rep.checks[0].lhs - 0.5) < 1e-6);

  r = run("flows " + data("s1.json") + " --hamiltonian 2 --time 0.02 --steps 2");
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["steps"].size() == 3);
  CHECK(j["steps"][2]["t"].get<double>() == doctest::Approx(0.02));
}

TEST_CASE("cli reports are deterministic") {
  const std::string a = "/tmp/prymlab_test_r1.json", b = "/tmp/prymlab_test_r2.json";
  CHECK(run("verify-all " + data("s1.json") + " --suite monodromy --threads 1 --out " + a).code == 0);
  CHECK(run("verify-all " + data("s1.json") + " --suite monodromy --threads 3 --out " + b).code == 0);
  CHECK(slurp(a) == slurp(b));
  const Report rep = report_from_json(nlohmann::json::parse(slurp(a)), true);
  CHECK(rep.pass());
  CHECK(std::is_sorted(rep.checks.begin(), rep.checks.end(),
                       [](const Check& x, const Check& y) { return x.id < y.id; }));
  CHECK(run("verify-all " + data("s1.json") + " --suite geometry --timings --out " + a).code == 0);
  CHECK(slurp(a).find("wall_time") != std::string::npos);
}
