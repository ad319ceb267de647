#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "cli.hpp"

using namespace vir;
using namespace vir::cli;

namespace {

json run_body(const json& config, RunOptions opts = {}) { return run(config, opts).body; }

std::vector<std::string> schema_paths(const json& config) {
  try {
    run(config);
  } catch (const SchemaError& e) {
    return e.paths;
  }
  return {};
}

}  // namespace

TEST_CASE("documented examples") {
  auto c = run_body({{"command", "measure-c"}, {"parameters", {{"beta", 1}, {"cutoff", 8}}}});
  CHECK(c["results"]["result"].get<double>() == doctest::Approx(13.0).epsilon(1e-12));
  CHECK(std::abs(c["results"]["result"].get<double>() - 13.0) <= 1e-9);

  auto g = run_body({{"command", "gram"}, {"parameters", {{"c", 0}, {"h", 0}, {"level", 1}}}});
  CHECK(g["results"]["matrix"] == json::parse("[[0.0]]"));

  auto k = run_body({{"command", "cocycle"}, {"parameters", {{"f", "cos2θ"}, {"g", "sin2θ"}}}});
  CHECK(k["results"]["result"].get<double>() == doctest::Approx(3.0));
  auto kx = run_body({{"command", "cocycle"}, {"parameters", {{"f", "cos2θ"}, {"g", "sin2θ"}}}}, {true});
  CHECK(kx["results"]["result_exact"] == "3");
}

TEST_CASE("schema violations list JSON paths") {
  CHECK(schema_paths({{"command", "measure-c"}, {"parameters", {{"beta", 1}, {"bogus", 2}}}}) ==
        std::vector<std::string>{"/parameters/bogus"});
  CHECK(schema_paths({{"command", "measure-c"}, {"extra", 1}}) == std::vector<std::string>{"/extra"});
  CHECK(schema_paths({{"command", "measure-c"}, {"parameters", {{"beta", "one"}}}}) ==
        std::vector<std::string>{"/parameters/beta"});
  CHECK(schema_paths({{"command", "cocycle"}, {"parameters", {{"f", {{"cos", 1}, {"phase", 2}}}, {"g", "sin1"}}}}) ==
        std::vector<std::string>{"/parameters/f/phase"});
  CHECK(schema_paths({{"command", "gram"}, {"parameters", {{"c", 1}, {"h", 0}}}}) ==
        std::vector<std::string>{"/parameters/level"});
  CHECK(schema_paths({{"command", "no-such"}}) == std::vector<std::string>{"/command"});
  CHECK(schema_paths({{"command", "cocycle"}, {"parameters", {{"f", "cos2 +"}, {"g", "sin2"}}}}) ==
        std::vector<std::string>{"/parameters/f"});
  auto both = schema_paths({{"command", "measure-c"}, {"parameters", {{"x", 1}, {"y", 2}}}});
  CHECK(both.size() == 2);
}

TEST_CASE("function literals") {
  auto f = parse_function("0.3*sin(1) - 1/2*cos 3", "/f");
  REQUIRE(f.exact);
  CHECK(*f.exact == ExactTestFunction::sine(1, ratio(3, 10)) - ExactTestFunction::cosine(3, ratio(1, 2)));
  CHECK(*parse_function("cos θ", "/f").exact == ExactTestFunction::cosine(1));
  CHECK(*parse_function(json::parse(R"({"coefficients": [[0, 0.5], [2, 0, -0.5]]})"), "/f").exact ==
        ExactTestFunction::constant(ratio(1, 2)) + ExactTestFunction::sine(2));
  CHECK(*parse_function(json::parse(R"([{"cos": 2, "amplitude": "1/3"}, 0.25])"), "/f").exact ==
        ExactTestFunction::cosine(2, ratio(1, 3)) + ExactTestFunction::constant(ratio(1, 4)));
  CHECK_THROWS_AS(parse_function(json::parse(R"({"coefficients": [[1, 1, 0], [-1, 2, 0]]})"), "/f"), SchemaError);

  auto b = parse_function(json::parse(R"({"bump": {"interval": ["-pi/4", "pi/4"], "degree": 10,
                                          "profile": "derivative-one", "target": 1e-3}})"), "/g");
  REQUIRE(b.certificate);
  CHECK_FALSE(b.exact);
  CHECK(b.certificate->profile == BumpProfile::derivative_one);
  CHECK(b.certificate->constraint_residual <= 1e-3);
  CHECK(parse_angle("-pi/4", "/a") == doctest::Approx(-std::numbers::pi / 4));
  CHECK(parse_angle("0.5pi", "/a") == doctest::Approx(std::numbers::pi / 2));
  CHECK(parse_angle("3*pi/8", "/a") == doctest::Approx(3 * std::numbers::pi / 8));
  CHECK(parse_exact_number(0.1, "/x") == ratio(1, 10));
}

TEST_CASE("reports are deterministic, sorted and round-trip") {
  json config = {{"command", "gram"}, {"parameters", {{"c", "1/2"}, {"h", "1/16"}, {"level", 3}}}};
  auto a = run_body(config, {true}), b = run_body(config, {true});
  CHECK(a.dump() == b.dump());
  std::vector<std::string> keys;
  for (auto it = a.begin(); it != a.end(); ++it) keys.push_back(it.key());
  CHECK(std::is_sorted(keys.begin(), keys.end()));
  CHECK(a["inputs"]["arithmetic_mode"] == "exact");

  json again = {{"command", a["command"]}, {"parameters", a["inputs"]}};
  CHECK(run_body(again)["results"] == a["results"]);

  json vir = {{"command", "verify-virasoro"}, {"parameters", {{"alpha", "1/3"}, {"beta", 0.5}, {"cutoff", 8}}}};
  auto v = run_body(vir, {true});
  CHECK(v["results"]["residual"]["exactly_zero"] == true);
  CHECK(v["inputs"]["max_mode"] == 3);
  CHECK(run_body({{"command", "verify-virasoro"}, {"parameters", v["inputs"]}})["results"] == v["results"]);
  CHECK_FALSE(run(vir).to_json(true)["wall_time"].is_null());
  CHECK_FALSE(run(vir).to_json(false).contains("wall_time"));
}

TEST_CASE("commands") {
  auto kac = run_body({{"command", "kac-classify"}, {"parameters", {{"c", 0.5}, {"h", 0.5}}}});
  CHECK(kac["results"]["kind"] == "discrete-series");
  CHECK(kac["results"]["m"] == 3);
  auto pos = run_body({{"command", "positivity-scan"}, {"parameters", {{"c", 0.5}, {"h", 0.3}}}});
  CHECK(pos["results"]["first_failing_level"] == 2);
  auto cov = run_body({{"command", "verify-covariance"}, {"parameters", {{"cutoff", 8}}}}, {true});
  CHECK(cov["results"]["residual"]["exactly_zero"] == true);
  auto alg = run_body({{"command", "alg-rel"}, {"parameters", {{"f", "cos1"}, {"g", "sin1"}, {"cutoff", 8}}}}, {true});
  CHECK(alg["results"]["residual"]["exactly_zero"] == true);
  auto tr = run_body({{"command", "trule"},
                      {"parameters", {{"f", "cos1"}, {"g", "0.3*sin1"}, {"cutoffs", {6, 8}}}}});
  CHECK(tr["results"]["trule1"]["monotone"] == true);
  CHECK(tr["results"]["trule2"]["residuals"].size() == 2);
  auto ex = run_body({{"command", "expectation"},
                      {"parameters", {{"t", 0.0}, {"c", 2}, {"h", 0.5}, {"functions", {"0.1*cos2"}}, {"cutoff", 8}}}});
  CHECK(ex["results"]["value"]["re"] == 1.0);
  CHECK(ex["error_estimates"]["value"] == 0.0);
  auto fa = run_body({{"command", "factorization"},
                      {"parameters", {{"t", 0.0}, {"first", {4, 0.5}}, {"second", {4, 0.5}}, {"functions", {"0.1*cos2"}}, {"cutoff", 8}}}});
  CHECK(fa["results"]["residual"] == 0.0);
  auto sf = run_body({{"command", "spectral-floor"}, {"parameters", {{"f", 1}, {"cutoffs", {6}}}}});
  CHECK(std::abs(sf["results"]["floors"][0]["lowest"].get<double>()) <= 1e-12);
}

TEST_CASE("refusals are structured") {
  json bad = {{"command", "expectation"},
              {"parameters", {{"t", 0.1}, {"c", 0.5}, {"h", 0.3}, {"functions", {"0.1*cos2"}}, {"cutoff", 8}}}};
  try {
    run(bad);
    FAIL("expected a refusal");
  } catch (const std::exception& e) {
    auto j = error_json(e);
    CHECK(j["error"]["type"] == "refusal");
    CHECK(exit_code_for(e) == 3);
  }
  try {
    run({{"command", "trule"}, {"parameters", {{"f", "cos1"}, {"g", "sin1"}}}}, {true});
    FAIL("exact trule should be refused");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("exact") != std::string::npos);
  }
  try {
    run({{"command", "gram"}, {"parameters", {{"c", 1}}}});
  } catch (const std::exception& e) {
    CHECK(exit_code_for(e) == 2);
    CHECK(error_json(e)["error"]["type"] == "schema");
  }
}

TEST_CASE("suites") {
  auto empty = run_suite(json::array(), {});
  CHECK(empty.passed);
  CHECK(empty.body["total"] == 0);

  json suite = json::parse(R"([
    {"name": "c", "config": {"command": "measure-c", "parameters": {"beta": 1}},
     "expect": [{"key": "/results/result", "value": 13, "tolerance": 1e-9}]},
    {"name": "impossible", "config": {"command": "measure-c", "parameters": {"beta": 1}},
     "expect": [{"key": "/results/result", "value": 14, "tolerance": 1e-12}]},
    {"name": "refused", "config": {"command": "gram", "parameters": {"c": 1}}, "expect_error": true},
    {"name": "bad expectation", "config": {"command": "measure-c"}, "expect": [{"key": "/results/nothing", "at_most": 1}]}
  ])");
  auto rep = run_suite(suite, {0, 2, std::nullopt});
  CHECK_FALSE(rep.passed);
  CHECK(rep.body["failed"] == json::parse(R"(["impossible", "bad expectation"])"));
  CHECK(rep.body["entries"][0]["passed"] == true);
  CHECK(rep.body["entries"][2]["passed"] == true);
}

TEST_CASE("CSV export and threads") {
  auto dir = std::filesystem::temp_directory_path() / "vircheck_csv_test";
  std::filesystem::remove_all(dir);
  RunOptions opts;
  opts.csv_dir = dir.string();
  run({{"command", "positivity-scan"}, {"parameters", {{"c", 1.5}, {"h", 0.1}, {"max_level", 3}}}}, opts);
  std::ifstream in(dir / "positivity-scan_levels.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "level,dim,positive,zero,negative,min_eigenvalue");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 4);
  std::filesystem::remove_all(dir);

  CHECK(resolve_threads(3) == 3);
  setenv("VIR_THREADS", "5", 1);
  CHECK(resolve_threads(0) == 5);
  unsetenv("VIR_THREADS");
  CHECK(resolve_threads(0) >= 1);
}
