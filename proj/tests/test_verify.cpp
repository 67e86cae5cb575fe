#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "rcgap/verify.hpp"

using namespace rcgap;

TEST_CASE("all checks pass on a small corpus") {
  std::vector<Instance> corpus = {
      {"edge", ModelParams(0.5, 2)},
      {"path:3", ModelParams(0.3, 3)},
      {"grid:2", ModelParams(0.4, 2)},
  };
  SuiteReport report = run_suite(corpus, check_names(), SuiteOptions{});
  CHECK(report.all_pass());
  CHECK(report.n_fail == 0);
  CHECK(report.n_pass > 0);
}

TEST_CASE("report lines follow the JSON schema") {
  SuiteReport report =
      run_suite({{"edge", ModelParams(0.5, 2)}}, {"building-blocks"}, SuiteOptions{});
  std::istringstream lines(report.to_jsonl());
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    ++count;
    nlohmann::json j = nlohmann::json::parse(line);
    for (const char* key : {"check", "graph", "p", "q", "lhs", "rhs", "margin", "pass", "tol", "skipped"})
      CHECK(j.contains(key));
    CHECK(j["graph"] == "edge");
    CHECK(j["q"] == 2);
    CHECK((j["skipped"].is_null() || j["skipped"].is_string()));
  }
  CHECK(count == int(report.results.size()));
}

TEST_CASE("instances over the cap become skipped entries") {
  // path:15 has m=14, i.e. 2^14 RC states under the default 4096 cap
  SuiteReport report =
      run_suite({{"path:15", ModelParams(0.5, 2)}}, {"sb-hb"}, SuiteOptions{});
  REQUIRE(report.results.size() == 1);
  REQUIRE(report.results[0].skipped.has_value());
  CHECK(*report.results[0].skipped == "cap");
  CHECK(report.n_skipped == 1);
  CHECK(report.all_pass());
}

TEST_CASE("joint-space checks skip when only the joint cap is exceeded") {
  // grid:3 fits the RC cap but q^n 2^m is far above the joint cap
  SuiteOptions opts;
  InstanceContext ctx({"grid:3", ModelParams(0.5, 2)}, opts);
  CHECK(ctx.rc_in_cap());
  CHECK_FALSE(ctx.joint_in_cap());
  auto rs = check_building_blocks(ctx);
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].skipped == "cap");
}

TEST_CASE("graphs without an embedding skip the duality checks") {
  SuiteOptions opts;
  InstanceContext ctx({"complete:4", ModelParams(0.5, 2)}, opts);
  auto rs = check_duality(ctx);
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].skipped == "no-embedding");
}

TEST_CASE("mixing checks respect the dedicated state cap") {
  SuiteOptions opts;
  opts.mix_states_cap = 2;
  InstanceContext ctx({"grid:2", ModelParams(0.5, 2)}, opts);
  auto rs = check_mixing_bounds(ctx);
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].skipped == "cap");
}

TEST_CASE("empty check selection yields an empty report") {
  SuiteReport report = run_suite({{"edge", ModelParams(0.5, 2)}}, {}, SuiteOptions{});
  CHECK(report.results.empty());
  CHECK(report.all_pass());
}

TEST_CASE("unknown check names are rejected") {
  CHECK_THROWS_AS(run_suite({{"edge", ModelParams(0.5, 2)}}, {"no-such-check"}, SuiteOptions{}),
                  ParseError);
}

TEST_CASE("reports are byte-identical across runs") {
  std::vector<Instance> corpus = {{"grid:2", ModelParams(0.4, 3)}};
  SuiteReport a = run_suite(corpus, check_names(), SuiteOptions{});
  SuiteReport b = run_suite(corpus, check_names(), SuiteOptions{});
  CHECK(a.to_jsonl() == b.to_jsonl());
  CHECK(a.summary() == b.summary());
}

TEST_CASE("the SB-HB upper bound is tight on K2") {
  SuiteOptions opts;
  InstanceContext ctx({"edge", ModelParams(0.5, 2)}, opts);
  auto rs = check_sb_hb(ctx);
  bool found = false;
  for (const auto& r : rs)
    if (r.check == "sb-hb/upper") {
      found = true;
      CHECK(std::abs(r.margin) <= 1e-12);
      CHECK(r.pass);
    }
  CHECK(found);
}

TEST_CASE("a tolerance below the noise floor makes equality checks fail") {
  SuiteOptions opts;
  opts.tol.equality = 1e-20;
  SuiteReport report = run_suite({{"grid:2", ModelParams(0.5, 2)}}, {"duality"}, opts);
  CHECK(report.n_fail > 0);
}

TEST_CASE("the default corpus has the documented size") {
  CHECK(default_corpus().size() == 7 * 2 * 4);
}
