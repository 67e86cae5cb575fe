#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "rcgap/dynamics.hpp"
#include "rcgap/sampler.hpp"

using namespace rcgap;

TEST_CASE("Rng is deterministic and below() is in range") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.uniform() == b.uniform());
    std::uint64_t x = a.below(7);
    CHECK(x < 7);
    CHECK(x == b.below(7));
  }
  CHECK_THROWS_AS(a.below(0), Error);
}

TEST_CASE("dynamics names round-trip") {
  for (Dynamics d : {Dynamics::sw, Dynamics::sw_potts, Dynamics::hb, Dynamics::sb})
    CHECK(dynamics_from_string(to_string(d)) == d);
  CHECK_THROWS_AS(dynamics_from_string("bogus"), ParseError);
}

TEST_CASE("K2 single-bond empirical row from each start state") {
  Graph g = generate("edge", 1);
  ModelParams params(0.5, 2);
  // exact rows: from {}: (3/4, 1/4); from {e}: (1/2, 1/2)
  std::vector<double> from0 = empirical_row(g, params, Dynamics::sb, 0, 100000, 7);
  CHECK(total_variation(from0, std::vector<double>{0.75, 0.25}) < 0.01);
  std::vector<double> from1 = empirical_row(g, params, Dynamics::sb, 1, 100000, 7);
  CHECK(total_variation(from1, std::vector<double>{0.5, 0.5}) < 0.01);
}

TEST_CASE("K2 heat-bath empirical row matches (5/6, 1/6)") {
  Graph g = generate("edge", 1);
  ModelParams params(0.5, 2);
  std::vector<double> row = empirical_row(g, params, Dynamics::hb, 0, 100000, 3);
  CHECK(total_variation(row, std::vector<double>{5.0 / 6.0, 1.0 / 6.0}) < 0.01);
}

TEST_CASE("one-step empirical rows match exact matrix rows") {
  for (const char* spec : {"edge", "path:3", "grid:2"}) {
    Graph g = graph_from_spec(spec);
    ModelParams params(0.5, 2);
    struct Case {
      Dynamics d;
      WeightedMatrix pm;
    };
    std::vector<Case> cases;
    cases.push_back({Dynamics::sw, sw_matrix_direct(g, params)});
    cases.push_back({Dynamics::hb, hb_matrix(g, params)});
    cases.push_back({Dynamics::sb, sb_matrix(g, params)});
    for (const Case& c : cases) {
      std::vector<double> emp = empirical_row(g, params, c.d, 0, 30000, 17);
      std::vector<double> exact(c.pm.mat.cols);
      for (int j = 0; j < c.pm.mat.cols; ++j) exact[j] = c.pm.mat(0, j);
      CAPTURE(spec);
      CAPTURE(to_string(c.d));
      CHECK(total_variation(emp, exact) < 0.02);
    }
  }
}

TEST_CASE("Potts-side SW empirical row matches the exact chain") {
  Graph g = generate("edge", 1);
  ModelParams params(0.5, 2);
  WeightedMatrix pm = sw_potts_matrix(g, params);
  std::vector<double> emp = empirical_row(g, params, Dynamics::sw_potts, 0, 50000, 23);
  std::vector<double> exact(pm.mat.cols);
  for (int j = 0; j < pm.mat.cols; ++j) exact[j] = pm.mat(0, j);
  CHECK(total_variation(emp, exact) < 0.02);
}

TEST_CASE("occupation histogram converges to the RC measure") {
  Graph g = generate("grid", 2);
  ModelParams params(0.5, 2);
  std::vector<double> hist = occupation_histogram(g, params, Dynamics::sw, 200000, 11);
  std::vector<double> mu = rc_distribution(g, params).w;
  CHECK(total_variation(hist, mu) < 0.03);
}

TEST_CASE("run_chain record counts and CSV determinism") {
  Graph g = generate("grid", 2);
  RunSpec spec;
  spec.graph_spec = "grid:2";
  spec.params = ModelParams(0.5, 2);
  spec.dynamics = Dynamics::sw;
  spec.steps = 1;
  spec.seed = 5;
  ChainTrace one = run_chain(g, spec);
  CHECK(one.records.size() == 1);

  spec.steps = 500;
  spec.burnin = 10;
  spec.thin = 5;
  ChainTrace t1 = run_chain(g, spec);
  ChainTrace t2 = run_chain(g, spec);
  CHECK(t1.records.size() == 100);
  std::string csv1 = chain_trace_csv(t1, spec);
  std::string csv2 = chain_trace_csv(t2, spec);
  CHECK(csv1 == csv2);
  CHECK(csv1.find("# generator=mt19937_64 version=1 seed=5") == 0);
  CHECK(csv1.find("step,edges,components,largest") != std::string::npos);
}

TEST_CASE("Potts-side traces carry the magnetization column") {
  Graph g = generate("grid", 2);
  RunSpec spec;
  spec.graph_spec = "grid:2";
  spec.params = ModelParams(0.5, 2);
  spec.dynamics = Dynamics::sw_potts;
  spec.steps = 50;
  spec.seed = 1;
  ChainTrace t = run_chain(g, spec);
  CHECK(t.potts_side);
  for (const auto& r : t.records) {
    CHECK(r.magnetization >= 0.5 - 1e-12);  // q=2: majority fraction >= 1/2
    CHECK(r.magnetization <= 1.0 + 1e-12);
  }
  std::string csv = chain_trace_csv(t, spec);
  CHECK(csv.find("magnetization") != std::string::npos);
}

TEST_CASE("observables stay within combinatorial ranges") {
  Graph g = generate("grid", 3);
  RunSpec spec;
  spec.graph_spec = "grid:3";
  spec.params = ModelParams(0.6, 2);
  spec.dynamics = Dynamics::sb;
  spec.steps = 2000;
  spec.seed = 9;
  for (const auto& r : run_chain(g, spec).records) {
    CHECK(r.edges >= 0);
    CHECK(r.edges <= g.m());
    CHECK(r.components >= 1);
    CHECK(r.components <= g.n);
    CHECK(r.largest >= 1);
    CHECK(r.largest <= g.n);
    CHECK(r.components + r.largest <= g.n + 1);
  }
}

TEST_CASE("autocorrelation of an iid series is about 1/2") {
  Rng rng(123);
  std::vector<double> xs(100000);
  for (double& x : xs) x = rng.uniform();
  AutocorrResult r = autocorrelation(xs);
  CHECK(r.tau_int == doctest::Approx(0.5).epsilon(0.2));
  CHECK_FALSE(r.zero_variance);
}

TEST_CASE("autocorrelation of an AR(1) process matches the closed form") {
  // x_t = phi x_{t-1} + noise: tau_int = (1+phi)/(2(1-phi)) = 9.5 at phi=0.9
  Rng rng(321);
  const double phi = 0.9;
  std::vector<double> xs(1000000);
  double x = 0.0;
  for (double& out : xs) {
    double u1 = rng.uniform(), u2 = rng.uniform();
    double gauss = std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(6.283185307179586 * u2);
    x = phi * x + gauss;
    out = x;
  }
  AutocorrResult r = autocorrelation(xs);
  CHECK(r.tau_int == doctest::Approx(9.5).epsilon(0.11));
  CHECK(r.window >= int(5.0 * r.tau_int) - 1);
}

TEST_CASE("degenerate autocorrelation inputs") {
  std::vector<double> flat(500, 3.0);
  AutocorrResult r = autocorrelation(flat);
  CHECK(r.zero_variance);
  CHECK(r.tau_int == 0.5);

  std::vector<double> tiny(99, 0.0);
  CHECK_THROWS_AS(autocorrelation(tiny), Error);
}

TEST_CASE("total variation basics") {
  std::vector<double> a = {0.5, 0.5}, b = {1.0, 0.0};
  CHECK(total_variation(a, a) == 0.0);
  CHECK(total_variation(a, b) == doctest::Approx(0.5).epsilon(1e-15));
  std::vector<double> c = {1.0};
  CHECK_THROWS_AS(total_variation(a, c), Error);
}
