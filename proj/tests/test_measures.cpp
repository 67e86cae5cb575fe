#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>

#include "rcgap/measures.hpp"

using namespace rcgap;

TEST_CASE("partition function on hand-computed instances") {
  // K2, p=1/2, q=2: Z = q^2 + (p/(1-p)) q = 4 + 2 = 6
  CHECK(partition_function(generate("edge", 1), ModelParams(0.5, 2)) == doctest::Approx(6.0).epsilon(1e-14));
  // path on 3 vertices, p=1/2, q=2: 8 + 4 + 4 + 2 = 18
  CHECK(partition_function(generate("path", 3), ModelParams(0.5, 2)) == doctest::Approx(18.0).epsilon(1e-14));
}

TEST_CASE("K2 stationary distribution is (2/3, 1/3)") {
  DistributionVector mu = rc_distribution(generate("edge", 1), ModelParams(0.5, 2));
  REQUIRE(mu.size() == 2);
  CHECK(mu[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(mu[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("q=1 reduces to independent bond percolation") {
  Graph g = generate("path", 3);
  ModelParams params(0.3, 1);
  DistributionVector mu = rc_distribution(g, params);
  for (std::size_t a = 0; a < mu.size(); ++a) {
    int k = std::popcount(a);
    double expect = std::pow(0.3, k) * std::pow(0.7, g.m() - k);
    CHECK(mu[a] == doctest::Approx(expect).epsilon(1e-13));
  }
}

TEST_CASE("normalization and positivity across parameters") {
  for (const char* spec : {"path:3", "cycle:3", "grid:2"})
    for (int q : {2, 3})
      for (double p : {0.2, 0.5, 0.8}) {
        DistributionVector mu = rc_distribution(graph_from_spec(spec), ModelParams(p, q));
        double sum = 0.0;
        for (std::size_t a = 0; a < mu.size(); ++a) {
          CHECK(mu[a] > 0.0);
          sum += mu[a];
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
      }
}

TEST_CASE("Potts distribution on K2 at beta = ln 2") {
  // p = 1 - e^{-beta} = 1/2; weights (2,1,1,2)/6
  Graph g = generate("edge", 1);
  ModelParams params(0.5, 2);
  CHECK(params.beta() == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  DistributionVector pi = potts_distribution(g, params);
  REQUIRE(pi.size() == 4);
  CHECK(pi[0] == doctest::Approx(2.0 / 6.0).epsilon(1e-13));
  CHECK(pi[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
  CHECK(pi[2] == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
  CHECK(pi[3] == doctest::Approx(2.0 / 6.0).epsilon(1e-13));
}

TEST_CASE("FKES marginals recover the Potts and RC measures") {
  Graph g = generate("grid", 2);
  ModelParams params(0.4, 2);
  DistributionVector nu = fkes_distribution(g, params);
  DistributionVector pi = potts_distribution(g, params);
  DistributionVector mu = rc_distribution(g, params);
  const std::size_t rc = std::size_t(1) << g.m();

  for (std::size_t s = 0; s < pi.size(); ++s) {
    double acc = 0.0;
    for (std::size_t a = 0; a < rc; ++a) acc += nu[(s << g.m()) | a];
    CHECK(acc == doctest::Approx(pi[s]).epsilon(1e-12));
  }
  for (std::size_t a = 0; a < rc; ++a) {
    double acc = 0.0;
    for (std::size_t s = 0; s < pi.size(); ++s) acc += nu[(s << g.m()) | a];
    CHECK(acc == doctest::Approx(mu[a]).epsilon(1e-12));
  }
}

TEST_CASE("FKES support is exactly A <= E(sigma)") {
  Graph g = generate("path", 3);
  ModelParams params(0.6, 3);
  DistributionVector nu = fkes_distribution(g, params);
  const std::size_t rc = std::size_t(1) << g.m();
  for (std::size_t x = 0; x < nu.size(); ++x) {
    SpinConfig sigma = x >> g.m();
    EdgeSubset a = x & (rc - 1);
    EdgeSubset mono = monochromatic_edges(g, params, sigma);
    if ((a & ~mono) != 0)
      CHECK(nu[x] == 0.0);
    else
      CHECK(nu[x] > 0.0);
  }
}

TEST_CASE("monochromatic edge masks") {
  Graph g = generate("path", 3);
  ModelParams params(0.5, 2);
  // code 0 = all spins 1 -> both edges monochromatic
  CHECK(monochromatic_edges(g, params, 0) == 0b11);
  // code 1 = spins (2,1,1) -> only edge {1,2}
  CHECK(monochromatic_edges(g, params, 1) == 0b10);
  CHECK(spin_of(1, 0, 2) == 2);
  CHECK(spin_of(1, 1, 2) == 1);
}

TEST_CASE("dual parameter identities") {
  CHECK(dual_parameter(ModelParams(0.5, 2)) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  for (int q : {2, 3, 4}) {
    double sd = self_dual(q);
    CHECK(dual_parameter(ModelParams(sd, q)) == doctest::Approx(sd).epsilon(1e-13));
    for (double p : {0.2, 0.5, 0.8}) {
      double pstar = dual_parameter(ModelParams(p, q));
      CHECK(dual_parameter(ModelParams(pstar, q)) == doctest::Approx(p).epsilon(1e-13));
    }
    // beta_c = ln(1+sqrt q) corresponds to p = self-dual
    ModelParams at_sd(sd, q);
    CHECK(at_sd.beta() == doctest::Approx(critical_beta(q)).epsilon(1e-13));
  }
}

TEST_CASE("dual measure equality holds termwise") {
  Graph g = generate("grid", 2);
  DualMap d = dual_graph(g);
  for (int q : {2, 3})
    for (double p : {0.3, 0.5, 0.7}) {
      ModelParams params(p, q);
      ModelParams dparams(dual_parameter(params), q);
      DistributionVector mu = rc_distribution(g, params);
      DistributionVector dmu = rc_distribution(d.dual, dparams);
      for (std::size_t a = 0; a < mu.size(); ++a)
        CHECK(mu[a] == doctest::Approx(dmu[dual_config(d, a)]).epsilon(1e-12));
    }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(ModelParams(0.0, 2), Error);
  CHECK_THROWS_AS(ModelParams(1.0, 2), Error);
  CHECK_THROWS_AS(ModelParams(0.5, 0), Error);
  CHECK_THROWS_AS(partition_function(generate("grid", 4), ModelParams(0.5, 2)), CapError);
}
