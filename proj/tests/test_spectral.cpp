#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rcgap/spectral.hpp"

using namespace rcgap;

namespace {

// random reversible chain: Metropolis over random weights on a random graph
WeightedMatrix random_reversible_chain(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto unif = [&] { return double(rng() >> 11) * 0x1.0p-53; };
  std::vector<double> w(n);
  double tot = 0.0;
  for (double& x : w) {
    x = 0.1 + unif();
    tot += x;
  }
  for (double& x : w) x /= tot;

  WeightedMatrix pm;
  pm.mat = Matrix(n, n);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      double prop = 1.0 / n;
      double a = prop * std::min(1.0, w[j] / w[i]);
      pm.mat(i, j) = a;
      acc += a;
    }
    pm.mat(i, i) = 1.0 - acc;
  }
  pm.row_weights = w;
  pm.col_weights = w;
  pm.kind = MatrixKind::stochastic;
  return pm;
}

}  // namespace

TEST_CASE("K2 spectral gaps match the hand-derived values") {
  Graph g = generate("edge", 1);
  ModelParams params(0.5, 2);
  CHECK(spectral_gap(sw_matrix_direct(g, params)).gap == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(spectral_gap(sb_matrix(g, params)).gap == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(spectral_gap(hb_matrix(g, params)).gap == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(spectral_gap(lazy(sb_matrix(g, params))).gap == doctest::Approx(0.375).epsilon(1e-12));
}

TEST_CASE("rank-one projection chain has gap 1") {
  std::vector<double> w = {0.5, 0.3, 0.2};
  SpectralReport rep = spectral_gap(rank_one_chain(w));
  CHECK(rep.gap == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.second_modulus <= 1e-12);
}

TEST_CASE("dense and iterative eigensolvers agree") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    WeightedMatrix pm = random_reversible_chain(60, seed);
    SpectralOptions dense_opts;
    SpectralOptions iter_opts;
    iter_opts.dense_threshold = 1;  // force the Krylov path
    double g1 = spectral_gap(pm, dense_opts).gap;
    double g2 = spectral_gap(pm, iter_opts).gap;
    CHECK(std::abs(g1 - g2) <= 1e-9);
  }
}

TEST_CASE("gap of P is at most twice the gap of its lazy version") {
  for (const char* spec : {"path:3", "cycle:4", "grid:2"})
    for (double p : {0.3, 0.7}) {
      Graph g = graph_from_spec(spec);
      ModelParams params(p, 2);
      for (const WeightedMatrix& pm :
           {sw_matrix_direct(g, params), hb_matrix(g, params), sb_matrix(g, params)}) {
        double lam = spectral_gap(pm).gap;
        double lam_lazy = spectral_gap(lazy(pm)).gap;
        CAPTURE(spec);
        CHECK(lam <= 2.0 * lam_lazy + 1e-10);
      }
    }
}

TEST_CASE("weighted norm of a projection is 1") {
  Graph g = generate("path", 3);
  ModelParams params(0.5, 2);
  std::vector<double> nu = fkes_distribution(g, params).w;
  for (int e = 0; e < g.m(); ++e) {
    SparseMatrix te = edge_operator_sparse(g, params, e);
    CHECK(weighted_norm(te, nu) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("exact mixing times on K2") {
  Graph g = generate("edge", 1);
  ModelParams params(0.5, 2);
  // literal convention (sum without the 1/2)
  CHECK(mixing_time_exact(hb_matrix(g, params)) == 2);
  CHECK(mixing_time_exact(sw_matrix_direct(g, params)) == 1);
  // the TV convention can only be faster
  CHECK(mixing_time_exact(hb_matrix(g, params), true) <= 2);
}

TEST_CASE("mixing time sandwich against the gap") {
  for (const char* spec : {"edge", "path:3", "grid:2"})
    for (double p : {0.3, 0.5})
      for (int q : {2, 3}) {
        Graph g = graph_from_spec(spec);
        ModelParams params(p, q);
        DistributionVector mu = rc_distribution(g, params);
        double pi_min = 1.0;
        for (std::size_t a = 0; a < mu.size(); ++a) pi_min = std::min(pi_min, mu[a]);
        for (const WeightedMatrix& pm :
             {sw_matrix_direct(g, params), hb_matrix(g, params), sb_matrix(g, params)}) {
          int tau = mixing_time_exact(pm);
          double gap = spectral_gap(pm).gap;
          MixingBounds b = gap_mixing_bounds(g, params, gap, pi_min);
          CAPTURE(spec);
          CHECK(b.lower <= tau + 1e-9);
          CHECK(tau <= b.upper_general + 1e-9);
          CHECK(tau <= b.upper_rc + 1e-9);
          CHECK(b.upper_rc >= b.upper_general - 1e-9);
        }
      }
}

TEST_CASE("non-reversible and non-ergodic inputs are rejected") {
  WeightedMatrix bad;
  bad.mat = Matrix(2, 2);
  bad.mat(0, 0) = 0.2;
  bad.mat(0, 1) = 0.8;
  bad.mat(1, 0) = 0.3;
  bad.mat(1, 1) = 0.7;
  bad.row_weights = {0.5, 0.5};  // not the stationary weights
  bad.col_weights = bad.row_weights;
  CHECK_THROWS_AS(spectral_gap(bad), Error);

  WeightedMatrix frozen;
  frozen.mat = Matrix::identity(2);
  frozen.row_weights = {0.5, 0.5};
  frozen.col_weights = frozen.row_weights;
  CHECK_THROWS_AS(spectral_gap(frozen), Error);
}

TEST_CASE("mixing cap is enforced") {
  Graph g = generate("grid", 2);
  ModelParams params(0.5, 2);
  CHECK_THROWS_AS(mixing_time_exact(sw_matrix_direct(g, params), false, 8), CapError);
}
