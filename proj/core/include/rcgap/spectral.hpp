#pragma once

#include <vector>

#include "rcgap/dynamics.hpp"

namespace rcgap {

struct SpectralReport {
  double gap = 0.0;             // 1 - second_modulus
  double second_modulus = 0.0;  // max |xi| over eigenvalues xi != 1
  std::vector<double> eigenvalues;  // ascending; extremes only for large chains
  double negative_tail = 0.0;   // smallest eigenvalue
  bool full_spectrum = false;
};

struct SpectralOptions {
  int dense_threshold = 512;   // Jacobi below, Lanczos above
  double reversibility_tol = 1e-10;
  double ergodicity_tol = 1e-12;
};

/// Spectral gap of a reversible ergodic stochastic chain via symmetrization
/// S(x,y) = sqrt(w_x/w_y) P(x,y). Throws Error on non-reversible input or if
/// eigenvalue 1 is not simple (disconnected chain).
SpectralReport spectral_gap(const WeightedMatrix& pm, const SpectralOptions& opts = {});

/// Weighted operator norm ||K||_w of a self-adjoint operator in L2(w):
/// largest absolute eigenvalue of the symmetrized matrix. States of zero
/// weight are projected out. Throws Error on non-self-adjoint input.
double weighted_norm(const WeightedMatrix& km, const SpectralOptions& opts = {});
double weighted_norm(const SparseMatrix& k, const std::vector<double>& w,
                     const SpectralOptions& opts = {});

/// Extreme eigenvalues of a self-adjoint operator in L2(w) (zero-weight
/// states projected out).
ExtremeEigs weighted_extreme_eigenvalues(const SparseMatrix& k, const std::vector<double>& w,
                                         const SpectralOptions& opts = {});

/// Exact mixing time: smallest t with max_x sum_y |P^t(x,y) - pi(y)| <= 1/e.
/// `halved` switches to the total-variation convention (factor 1/2 on the sum).
int mixing_time_exact(const WeightedMatrix& pm, bool halved = false,
                      std::size_t cap_states = 4096);

struct MixingBounds {
  double lower = 0.0;          // gap^{-1} - 1
  double upper_general = 0.0;  // ln(2e/pi_min) / gap
  double upper_rc = 0.0;       // (2 + m ln(1/(p(1-p))) + n ln q) / gap
};

MixingBounds gap_mixing_bounds(const Graph& g, const ModelParams& params, double gap,
                               double pi_min);

}  // namespace rcgap
