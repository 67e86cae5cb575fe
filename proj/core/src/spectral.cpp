#include "rcgap/spectral.hpp"

#include <cmath>

namespace rcgap {

namespace {

constexpr double kE = 2.718281828459045235360287;

void check_square(const Matrix& m) {
  if (m.rows != m.cols) throw Error("spectral: square matrix required");
}

Matrix symmetrize_dense(const Matrix& k, const std::vector<double>& sqrt_w,
                        const std::vector<int>& support) {
  const int ns = static_cast<int>(support.size());
  Matrix s(ns, ns);
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < ns; ++j)
      s(i, j) = sqrt_w[support[i]] / sqrt_w[support[j]] * k(support[i], support[j]);
  // force exact symmetry (detailed balance holds to rounding only)
  for (int i = 0; i < ns; ++i)
    for (int j = i + 1; j < ns; ++j) {
      double avg = 0.5 * (s(i, j) + s(j, i));
      s(i, j) = avg;
      s(j, i) = avg;
    }
  return s;
}

std::vector<int> support_of(const std::vector<double>& w) {
  std::vector<int> s;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] > 0.0) s.push_back(static_cast<int>(i));
  return s;
}

}  // namespace

SpectralReport spectral_gap(const WeightedMatrix& pm, const SpectralOptions& opts) {
  check_square(pm.mat);
  if (pm.kind != MatrixKind::stochastic)
    throw Error("spectral_gap: stochastic chain required");
  const int n = pm.mat.rows;
  if (n == 0) throw Error("spectral_gap: empty chain");
  for (double w : pm.row_weights)
    if (!(w > 0.0)) throw Error("spectral_gap: weights must be positive");
  if (detailed_balance_residual(pm) > opts.reversibility_tol)
    throw Error("spectral_gap: chain is not reversible w.r.t. its weights");

  SpectralReport rep;
  if (n == 1) {
    rep.gap = 1.0;
    rep.second_modulus = 0.0;
    rep.eigenvalues = {1.0};
    rep.negative_tail = 1.0;
    rep.full_spectrum = true;
    return rep;
  }

  std::vector<double> sqrt_w(n);
  for (int i = 0; i < n; ++i) sqrt_w[i] = std::sqrt(pm.row_weights[i]);

  if (n <= opts.dense_threshold) {
    std::vector<int> support(n);
    for (int i = 0; i < n; ++i) support[i] = i;
    Matrix s = symmetrize_dense(pm.mat, sqrt_w, support);
    std::vector<double> eig = jacobi_eigenvalues(std::move(s));
    if (std::abs(eig.back() - 1.0) > 1e-8)
      throw Error("spectral_gap: top eigenvalue is not 1 (not stochastic?)");
    if (eig[n - 2] >= 1.0 - opts.ergodicity_tol)
      throw Error("spectral_gap: eigenvalue 1 is not simple (disconnected chain)");
    rep.second_modulus = std::max(std::abs(eig[n - 2]), std::abs(eig.front()));
    rep.gap = 1.0 - rep.second_modulus;
    rep.negative_tail = eig.front();
    rep.eigenvalues = std::move(eig);
    rep.full_spectrum = true;
    return rep;
  }

  // Large chain: Lanczos on the symmetrized operator with the exact top
  // eigenvector sqrt(w) deflated.
  double z = 0.0;
  for (int i = 0; i < n; ++i) z += pm.row_weights[i];
  std::vector<double> v1(n);
  for (int i = 0; i < n; ++i) v1[i] = sqrt_w[i] / std::sqrt(z);
  std::vector<double> xs(n);
  MatVec apply = [&](const double* x, double* y) {
    for (int j = 0; j < n; ++j) xs[j] = x[j] / sqrt_w[j];
    for (int i = 0; i < n; ++i) {
      const double* row = &pm.mat.a[static_cast<std::size_t>(i) * n];
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += row[j] * xs[j];
      y[i] = sqrt_w[i] * acc;
    }
  };
  ExtremeEigs ex = lanczos_extreme_eigenvalues(apply, n, {v1});
  rep.second_modulus = std::max(std::abs(ex.max), std::abs(ex.min));
  if (rep.second_modulus >= 1.0 - opts.ergodicity_tol)
    throw Error("spectral_gap: eigenvalue 1 is not simple (disconnected chain)");
  rep.gap = 1.0 - rep.second_modulus;
  rep.negative_tail = ex.min;
  rep.eigenvalues = {ex.min, ex.max, 1.0};
  rep.full_spectrum = false;
  return rep;
}

double weighted_norm(const WeightedMatrix& km, const SpectralOptions& opts) {
  check_square(km.mat);
  const std::vector<double>& w = km.row_weights;
  std::vector<int> support = support_of(w);
  const int ns = static_cast<int>(support.size());
  if (ns == 0) throw Error("weighted_norm: all weights are zero");

  double res = 0.0;
  for (int i : support)
    for (int j : support)
      res = std::max(res, std::abs(w[i] * km.mat(i, j) - w[j] * km.mat(j, i)));
  if (res > opts.reversibility_tol)
    throw Error("weighted_norm: operator is not self-adjoint in L2(w)");

  std::vector<double> sqrt_w(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) sqrt_w[i] = std::sqrt(std::max(w[i], 0.0));

  if (ns <= opts.dense_threshold) {
    Matrix s = symmetrize_dense(km.mat, sqrt_w, support);
    std::vector<double> eig = jacobi_eigenvalues(std::move(s));
    return std::max(std::abs(eig.front()), std::abs(eig.back()));
  }
  std::vector<double> xs(ns);
  MatVec apply = [&](const double* x, double* y) {
    for (int j = 0; j < ns; ++j) xs[j] = x[j] / sqrt_w[support[j]];
    for (int i = 0; i < ns; ++i) {
      int gi = support[i];
      double acc = 0.0;
      for (int j = 0; j < ns; ++j) acc += km.mat(gi, support[j]) * xs[j];
      y[i] = sqrt_w[gi] * acc;
    }
  };
  ExtremeEigs ex = lanczos_extreme_eigenvalues(apply, ns);
  return std::max(std::abs(ex.min), std::abs(ex.max));
}

ExtremeEigs weighted_extreme_eigenvalues(const SparseMatrix& k, const std::vector<double>& w,
                                         const SpectralOptions& opts) {
  if (k.rows != k.cols) throw Error("weighted_extreme_eigenvalues: square operator required");
  if (detailed_balance_residual(k, w) > opts.reversibility_tol)
    throw Error("weighted_extreme_eigenvalues: operator is not self-adjoint in L2(w)");

  std::vector<int> support = support_of(w);
  const int ns = static_cast<int>(support.size());
  if (ns == 0) throw Error("weighted_extreme_eigenvalues: all weights are zero");
  std::vector<int> local(w.size(), -1);
  for (int i = 0; i < ns; ++i) local[support[i]] = i;
  std::vector<double> sqrt_w(ns);
  for (int i = 0; i < ns; ++i) sqrt_w[i] = std::sqrt(w[support[i]]);

  if (ns <= opts.dense_threshold) {
    Matrix s(ns, ns);
    for (int i = 0; i < ns; ++i)
      for (const auto& e : k.row[support[i]]) {
        int j = local[e.col];
        if (j >= 0) s(i, j) = sqrt_w[i] / sqrt_w[j] * e.v;
      }
    for (int i = 0; i < ns; ++i)
      for (int j = i + 1; j < ns; ++j) {
        double avg = 0.5 * (s(i, j) + s(j, i));
        s(i, j) = avg;
        s(j, i) = avg;
      }
    std::vector<double> eig = jacobi_eigenvalues(std::move(s));
    return {eig.front(), eig.back()};
  }
  MatVec apply = [&](const double* x, double* y) {
    for (int i = 0; i < ns; ++i) {
      double acc = 0.0;
      for (const auto& e : k.row[support[i]]) {
        int j = local[e.col];
        if (j >= 0) acc += e.v * x[j] / sqrt_w[j];
      }
      y[i] = sqrt_w[i] * acc;
    }
  };
  return lanczos_extreme_eigenvalues(apply, ns);
}

double weighted_norm(const SparseMatrix& k, const std::vector<double>& w,
                     const SpectralOptions& opts) {
  ExtremeEigs ex = weighted_extreme_eigenvalues(k, w, opts);
  return std::max(std::abs(ex.min), std::abs(ex.max));
}

int mixing_time_exact(const WeightedMatrix& pm, bool halved, std::size_t cap_states) {
  check_square(pm.mat);
  const int n = pm.mat.rows;
  if (static_cast<std::size_t>(n) > cap_states)
    throw CapError("mixing_time_exact: state space exceeds cap");
  const std::vector<double>& pi = pm.row_weights;
  const double factor = halved ? 0.5 : 1.0;
  Matrix d = pm.mat;
  const long max_t = 5'000'000;
  for (long t = 1; t <= max_t; ++t) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      double dist = 0.0;
      for (int j = 0; j < n; ++j) dist += std::abs(d(i, j) - pi[j]);
      worst = std::max(worst, factor * dist);
    }
    if (worst <= 1.0 / kE) return static_cast<int>(t);
    d = matmul(d, pm.mat);
  }
  throw Error("mixing_time_exact: did not mix within the iteration budget");
}

MixingBounds gap_mixing_bounds(const Graph& g, const ModelParams& params, double gap,
                               double pi_min) {
  if (!(gap > 0.0 && gap <= 1.0)) throw Error("gap_mixing_bounds: gap must be in (0,1]");
  MixingBounds b;
  b.lower = 1.0 / gap - 1.0;
  b.upper_general = std::log(2.0 * kE / pi_min) / gap;
  b.upper_rc = (2.0 + g.m() * std::log(1.0 / (params.p * (1.0 - params.p))) +
                g.n * std::log(double(params.q))) /
               gap;
  return b;
}

}  // namespace rcgap
