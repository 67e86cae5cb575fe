#include "rcgap/measures.hpp"

#include <bit>
#include <cmath>

namespace rcgap {

ModelParams::ModelParams(double p_, int q_) : p(p_), q(q_) {
  if (!(p > 0.0 && p < 1.0)) throw Error("ModelParams: p must lie in (0,1)");
  if (q < 1) throw Error("ModelParams: q must be a positive integer");
}

double ModelParams::beta() const { return -std::log1p(-p); }

double rc_weight(const Graph& g, const ModelParams& params, EdgeSubset a) {
  int c = count_components(g, a);
  int k = std::popcount(a);
  return std::pow(params.ratio(), k) * std::pow(double(params.q), c);
}

namespace {

// Log-weights shifted by their maximum keep the exponentials finite even at
// extreme p; at moderate p the shift is exact in the same way.
std::vector<double> rc_log_weights(const Graph& g, const ModelParams& params) {
  const double log_ratio = std::log(params.p) - std::log1p(-params.p);
  const double log_q = std::log(double(params.q));
  const std::size_t states = std::size_t(1) << g.m();
  std::vector<double> lw(states);
  for (std::size_t a = 0; a < states; ++a)
    lw[a] = std::popcount(a) * log_ratio + count_components(g, a) * log_q;
  return lw;
}

DistributionVector normalize_log(std::vector<double> lw) {
  double mx = lw[0];
  for (double x : lw) mx = std::max(mx, x);
  DistributionVector d;
  d.w.resize(lw.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < lw.size(); ++i) {
    d.w[i] = std::exp(lw[i] - mx);
    sum += d.w[i];
  }
  for (double& x : d.w) x /= sum;
  d.total = sum * std::exp(mx);
  return d;
}

void check_rc_cap(const Graph& g, std::size_t cap) {
  if (g.m() >= 63 || (std::size_t(1) << g.m()) > cap)
    throw CapError("RC state space 2^" + std::to_string(g.m()) +
                   " exceeds cap (see --cap-states)");
}

}  // namespace

double partition_function(const Graph& g, const ModelParams& params, std::size_t cap_states) {
  check_rc_cap(g, cap_states);
  const std::size_t states = std::size_t(1) << g.m();
  double z = 0.0;
  for (std::size_t a = 0; a < states; ++a) z += rc_weight(g, params, a);
  return z;
}

DistributionVector rc_distribution(const Graph& g, const ModelParams& params,
                                   std::size_t cap_states) {
  check_rc_cap(g, cap_states);
  return normalize_log(rc_log_weights(g, params));
}

int spin_of(SpinConfig sigma, int v, int q) {
  for (int i = 0; i < v; ++i) sigma /= q;
  return static_cast<int>(sigma % q) + 1;
}

EdgeSubset monochromatic_edges(const Graph& g, const ModelParams& params, SpinConfig sigma) {
  std::vector<int> spin(g.n);
  SpinConfig code = sigma;
  for (int v = 0; v < g.n; ++v) {
    spin[v] = static_cast<int>(code % params.q) + 1;
    code /= params.q;
  }
  EdgeSubset mask = 0;
  for (int e = 0; e < g.m(); ++e)
    if (spin[g.edges[e].u] == spin[g.edges[e].v]) mask |= EdgeSubset(1) << e;
  return mask;
}

namespace {

std::size_t pow_sz(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

void check_joint_cap(const Graph& g, const ModelParams& params, std::size_t cap) {
  double sz = std::pow(double(params.q), g.n) * std::ldexp(1.0, g.m());
  if (sz > double(cap))
    throw CapError("joint state space q^n*2^m = " + std::to_string(sz) +
                   " exceeds cap (see --cap-joint)");
}

}  // namespace

DistributionVector potts_distribution(const Graph& g, const ModelParams& params,
                                      std::size_t cap_joint) {
  double psz = std::pow(double(params.q), g.n);
  if (psz > double(cap_joint)) throw CapError("Potts state space q^n exceeds cap");
  const std::size_t states = pow_sz(params.q, g.n);
  const double beta = params.beta();
  std::vector<double> lw(states);
  for (std::size_t s = 0; s < states; ++s)
    lw[s] = beta * std::popcount(monochromatic_edges(g, params, s));
  return normalize_log(std::move(lw));
}

DistributionVector fkes_distribution(const Graph& g, const ModelParams& params,
                                     std::size_t cap_joint) {
  check_joint_cap(g, params, cap_joint);
  const std::size_t potts_states = pow_sz(params.q, g.n);
  const std::size_t rc_states = std::size_t(1) << g.m();
  const double ratio = params.ratio();
  DistributionVector d;
  d.w.assign(potts_states * rc_states, 0.0);
  double sum = 0.0;
  for (std::size_t s = 0; s < potts_states; ++s) {
    EdgeSubset mono = monochromatic_edges(g, params, s);
    // A ranges over subsets of E(sigma)
    EdgeSubset a = mono;
    while (true) {
      double w = std::pow(ratio, std::popcount(a));
      d.w[(s << g.m()) | a] = w;
      sum += w;
      if (a == 0) break;
      a = (a - 1) & mono;
    }
  }
  for (double& x : d.w) x /= sum;
  d.total = sum;
  return d;
}

double dual_parameter(const ModelParams& params) {
  return params.q * (1.0 - params.p) / (params.p + params.q * (1.0 - params.p));
}

double self_dual(int q) {
  double s = std::sqrt(double(q));
  return s / (1.0 + s);
}

double critical_beta(int q) { return std::log(1.0 + std::sqrt(double(q))); }

}  // namespace rcgap
