#pragma once

#include <cstdint>
#include <vector>

#include "rcgap/graph.hpp"

namespace rcgap {

/// Potts coloring V -> [q] encoded as a base-q integer; the digit of vertex i
/// (vertex 0 least significant) is sigma(i) - 1.
using SpinConfig = std::uint64_t;

/// Random-cluster / Potts parameters. p in (0,1), integer q >= 1,
/// beta = -ln(1-p) >= 0.
struct ModelParams {
  double p = 0.5;
  int q = 2;

  ModelParams() = default;
  ModelParams(double p_, int q_);

  double beta() const;
  double ratio() const { return p / (1.0 - p); }
};

/// Nonnegative weights over an indexed state space, normalized to sum 1.
struct DistributionVector {
  std::vector<double> w;
  double total = 0.0;  // normalization constant before dividing out

  std::size_t size() const { return w.size(); }
  double operator[](std::size_t i) const { return w[i]; }
};

/// Unnormalized RC weight (p/(1-p))^|A| q^c(A).
double rc_weight(const Graph& g, const ModelParams& params, EdgeSubset a);

/// Z(G,p,q) by full enumeration over 2^m subsets.
double partition_function(const Graph& g, const ModelParams& params,
                          std::size_t cap_states = 4096);

/// Normalized RC measure over all 2^m subsets.
DistributionVector rc_distribution(const Graph& g, const ModelParams& params,
                                   std::size_t cap_states = 4096);

/// Normalized Potts measure over q^n colorings,
/// pi(sigma) ~ exp(beta * #monochromatic edges). Self-loops always count;
/// parallel edges count once per edge.
DistributionVector potts_distribution(const Graph& g, const ModelParams& params,
                                      std::size_t cap_joint = 300000);

/// Normalized FKES measure over q^n * 2^m joint states,
/// nu(sigma,A) ~ (p/(1-p))^|A| 1(A <= E(sigma)); flat index = code*2^m + bits.
DistributionVector fkes_distribution(const Graph& g, const ModelParams& params,
                                     std::size_t cap_joint = 300000);

/// E(sigma): bitmask of edges whose endpoints carry equal spins.
/// Self-loops are always included.
EdgeSubset monochromatic_edges(const Graph& g, const ModelParams& params, SpinConfig sigma);

/// Spin of vertex v under code sigma.
int spin_of(SpinConfig sigma, int v, int q);

/// p* with p*/(1-p*) = q(1-p)/p, i.e. p* = q(1-p)/(p + q(1-p)).
double dual_parameter(const ModelParams& params);

/// Self-dual point sqrt(q)/(1+sqrt(q)).
double self_dual(int q);

/// beta_c(q) = ln(1+sqrt(q)).
double critical_beta(int q);

}  // namespace rcgap
