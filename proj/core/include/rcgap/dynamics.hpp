#pragma once

#include <cstddef>
#include <vector>

#include "rcgap/graph.hpp"
#include "rcgap/linalg.hpp"
#include "rcgap/measures.hpp"

namespace rcgap {

enum class MatrixKind { stochastic, general };

/// A square or rectangular linear operator over indexed state spaces together
/// with the reference weights of its row and column spaces (mu on RC space,
/// nu on the joint space). For square operators row and column weights agree.
struct WeightedMatrix {
  Matrix mat;
  std::vector<double> row_weights;
  std::vector<double> col_weights;
  MatrixKind kind = MatrixKind::stochastic;
};

/// Exact-mode caps for dense enumeration.
struct Caps {
  std::size_t rc_states = 4096;      // 2^m
  std::size_t joint_states = 300000; // q^n * 2^m
};

/// Joint index (sigma, A): flat = code * 2^m + bits.
inline std::size_t joint_index(SpinConfig code, EdgeSubset bits, int m) {
  return (static_cast<std::size_t>(code) << m) | bits;
}

std::size_t rc_state_count(const Graph& g, const Caps& caps);      // throws CapError
std::size_t joint_state_count(const Graph& g, const ModelParams& p, const Caps& caps);
std::size_t potts_state_count(const Graph& g, const ModelParams& p, const Caps& caps);

/// Swendsen-Wang transition matrix on 2^m RC states, built procedurally:
/// color components, keep monochromatic edges with probability p.
WeightedMatrix sw_matrix_direct(const Graph& g, const ModelParams& params,
                                const Caps& caps = {});

/// Lazy heat-bath dynamics (prefactor 1/(2|E|), connectivity in A\e).
WeightedMatrix hb_matrix(const Graph& g, const ModelParams& params, const Caps& caps = {});

/// Non-lazy single-bond dynamics (prefactor 1/|E|, connectivity in A).
WeightedMatrix sb_matrix(const Graph& g, const ModelParams& params, const Caps& caps = {});

/// (I+P)/2.
WeightedMatrix lazy(const WeightedMatrix& pm);

/// M(B,(sigma,A)) = q^{-c(B)} 1(A=B) 1(B <= E(sigma)), sparse 2^m x q^n*2^m.
SparseMatrix block_M_sparse(const Graph& g, const ModelParams& params, const Caps& caps = {});

/// M*((sigma,A),B) = 1(A=B), sparse q^n*2^m x 2^m.
SparseMatrix block_M_star_sparse(const Graph& g, const ModelParams& params,
                                 const Caps& caps = {});

/// T_e on the joint space: spins never change; monochromatic e flips its bit
/// to 1 with p and 0 with 1-p, non-monochromatic e clears it with 1.
SparseMatrix edge_operator_sparse(const Graph& g, const ModelParams& params, int e,
                                  const Caps& caps = {});

/// (1/m) sum_e T_e.
SparseMatrix averaged_edge_operator_sparse(const Graph& g, const ModelParams& params,
                                           const Caps& caps = {});

/// M* M on the joint space (sparse).
SparseMatrix m_star_m_sparse(const Graph& g, const ModelParams& params, const Caps& caps = {});

/// Dense exposures of the joint-space blocks (small spaces only).
WeightedMatrix block_M(const Graph& g, const ModelParams& params, const Caps& caps = {});
WeightedMatrix block_M_star(const Graph& g, const ModelParams& params, const Caps& caps = {});
WeightedMatrix edge_operator(const Graph& g, const ModelParams& params, int e,
                             const Caps& caps = {});

/// P_SW = M (prod_e T_e) M*, computed through the joint space.
/// `edge_order` optionally permutes the multiplication order.
WeightedMatrix sw_matrix_operator(const Graph& g, const ModelParams& params,
                                  const Caps& caps = {},
                                  const std::vector<int>* edge_order = nullptr);

/// P_SB = M ((1/m) sum_e T_e) M*.
WeightedMatrix sb_matrix_operator(const Graph& g, const ModelParams& params,
                                  const Caps& caps = {});

/// M T^k M* - S_mu with T the averaged edge operator (general kind).
/// k = 1 equals P_SB - S_mu.
WeightedMatrix composite_RTR(const Graph& g, const ModelParams& params, int k,
                             const Caps& caps = {});

/// M (prod_e T_e) M* - S_mu = P_SW - S_mu (general kind).
WeightedMatrix composite_RTR_full(const Graph& g, const ModelParams& params,
                                  const Caps& caps = {});

/// prod_e T_e^{alpha_e} over the given exponent vector (sparse product).
SparseMatrix edge_operator_power_product(const Graph& g, const ModelParams& params,
                                         const std::vector<int>& alpha,
                                         const Caps& caps = {});

/// Swendsen-Wang on the Potts side: q^n x q^n, built as the two-step
/// composition through the RC coordinate. Stationary weights are pi.
WeightedMatrix sw_potts_matrix(const Graph& g, const ModelParams& params,
                               const Caps& caps = {});

/// S_w: every row equals the (normalized) weight vector w.
WeightedMatrix rank_one_chain(const std::vector<double>& w);

/// Max |w(x) P(x,y) - w(y) P(y,x)| over all pairs (detailed balance residual).
double detailed_balance_residual(const WeightedMatrix& pm);
double detailed_balance_residual(const SparseMatrix& k, const std::vector<double>& w);

}  // namespace rcgap
