#include "rcgap/dynamics.hpp"

#include <bit>
#include <cmath>

namespace rcgap {

namespace {

constexpr std::size_t kDenseJointProductCap = 32'000'000;  // doubles in X = 2^m x J

std::size_t pow_sz(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

std::size_t rc_state_count(const Graph& g, const Caps& caps) {
  if (g.m() >= 63) throw CapError("RC state space exceeds 64-bit addressing");
  std::size_t s = std::size_t(1) << g.m();
  if (s > caps.rc_states)
    throw CapError("RC state space 2^" + std::to_string(g.m()) +
                   " exceeds cap (see --cap-states)");
  return s;
}

std::size_t potts_state_count(const Graph& g, const ModelParams& p, const Caps& caps) {
  double sz = std::pow(double(p.q), g.n);
  if (sz > double(caps.joint_states)) throw CapError("Potts state space q^n exceeds cap");
  return pow_sz(p.q, g.n);
}

std::size_t joint_state_count(const Graph& g, const ModelParams& p, const Caps& caps) {
  double sz = std::pow(double(p.q), g.n) * std::ldexp(1.0, g.m());
  if (sz > double(caps.joint_states))
    throw CapError("joint state space q^n*2^m exceeds cap (see --cap-joint)");
  return pow_sz(p.q, g.n) << g.m();
}

WeightedMatrix sw_matrix_direct(const Graph& g, const ModelParams& params, const Caps& caps) {
  const std::size_t states = rc_state_count(g, caps);
  const int m = g.m();
  const int q = params.q;
  const double p = params.p;

  std::vector<double> pow_p(m + 1), pow_1p(m + 1);
  pow_p[0] = pow_1p[0] = 1.0;
  for (int i = 1; i <= m; ++i) {
    pow_p[i] = pow_p[i - 1] * p;
    pow_1p[i] = pow_1p[i - 1] * (1.0 - p);
  }

  WeightedMatrix out;
  out.mat = Matrix(static_cast<int>(states), static_cast<int>(states));
  std::vector<double> mono_weight(states);  // per row: sum over colorings by E(sigma)
  std::vector<int> color;

  for (std::size_t a = 0; a < states; ++a) {
    int c = 0;
    std::vector<int> label = component_labels(g, a, &c);
    std::fill(mono_weight.begin(), mono_weight.end(), 0.0);
    const double w = std::pow(double(q), -c);
    color.assign(c, 0);
    // odometer over q^c component colorings
    while (true) {
      EdgeSubset mask = 0;
      for (int e = 0; e < m; ++e)
        if (color[label[g.edges[e].u]] == color[label[g.edges[e].v]])
          mask |= EdgeSubset(1) << e;
      mono_weight[mask] += w;
      int d = 0;
      while (d < c && ++color[d] == q) color[d++] = 0;
      if (d == c) break;
    }
    double* row = &out.mat.a[a * states];
    for (std::size_t mask = 0; mask < states; ++mask) {
      double mw = mono_weight[mask];
      if (mw == 0.0) continue;
      int mk = std::popcount(mask);
      // distribute over B <= mask with p^{|B|} (1-p)^{|mask|-|B|}
      EdgeSubset b = mask;
      while (true) {
        int bk = std::popcount(b);
        row[b] += mw * pow_p[bk] * pow_1p[mk - bk];
        if (b == 0) break;
        b = (b - 1) & mask;
      }
    }
  }
  out.row_weights = rc_distribution(g, params, caps.rc_states).w;
  out.col_weights = out.row_weights;
  out.kind = MatrixKind::stochastic;
  return out;
}

namespace {

WeightedMatrix single_edge_chain(const Graph& g, const ModelParams& params, const Caps& caps,
                                 bool heat_bath) {
  const std::size_t states = rc_state_count(g, caps);
  const int m = g.m();
  const double p = params.p;
  const double q = params.q;
  const double disc = heat_bath ? p / (p + q * (1.0 - p)) : p / q;
  const double pref = heat_bath ? 1.0 / (2.0 * m) : 1.0 / m;

  WeightedMatrix out;
  out.mat = Matrix(static_cast<int>(states), static_cast<int>(states));
  for (std::size_t a = 0; a < states; ++a) {
    double* row = &out.mat.a[a * states];
    if (heat_bath) row[a] += 0.5;  // lazy half
    for (int e = 0; e < m; ++e) {
      EdgeSubset bit = EdgeSubset(1) << e;
      EdgeSubset probe = heat_bath ? (a & ~bit) : EdgeSubset(a);
      bool conn = connected_in(g, probe, g.edges[e].u, g.edges[e].v);
      double alpha = conn ? p : disc;
      row[a | bit] += pref * alpha;
      row[a & ~bit] += pref * (1.0 - alpha);
    }
  }
  out.row_weights = rc_distribution(g, params, caps.rc_states).w;
  out.col_weights = out.row_weights;
  out.kind = MatrixKind::stochastic;
  return out;
}

}  // namespace

WeightedMatrix hb_matrix(const Graph& g, const ModelParams& params, const Caps& caps) {
  return single_edge_chain(g, params, caps, true);
}

WeightedMatrix sb_matrix(const Graph& g, const ModelParams& params, const Caps& caps) {
  return single_edge_chain(g, params, caps, false);
}

WeightedMatrix lazy(const WeightedMatrix& pm) {
  if (pm.kind != MatrixKind::stochastic) throw Error("lazy: stochastic input required");
  WeightedMatrix out = pm;
  for (int i = 0; i < out.mat.rows; ++i)
    for (int j = 0; j < out.mat.cols; ++j)
      out.mat(i, j) = 0.5 * ((i == j ? 1.0 : 0.0) + pm.mat(i, j));
  return out;
}

SparseMatrix block_M_sparse(const Graph& g, const ModelParams& params, const Caps& caps) {
  const std::size_t states = rc_state_count(g, caps);
  const std::size_t joint = joint_state_count(g, params, caps);
  const int m = g.m();
  const int q = params.q;

  SparseMatrix M(static_cast<int>(states), static_cast<int>(joint));
  std::vector<std::size_t> q_pow(g.n + 1);
  q_pow[0] = 1;
  for (int v = 0; v < g.n; ++v) q_pow[v + 1] = q_pow[v] * q;

  std::vector<int> color;
  for (std::size_t b = 0; b < states; ++b) {
    int c = 0;
    std::vector<int> label = component_labels(g, b, &c);
    double w = std::pow(double(q), -c);
    color.assign(c, 0);
    while (true) {
      std::size_t code = 0;
      for (int v = 0; v < g.n; ++v) code += std::size_t(color[label[v]]) * q_pow[v];
      M.add(static_cast<int>(b), static_cast<int>((code << m) | b), w);
      int d = 0;
      while (d < c && ++color[d] == q) color[d++] = 0;
      if (d == c) break;
    }
  }
  return M;
}

SparseMatrix block_M_star_sparse(const Graph& g, const ModelParams& params, const Caps& caps) {
  const std::size_t states = rc_state_count(g, caps);
  const std::size_t joint = joint_state_count(g, params, caps);
  const int m = g.m();
  SparseMatrix Ms(static_cast<int>(joint), static_cast<int>(states));
  const EdgeSubset mask = (m == 63) ? ~EdgeSubset(0) : ((EdgeSubset(1) << m) - 1);
  for (std::size_t x = 0; x < joint; ++x)
    Ms.row[x].push_back({static_cast<int>(x & mask), 1.0});
  return Ms;
}

SparseMatrix edge_operator_sparse(const Graph& g, const ModelParams& params, int e,
                                  const Caps& caps) {
  if (e < 0 || e >= g.m()) throw Error("edge_operator: edge index out of range");
  const std::size_t joint = joint_state_count(g, params, caps);
  const std::size_t potts = joint >> g.m();
  const int m = g.m();
  const int q = params.q;
  const double p = params.p;
  const EdgeSubset bit = EdgeSubset(1) << e;

  // spin equality of the endpoints, per color code
  const int u = g.edges[e].u, v = g.edges[e].v;
  std::vector<std::uint8_t> mono(potts);
  std::size_t div_u = pow_sz(q, u), div_v = pow_sz(q, v);
  for (std::size_t code = 0; code < potts; ++code)
    mono[code] = (u == v) || ((code / div_u) % q == (code / div_v) % q);

  SparseMatrix T(static_cast<int>(joint), static_cast<int>(joint));
  for (std::size_t x = 0; x < joint; ++x) {
    std::size_t code = x >> m;
    EdgeSubset bits = x & ((EdgeSubset(1) << m) - 1);
    if (mono[code]) {
      T.add(static_cast<int>(x), static_cast<int>((code << m) | (bits & ~bit)), 1.0 - p);
      T.add(static_cast<int>(x), static_cast<int>((code << m) | (bits | bit)), p);
    } else {
      T.add(static_cast<int>(x), static_cast<int>((code << m) | (bits & ~bit)), 1.0);
    }
  }
  return T;
}

SparseMatrix averaged_edge_operator_sparse(const Graph& g, const ModelParams& params,
                                           const Caps& caps) {
  const std::size_t joint = joint_state_count(g, params, caps);
  SparseMatrix T(static_cast<int>(joint), static_cast<int>(joint));
  const double inv_m = 1.0 / g.m();
  for (int e = 0; e < g.m(); ++e) {
    SparseMatrix Te = edge_operator_sparse(g, params, e, caps);
    for (int i = 0; i < Te.rows; ++i)
      for (const auto& ent : Te.row[i]) T.add(i, ent.col, inv_m * ent.v);
  }
  return T;
}

SparseMatrix m_star_m_sparse(const Graph& g, const ModelParams& params, const Caps& caps) {
  // (M*M)((sigma,A),(tau,B)) = M(A,(tau,B)); the row depends only on A.
  SparseMatrix M = block_M_sparse(g, params, caps);
  const std::size_t joint = static_cast<std::size_t>(M.cols);
  const int m = g.m();
  SparseMatrix out(static_cast<int>(joint), static_cast<int>(joint));
  for (std::size_t x = 0; x < joint; ++x) {
    std::size_t a = x & ((std::size_t(1) << m) - 1);
    out.row[x] = M.row[a];
  }
  return out;
}

namespace {

std::vector<double> fkes_weights_vec(const Graph& g, const ModelParams& params,
                                     const Caps& caps) {
  return fkes_distribution(g, params, caps.joint_states).w;
}

// Column-major joint workspace X (size J * S), X[x*S + B] = (M ...)(B, x).
struct JointProduct {
  const Graph& g;
  const ModelParams& params;
  const Caps& caps;
  std::size_t S, J;
  std::vector<double> X, Y;

  JointProduct(const Graph& g_, const ModelParams& p_, const Caps& c_)
      : g(g_), params(p_), caps(c_) {
    S = rc_state_count(g, caps);
    J = joint_state_count(g, params, caps);
    if (S * J > kDenseJointProductCap)
      throw CapError("joint-space product workspace exceeds cap (see --cap-joint)");
    X.assign(S * J, 0.0);
    Y.assign(S * J, 0.0);
    SparseMatrix M = block_M_sparse(g, params, caps);
    for (int b = 0; b < M.rows; ++b)
      for (const auto& ent : M.row[b]) X[std::size_t(ent.col) * S + b] = ent.v;
  }

  void apply(const SparseMatrix& T) {
    std::fill(Y.begin(), Y.end(), 0.0);
    for (std::size_t x = 0; x < J; ++x) {
      const double* src = &X[x * S];
      for (const auto& ent : T.row[x]) {
        double* dst = &Y[std::size_t(ent.col) * S];
        for (std::size_t b = 0; b < S; ++b) dst[b] += ent.v * src[b];
      }
    }
    std::swap(X, Y);
  }

  // collapse through M*: P(B, B') = sum over x with bits(x) = B'
  Matrix collapse(int m) const {
    Matrix P(static_cast<int>(S), static_cast<int>(S));
    const std::size_t mask = (std::size_t(1) << m) - 1;
    for (std::size_t x = 0; x < J; ++x) {
      std::size_t bcol = x & mask;
      const double* src = &X[x * S];
      for (std::size_t b = 0; b < S; ++b) P(static_cast<int>(b), static_cast<int>(bcol)) += src[b];
    }
    return P;
  }
};

}  // namespace

WeightedMatrix sw_matrix_operator(const Graph& g, const ModelParams& params, const Caps& caps,
                                  const std::vector<int>* edge_order) {
  JointProduct jp(g, params, caps);
  std::vector<int> order;
  if (edge_order)
    order = *edge_order;
  else {
    order.resize(g.m());
    for (int e = 0; e < g.m(); ++e) order[e] = e;
  }
  for (int e : order) jp.apply(edge_operator_sparse(g, params, e, caps));
  WeightedMatrix out;
  out.mat = jp.collapse(g.m());
  out.row_weights = rc_distribution(g, params, caps.rc_states).w;
  out.col_weights = out.row_weights;
  out.kind = MatrixKind::stochastic;
  return out;
}

WeightedMatrix sb_matrix_operator(const Graph& g, const ModelParams& params, const Caps& caps) {
  JointProduct jp(g, params, caps);
  jp.apply(averaged_edge_operator_sparse(g, params, caps));
  WeightedMatrix out;
  out.mat = jp.collapse(g.m());
  out.row_weights = rc_distribution(g, params, caps.rc_states).w;
  out.col_weights = out.row_weights;
  out.kind = MatrixKind::stochastic;
  return out;
}

namespace {

WeightedMatrix subtract_stationary(Matrix P, const std::vector<double>& mu) {
  WeightedMatrix out;
  for (int i = 0; i < P.rows; ++i)
    for (int j = 0; j < P.cols; ++j) P(i, j) -= mu[j];
  out.mat = std::move(P);
  out.row_weights = mu;
  out.col_weights = mu;
  out.kind = MatrixKind::general;
  return out;
}

}  // namespace

WeightedMatrix composite_RTR(const Graph& g, const ModelParams& params, int k,
                             const Caps& caps) {
  if (k < 0) throw Error("composite_RTR: k must be >= 0");
  JointProduct jp(g, params, caps);
  if (k > 0) {
    SparseMatrix T = averaged_edge_operator_sparse(g, params, caps);
    for (int i = 0; i < k; ++i) jp.apply(T);
  }
  std::vector<double> mu = rc_distribution(g, params, caps.rc_states).w;
  return subtract_stationary(jp.collapse(g.m()), mu);
}

WeightedMatrix composite_RTR_full(const Graph& g, const ModelParams& params, const Caps& caps) {
  WeightedMatrix sw = sw_matrix_operator(g, params, caps);
  return subtract_stationary(std::move(sw.mat), sw.row_weights);
}

SparseMatrix edge_operator_power_product(const Graph& g, const ModelParams& params,
                                         const std::vector<int>& alpha, const Caps& caps) {
  if (static_cast<int>(alpha.size()) != g.m())
    throw Error("edge_operator_power_product: need one exponent per edge");
  const std::size_t joint = joint_state_count(g, params, caps);
  SparseMatrix prod(static_cast<int>(joint), static_cast<int>(joint));
  for (std::size_t x = 0; x < joint; ++x) prod.row[x].push_back({static_cast<int>(x), 1.0});
  for (int e = 0; e < g.m(); ++e) {
    if (alpha[e] == 0) continue;
    SparseMatrix Te = edge_operator_sparse(g, params, e, caps);
    for (int i = 0; i < alpha[e]; ++i) prod = sparse_matmul(prod, Te);
  }
  return prod;
}

WeightedMatrix block_M(const Graph& g, const ModelParams& params, const Caps& caps) {
  WeightedMatrix out;
  out.mat = block_M_sparse(g, params, caps).dense();
  out.row_weights = rc_distribution(g, params, caps.rc_states).w;
  out.col_weights = fkes_weights_vec(g, params, caps);
  out.kind = MatrixKind::stochastic;
  return out;
}

WeightedMatrix block_M_star(const Graph& g, const ModelParams& params, const Caps& caps) {
  WeightedMatrix out;
  out.mat = block_M_star_sparse(g, params, caps).dense();
  out.row_weights = fkes_weights_vec(g, params, caps);
  out.col_weights = rc_distribution(g, params, caps.rc_states).w;
  out.kind = MatrixKind::stochastic;
  return out;
}

WeightedMatrix edge_operator(const Graph& g, const ModelParams& params, int e,
                             const Caps& caps) {
  WeightedMatrix out;
  out.mat = edge_operator_sparse(g, params, e, caps).dense();
  out.row_weights = fkes_weights_vec(g, params, caps);
  out.col_weights = out.row_weights;
  out.kind = MatrixKind::stochastic;
  return out;
}

WeightedMatrix sw_potts_matrix(const Graph& g, const ModelParams& params, const Caps& caps) {
  const std::size_t joint = joint_state_count(g, params, caps);
  const std::size_t potts = joint >> g.m();
  const std::size_t states = std::size_t(1) << g.m();
  const int m = g.m();
  const double p = params.p;

  Matrix U(static_cast<int>(potts), static_cast<int>(states));   // pick A <= E(sigma)
  Matrix W(static_cast<int>(states), static_cast<int>(potts));   // recolor components
  std::vector<double> pow_p(m + 1), pow_1p(m + 1);
  pow_p[0] = pow_1p[0] = 1.0;
  for (int i = 1; i <= m; ++i) {
    pow_p[i] = pow_p[i - 1] * p;
    pow_1p[i] = pow_1p[i - 1] * (1.0 - p);
  }
  for (std::size_t s = 0; s < potts; ++s) {
    EdgeSubset mono = monochromatic_edges(g, params, s);
    int mk = std::popcount(mono);
    EdgeSubset a = mono;
    while (true) {
      int ak = std::popcount(a);
      U(static_cast<int>(s), static_cast<int>(a)) = pow_p[ak] * pow_1p[mk - ak];
      if (a == 0) break;
      a = (a - 1) & mono;
    }
  }
  SparseMatrix M = block_M_sparse(g, params, caps);
  for (int b = 0; b < M.rows; ++b)
    for (const auto& ent : M.row[b]) W(b, static_cast<int>(std::size_t(ent.col) >> m)) += ent.v;

  WeightedMatrix out;
  out.mat = matmul(U, W);
  out.row_weights = potts_distribution(g, params, caps.joint_states).w;
  out.col_weights = out.row_weights;
  out.kind = MatrixKind::stochastic;
  return out;
}

WeightedMatrix rank_one_chain(const std::vector<double>& w) {
  int n = static_cast<int>(w.size());
  WeightedMatrix out;
  out.mat = Matrix(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.mat(i, j) = w[j];
  out.row_weights = w;
  out.col_weights = w;
  out.kind = MatrixKind::stochastic;
  return out;
}

double detailed_balance_residual(const WeightedMatrix& pm) {
  double r = 0.0;
  const int n = pm.mat.rows;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      r = std::max(r, std::abs(pm.row_weights[i] * pm.mat(i, j) -
                               pm.row_weights[j] * pm.mat(j, i)));
  return r;
}

double detailed_balance_residual(const SparseMatrix& k, const std::vector<double>& w) {
  // residual over the union of sparsity patterns of K and K^T
  double r = 0.0;
  for (int i = 0; i < k.rows; ++i)
    for (const auto& e : k.row[i]) {
      double kji = 0.0;
      for (const auto& f : k.row[e.col])
        if (f.col == i) {
          kji = f.v;
          break;
        }
      r = std::max(r, std::abs(w[i] * e.v - w[e.col] * kji));
    }
  return r;
}

}  // namespace rcgap
