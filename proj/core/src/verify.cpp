#include "rcgap/verify.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

namespace rcgap {

std::string CheckResult::to_json() const {
  nlohmann::ordered_json j;
  j["check"] = check;
  j["graph"] = graph;
  j["p"] = p;
  j["q"] = q;
  j["lhs"] = lhs;
  j["rhs"] = rhs;
  j["margin"] = margin;
  j["pass"] = pass;
  j["tol"] = tol;
  if (skipped)
    j["skipped"] = *skipped;
  else
    j["skipped"] = nullptr;
  return j.dump();
}

InstanceContext::InstanceContext(const Instance& inst, const SuiteOptions& opts)
    : inst_(inst), opts_(opts), graph_(graph_from_spec(inst.graph_spec)) {}

bool InstanceContext::rc_in_cap() const {
  return graph_.m() < 63 && (std::size_t(1) << graph_.m()) <= opts_.caps.rc_states;
}

bool InstanceContext::joint_in_cap() const {
  double sz = std::pow(double(inst_.params.q), graph_.n) * std::ldexp(1.0, graph_.m());
  return rc_in_cap() && sz <= double(opts_.caps.joint_states);
}

const WeightedMatrix& InstanceContext::sw() {
  if (!sw_) sw_ = sw_matrix_direct(graph_, inst_.params, opts_.caps);
  return *sw_;
}

const WeightedMatrix& InstanceContext::hb() {
  if (!hb_) hb_ = hb_matrix(graph_, inst_.params, opts_.caps);
  return *hb_;
}

const WeightedMatrix& InstanceContext::sb() {
  if (!sb_) sb_ = sb_matrix(graph_, inst_.params, opts_.caps);
  return *sb_;
}

const WeightedMatrix& InstanceContext::lazy_sb() {
  if (!lazy_sb_) lazy_sb_ = lazy(sb());
  return *lazy_sb_;
}

const DistributionVector& InstanceContext::mu() {
  if (!mu_) mu_ = rc_distribution(graph_, inst_.params, opts_.caps.rc_states);
  return *mu_;
}

const std::vector<double>& InstanceContext::nu() {
  if (!nu_) nu_ = fkes_distribution(graph_, inst_.params, opts_.caps.joint_states).w;
  return *nu_;
}

double InstanceContext::gap_sw() {
  if (!gap_sw_) gap_sw_ = spectral_gap(sw()).gap;
  return *gap_sw_;
}

double InstanceContext::gap_hb() {
  if (!gap_hb_) gap_hb_ = spectral_gap(hb()).gap;
  return *gap_hb_;
}

double InstanceContext::gap_sb() {
  if (!gap_sb_) gap_sb_ = spectral_gap(sb()).gap;
  return *gap_sb_;
}

double InstanceContext::gap_lazy_sb() {
  if (!gap_lazy_sb_) gap_lazy_sb_ = spectral_gap(lazy_sb()).gap;
  return *gap_lazy_sb_;
}

namespace {

CheckResult base_result(InstanceContext& ctx, const std::string& name) {
  CheckResult r;
  r.check = name;
  r.graph = ctx.instance().graph_spec;
  r.p = ctx.params().p;
  r.q = ctx.params().q;
  return r;
}

// Equality check: margin is the residual, pass <=> |margin| <= tol.
CheckResult eq_result(InstanceContext& ctx, const std::string& name, double residual,
                      double tol) {
  CheckResult r = base_result(ctx, name);
  r.lhs = residual;
  r.rhs = 0.0;
  r.margin = residual;
  r.tol = tol;
  r.pass = std::abs(residual) <= tol;
  return r;
}

// Inequality check lhs <= rhs: margin = rhs - lhs, pass <=> margin >= -tol.
CheckResult ineq_result(InstanceContext& ctx, const std::string& name, double lhs, double rhs,
                        double tol) {
  CheckResult r = base_result(ctx, name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.tol = tol;
  r.pass = r.margin >= -tol;
  return r;
}

CheckResult skip_result(InstanceContext& ctx, const std::string& name,
                        const std::string& reason) {
  CheckResult r = base_result(ctx, name);
  r.skipped = reason;
  return r;
}

std::string fmt_eps(double eps) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", eps);
  return buf;
}

int ceil_pos(double x) { return std::max(1, static_cast<int>(std::ceil(x))); }

}  // namespace

std::vector<CheckResult> check_building_blocks(InstanceContext& ctx) {
  if (!ctx.joint_in_cap()) return {skip_result(ctx, "building-blocks", "cap")};
  try {
    const Graph& g = ctx.graph();
    const ModelParams& params = ctx.params();
    const Caps& caps = ctx.options().caps;
    const std::vector<double>& nu = ctx.nu();
    const double tol_eq = ctx.options().tol.equality;

    std::vector<SparseMatrix> te;
    for (int e = 0; e < g.m(); ++e) te.push_back(edge_operator_sparse(g, params, e, caps));
    SparseMatrix msm = m_star_m_sparse(g, params, caps);

    std::vector<CheckResult> out;

    double sa = 0.0;
    for (const auto& t : te) sa = std::max(sa, detailed_balance_residual(t, nu));
    out.push_back(eq_result(ctx, "building-blocks/Te-selfadjoint", sa, tol_eq));

    out.push_back(eq_result(ctx, "building-blocks/MstarM-selfadjoint",
                            detailed_balance_residual(msm, nu), tol_eq));

    double idem = 0.0;
    for (const auto& t : te) idem = std::max(idem, max_abs_diff(sparse_matmul(t, t), t));
    out.push_back(eq_result(ctx, "building-blocks/Te-idempotent", idem, tol_eq));

    double comm = 0.0;
    for (std::size_t e = 0; e < te.size(); ++e)
      for (std::size_t f = e + 1; f < te.size(); ++f)
        comm = std::max(comm, max_abs_diff(sparse_matmul(te[e], te[f]),
                                           sparse_matmul(te[f], te[e])));
    out.push_back(eq_result(ctx, "building-blocks/Te-commute", comm, tol_eq));

    double nres = 0.0;
    for (const auto& t : te) nres = std::max(nres, std::abs(weighted_norm(t, nu) - 1.0));
    out.push_back(eq_result(ctx, "building-blocks/Te-norm", nres, tol_eq));

    out.push_back(eq_result(ctx, "building-blocks/MstarM-norm",
                            std::abs(weighted_norm(msm, nu) - 1.0), tol_eq));

    // averaged T must be positive semidefinite up to rounding
    ExtremeEigs ex =
        weighted_extreme_eigenvalues(averaged_edge_operator_sparse(g, params, caps), nu);
    out.push_back(ineq_result(ctx, "building-blocks/T-positive", -ex.min, 0.0, 1e-12));
    return out;
  } catch (const CapError&) {
    return {skip_result(ctx, "building-blocks", "cap")};
  }
}

std::vector<CheckResult> check_representation(InstanceContext& ctx) {
  if (!ctx.joint_in_cap()) return {skip_result(ctx, "representation", "cap")};
  try {
    const Graph& g = ctx.graph();
    const ModelParams& params = ctx.params();
    const Caps& caps = ctx.options().caps;
    const double tol_eq = ctx.options().tol.equality;

    std::vector<CheckResult> out;
    WeightedMatrix sw_op = sw_matrix_operator(g, params, caps);
    out.push_back(eq_result(ctx, "representation/sw-direct-vs-operator",
                            max_abs_diff(ctx.sw().mat, sw_op.mat), tol_eq));
    out.push_back(eq_result(ctx, "representation/sb-direct-vs-operator",
                            max_abs_diff(ctx.sb().mat, sb_matrix_operator(g, params, caps).mat),
                            tol_eq));

    std::vector<int> rev(g.m());
    for (int e = 0; e < g.m(); ++e) rev[e] = g.m() - 1 - e;
    out.push_back(
        eq_result(ctx, "representation/edge-order-invariance",
                  max_abs_diff(sw_op.mat, sw_matrix_operator(g, params, caps, &rev).mat),
                  tol_eq));

    WeightedMatrix potts = sw_potts_matrix(g, params, caps);
    out.push_back(eq_result(ctx, "representation/potts-gap",
                            std::abs(spectral_gap(potts).gap - ctx.gap_sw()), tol_eq));
    return out;
  } catch (const CapError&) {
    return {skip_result(ctx, "representation", "cap")};
  }
}

std::vector<CheckResult> check_sb_hb(InstanceContext& ctx) {
  if (!ctx.rc_in_cap()) return {skip_result(ctx, "sb-hb", "cap")};
  try {
    const double p = ctx.params().p;
    const double q = ctx.params().q;
    const double c = 1.0 / (1.0 - p * (1.0 - 1.0 / q));
    const double tol = ctx.options().tol.inequality;

    std::vector<CheckResult> out;
    out.push_back(ineq_result(ctx, "sb-hb/lower", 0.5 * ctx.gap_sb(), ctx.gap_hb(), tol));
    out.push_back(ineq_result(ctx, "sb-hb/upper", ctx.gap_hb(), c * ctx.gap_lazy_sb(), tol));

    const Matrix& hb = ctx.hb().mat;
    const Matrix& lsb = ctx.lazy_sb().mat;
    double worst_lo = 0.0, worst_hi = 0.0;
    for (int a = 0; a < hb.rows; ++a)
      for (int b = 0; b < hb.cols; ++b) {
        if (a == b) continue;
        worst_lo = std::max(worst_lo, lsb(a, b) - hb(a, b));
        worst_hi = std::max(worst_hi, hb(a, b) - c * lsb(a, b));
      }
    out.push_back(ineq_result(ctx, "sb-hb/domination-lower", worst_lo, 0.0, tol));
    out.push_back(ineq_result(ctx, "sb-hb/domination-upper", worst_hi, 0.0, tol));
    return out;
  } catch (const CapError&) {
    return {skip_result(ctx, "sb-hb", "cap")};
  }
}

std::vector<CheckResult> check_norm_lemmas(InstanceContext& ctx) {
  if (!ctx.joint_in_cap()) return {skip_result(ctx, "norm-lemmas", "cap")};
  try {
    const Graph& g = ctx.graph();
    const ModelParams& params = ctx.params();
    const Caps& caps = ctx.options().caps;
    const double tol = ctx.options().tol.inequality;
    const int k_max = ctx.options().k_max;
    const int m = g.m();

    const double t_norm =
        weighted_norm(averaged_edge_operator_sparse(g, params, caps), ctx.nu());
    std::vector<double> nrm(k_max + 2, 0.0);  // nrm[k] = ||R T^k R*||
    for (int k = 1; k <= k_max + 1; ++k)
      nrm[k] = weighted_norm(composite_RTR(g, params, k, caps));
    const double full_norm = weighted_norm(composite_RTR_full(g, params, caps));

    std::vector<CheckResult> out;

    auto worst_pair = [&](auto&& lhs_of, auto&& rhs_of, int lo, int hi) {
      int arg = lo;
      double worst = 1e300;
      for (int k = lo; k <= hi; ++k) {
        double mgn = rhs_of(k) - lhs_of(k);
        if (mgn < worst) {
          worst = mgn;
          arg = k;
        }
      }
      return std::pair<double, double>(lhs_of(arg), rhs_of(arg));
    };

    {
      auto [l, r] = worst_pair([&](int k) { return nrm[k + 1]; },
                               [&](int k) { return t_norm * nrm[k]; }, 1, k_max);
      out.push_back(ineq_result(ctx, "norm-lemmas/monotone", l, r, tol));
    }
    {
      std::vector<int> js;
      for (int v = 1; v <= k_max; v *= 2) js.push_back(v);
      double worst = 1e300, l = 0, r = 0;
      for (int v : js) {
        double lhs = std::pow(nrm[1], v), rhs = nrm[v];
        if (rhs - lhs < worst) {
          worst = rhs - lhs;
          l = lhs;
          r = rhs;
        }
      }
      out.push_back(ineq_result(ctx, "norm-lemmas/doubling", l, r, tol));
    }
    {
      auto [l, r] = worst_pair([&](int k) { return std::pow(nrm[1], 2.0 * k); },
                               [&](int k) { return nrm[k]; }, 1, k_max);
      out.push_back(ineq_result(ctx, "norm-lemmas/interpolation", l, r, tol));
    }

    for (double eps : ctx.options().eps_list) {
      double bound = (1.0 - eps) * full_norm + eps;
      int k_ln = ceil_pos(m * std::log(m / eps));
      double v_ln = (k_ln <= k_max + 1) ? nrm[k_ln]
                                        : weighted_norm(composite_RTR(g, params, k_ln, caps));
      out.push_back(
          ineq_result(ctx, "norm-lemmas/threshold-eps=" + fmt_eps(eps), v_ln, bound, tol));
      int k_l2 = ceil_pos(m * std::log2(m / eps));
      double v_l2 = (k_l2 <= k_max + 1) ? nrm[k_l2]
                                        : weighted_norm(composite_RTR(g, params, k_l2, caps));
      out.push_back(ineq_result(ctx, "norm-lemmas/threshold-log2-eps=" + fmt_eps(eps), v_l2,
                                bound, tol));
    }
    return out;
  } catch (const CapError&) {
    return {skip_result(ctx, "norm-lemmas", "cap")};
  }
}

std::vector<CheckResult> check_main_theorems(InstanceContext& ctx) {
  if (!ctx.rc_in_cap()) return {skip_result(ctx, "main-theorems", "cap")};
  try {
    const double tol = ctx.options().tol.inequality;
    const int m = ctx.graph().m();
    const double k_proof = 4.0 * std::ceil(m * std::log(2.0 * m));

    std::vector<CheckResult> out;
    out.push_back(ineq_result(ctx, "main-theorems/proof-constant-sb", ctx.gap_sw(),
                              k_proof * ctx.gap_sb(), tol));
    out.push_back(ineq_result(ctx, "main-theorems/proof-constant-hb", ctx.gap_sw(),
                              2.0 * k_proof * ctx.gap_hb(), tol));
    if (m >= 2) {
      out.push_back(ineq_result(ctx, "main-theorems/stated-sb", ctx.gap_sw(),
                                8.0 * m * std::log(m) * ctx.gap_sb(), tol));
      out.push_back(ineq_result(ctx, "main-theorems/stated-sb-log2", ctx.gap_sw(),
                                8.0 * m * std::log2(m) * ctx.gap_sb(), tol));
      out.push_back(ineq_result(ctx, "main-theorems/stated-hb", ctx.gap_sw(),
                                16.0 * m * std::log(m) * ctx.gap_hb(), tol));
      out.push_back(ineq_result(ctx, "main-theorems/stated-hb-log2", ctx.gap_sw(),
                                16.0 * m * std::log2(m) * ctx.gap_hb(), tol));
    } else {
      out.push_back(skip_result(ctx, "main-theorems/stated-sb", "m=1"));
      out.push_back(skip_result(ctx, "main-theorems/stated-hb", "m=1"));
    }
    out.push_back(
        ineq_result(ctx, "main-theorems/lower", ctx.gap_lazy_sb(), ctx.gap_sw(), tol));
    return out;
  } catch (const CapError&) {
    return {skip_result(ctx, "main-theorems", "cap")};
  }
}

std::vector<CheckResult> check_duality(InstanceContext& ctx) {
  if (!ctx.graph().has_rotations()) return {skip_result(ctx, "duality", "no-embedding")};
  if (!ctx.rc_in_cap()) return {skip_result(ctx, "duality", "cap")};
  try {
    const Graph& g = ctx.graph();
    const ModelParams& params = ctx.params();
    const Caps& caps = ctx.options().caps;
    const double tol_eq = ctx.options().tol.equality;
    const double tol_in = ctx.options().tol.inequality;
    const int m = g.m();
    const std::size_t states = std::size_t(1) << m;

    DualMap dm = dual_graph(g);
    ModelParams dparams(dual_parameter(params), params.q);

    std::vector<CheckResult> out;

    const std::vector<double>& mu = ctx.mu().w;
    std::vector<double> dmu = rc_distribution(dm.dual, dparams, caps.rc_states).w;
    double res_mu = 0.0;
    for (std::size_t a = 0; a < states; ++a)
      res_mu = std::max(res_mu, std::abs(mu[a] - dmu[dual_config(dm, a)]));
    out.push_back(eq_result(ctx, "duality/measure", res_mu, tol_eq));

    WeightedMatrix dhb = hb_matrix(dm.dual, dparams, caps);
    const Matrix& hb = ctx.hb().mat;
    double res_hb = 0.0;
    for (std::size_t a = 0; a < states; ++a)
      for (std::size_t b = 0; b < states; ++b)
        res_hb = std::max(res_hb,
                          std::abs(hb(static_cast<int>(a), static_cast<int>(b)) -
                                   dhb.mat(static_cast<int>(dual_config(dm, a)),
                                           static_cast<int>(dual_config(dm, b)))));
    out.push_back(eq_result(ctx, "duality/hb-conjugate", res_hb, tol_eq));

    out.push_back(eq_result(ctx, "duality/hb-gap",
                            std::abs(ctx.gap_hb() - spectral_gap(dhb).gap), tol_in));

    if (m >= 2) {
      double c = 16.0 * std::min(double(params.q), 1.0 / (1.0 - params.p));
      double dual_sw_gap = spectral_gap(sw_matrix_direct(dm.dual, dparams, caps)).gap;
      out.push_back(ineq_result(ctx, "duality/sw-bound", ctx.gap_sw(),
                                c * m * std::log(m) * dual_sw_gap, tol_in));
    } else {
      out.push_back(skip_result(ctx, "duality/sw-bound", "m=1"));
    }
    return out;
  } catch (const CapError&) {
    return {skip_result(ctx, "duality", "cap")};
  }
}

std::vector<CheckResult> check_mixing_bounds(InstanceContext& ctx) {
  const std::size_t mix_cap = ctx.options().mix_states_cap;
  if (!ctx.rc_in_cap() || ctx.graph().m() >= 63 ||
      (std::size_t(1) << ctx.graph().m()) > mix_cap)
    return {skip_result(ctx, "mixing", "cap")};
  try {
    const double tol = ctx.options().tol.inequality;
    double pi_min = 1.0;
    for (double w : ctx.mu().w) pi_min = std::min(pi_min, w);

    std::vector<CheckResult> out;
    struct Dyn {
      const char* name;
      const WeightedMatrix* pm;
      double gap;
    };
    std::vector<Dyn> dyns = {{"sw", &ctx.sw(), ctx.gap_sw()},
                             {"hb", &ctx.hb(), ctx.gap_hb()},
                             {"sb", &ctx.sb(), ctx.gap_sb()}};
    for (const Dyn& d : dyns) {
      int tau = mixing_time_exact(*d.pm, false, mix_cap);
      MixingBounds b = gap_mixing_bounds(ctx.graph(), ctx.params(), d.gap, pi_min);
      std::string suffix = std::string("-") + d.name;
      out.push_back(ineq_result(ctx, "mixing/lower" + suffix, b.lower, double(tau), tol));
      out.push_back(
          ineq_result(ctx, "mixing/upper" + suffix, double(tau), b.upper_general, tol));
      out.push_back(
          ineq_result(ctx, "mixing/upper-rc" + suffix, double(tau), b.upper_rc, tol));
    }
    return out;
  } catch (const CapError&) {
    return {skip_result(ctx, "mixing", "cap")};
  }
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {
      "building-blocks", "representation", "sb-hb",  "norm-lemmas",
      "main-theorems",   "duality",        "mixing",
  };
  return names;
}

std::string SuiteReport::to_jsonl() const {
  std::ostringstream out;
  for (const auto& r : results) out << r.to_json() << "\n";
  return out.str();
}

std::string SuiteReport::summary() const {
  struct Agg {
    int n = 0, fail = 0, skip = 0;
    double min_margin = 1e300;
    double max_abs = 0.0;
  };
  std::map<std::string, Agg> per_check;
  for (const auto& r : results) {
    Agg& a = per_check[r.check];
    ++a.n;
    if (r.skipped) {
      ++a.skip;
      continue;
    }
    if (!r.pass) ++a.fail;
    a.min_margin = std::min(a.min_margin, r.margin);
    a.max_abs = std::max(a.max_abs, std::abs(r.margin));
  }
  std::ostringstream out;
  char buf[64];
  for (const auto& [name, a] : per_check) {
    out << name << ": n=" << a.n << " fail=" << a.fail << " skipped=" << a.skip;
    if (a.n > a.skip) {
      std::snprintf(buf, sizeof buf, "%.17g", a.min_margin);
      out << " worst_margin=" << buf;
      std::snprintf(buf, sizeof buf, "%.17g", a.max_abs);
      out << " max_abs_margin=" << buf;
    }
    out << "\n";
  }
  out << "total: pass=" << n_pass << " fail=" << n_fail << " skipped=" << n_skipped << "\n";
  return out.str();
}

SuiteReport run_suite(const std::vector<Instance>& corpus,
                      const std::vector<std::string>& checks, const SuiteOptions& opts) {
  using CheckFn = std::vector<CheckResult> (*)(InstanceContext&);
  static const std::map<std::string, CheckFn> table = {
      {"building-blocks", &check_building_blocks},
      {"representation", &check_representation},
      {"sb-hb", &check_sb_hb},
      {"norm-lemmas", &check_norm_lemmas},
      {"main-theorems", &check_main_theorems},
      {"duality", &check_duality},
      {"mixing", &check_mixing_bounds},
  };
  for (const auto& name : checks)
    if (!table.count(name)) throw ParseError("unknown check '" + name + "'");

  SuiteReport report;
  for (const Instance& inst : corpus) {
    InstanceContext ctx(inst, opts);
    for (const auto& name : checks) {
      std::vector<CheckResult> rs;
      try {
        rs = table.at(name)(ctx);
      } catch (const CapError&) {
        CheckResult r;
        r.check = name;
        r.graph = inst.graph_spec;
        r.p = inst.params.p;
        r.q = inst.params.q;
        r.skipped = "cap";
        rs = {r};
      }
      for (auto& r : rs) {
        if (r.skipped)
          ++report.n_skipped;
        else if (r.pass)
          ++report.n_pass;
        else
          ++report.n_fail;
        report.results.push_back(std::move(r));
      }
    }
  }
  return report;
}

std::vector<Instance> default_corpus() {
  static const char* graphs[] = {"edge",       "path:3", "cycle:3", "cycle:4",
                                 "complete:4", "grid:2", "grid:3"};
  std::vector<Instance> corpus;
  for (const char* gs : graphs)
    for (int q : {2, 3})
      for (double p : {0.2, 0.5, self_dual(q), 0.8})
        corpus.push_back(Instance{gs, ModelParams(p, q)});
  return corpus;
}

}  // namespace rcgap
