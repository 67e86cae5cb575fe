#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rcgap/dynamics.hpp"
#include "rcgap/spectral.hpp"

namespace rcgap {

/// One named, machine-runnable check on one instance. For inequality checks
/// margin = rhs - lhs and pass <=> margin >= -tol; for equality checks margin
/// is the max-abs (or max-relative) residual and pass <=> |margin| <= tol.
struct CheckResult {
  std::string check;
  std::string graph;
  double p = 0.0;
  int q = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool pass = true;
  double tol = 0.0;
  std::optional<std::string> skipped;  // reason, e.g. "cap"

  std::string to_json() const;
};

struct Tolerances {
  double equality = 1e-10;
  double inequality = 1e-9;
};

struct SuiteOptions {
  Caps caps;
  std::size_t mix_states_cap = 1024;  // separate cap for exact mixing times
  Tolerances tol;
  int k_max = 8;
  std::vector<double> eps_list = {0.25, 0.5};
};

struct Instance {
  std::string graph_spec;
  ModelParams params;
};

/// Lazily built per-instance matrices shared across checks.
class InstanceContext {
 public:
  InstanceContext(const Instance& inst, const SuiteOptions& opts);

  const Instance& instance() const { return inst_; }
  const Graph& graph() const { return graph_; }
  const ModelParams& params() const { return inst_.params; }
  const SuiteOptions& options() const { return opts_; }

  bool rc_in_cap() const;
  bool joint_in_cap() const;

  const WeightedMatrix& sw();
  const WeightedMatrix& hb();
  const WeightedMatrix& sb();
  const WeightedMatrix& lazy_sb();
  const DistributionVector& mu();
  const std::vector<double>& nu();

  double gap_sw();
  double gap_hb();
  double gap_sb();
  double gap_lazy_sb();

 private:
  Instance inst_;
  SuiteOptions opts_;
  Graph graph_;
  std::optional<WeightedMatrix> sw_, hb_, sb_, lazy_sb_;
  std::optional<DistributionVector> mu_;
  std::optional<std::vector<double>> nu_;
  std::optional<double> gap_sw_, gap_hb_, gap_sb_, gap_lazy_sb_;
};

/// Self-adjointness, idempotence, commutation and unit norms of the joint
/// building blocks, plus positivity of the averaged edge operator.
std::vector<CheckResult> check_building_blocks(InstanceContext& ctx);

/// Operator representation identities: SW/SB direct vs joint-space product,
/// edge-order invariance, Potts-side gap equality.
std::vector<CheckResult> check_representation(InstanceContext& ctx);

/// Two-sided SB/HB gap comparison plus the entrywise domination.
std::vector<CheckResult> check_sb_hb(InstanceContext& ctx);

/// Norm monotonicity, doubling and interpolation bounds for R T^k R*.
std::vector<CheckResult> check_norm_lemmas(InstanceContext& ctx);

/// SW vs SB/HB gap bounds (proof-constant and stated forms) and the lazy-SB
/// lower bound.
std::vector<CheckResult> check_main_theorems(InstanceContext& ctx);

/// Dual measure equality, HB conjugacy, HB gap equality, dual SW bound.
/// Requires a rotation system on the instance graph.
std::vector<CheckResult> check_duality(InstanceContext& ctx);

/// Exact mixing times against the gap sandwich and the RC-specific bound.
std::vector<CheckResult> check_mixing_bounds(InstanceContext& ctx);

/// Known check selector names, in canonical order.
const std::vector<std::string>& check_names();

struct SuiteReport {
  std::vector<CheckResult> results;
  int n_pass = 0;
  int n_fail = 0;
  int n_skipped = 0;

  bool all_pass() const { return n_fail == 0; }
  /// One CheckResult JSON object per line, in corpus order.
  std::string to_jsonl() const;
  /// Worst margin per check id.
  std::string summary() const;
};

/// Execute the selected checks over the corpus. Individual failures are
/// recorded, not thrown; cap violations become skipped entries.
SuiteReport run_suite(const std::vector<Instance>& corpus,
                      const std::vector<std::string>& checks, const SuiteOptions& opts);

/// Canonical corpus: {edge, path:3, cycle:3, cycle:4, complete:4, grid:2,
/// grid:3} x p in {0.2, 0.5, self-dual(q), 0.8} x q in {2, 3}.
std::vector<Instance> default_corpus();

}  // namespace rcgap
