// Acceptance gate: seven criteria, one pass/fail line each. All tolerances
// are pinned here, independent of any CLI defaults.
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "rcgap/dynamics.hpp"
#include "rcgap/sampler.hpp"
#include "rcgap/spectral.hpp"
#include "rcgap/verify.hpp"

using namespace rcgap;

namespace {

int failures = 0;
bool silent = false;  // criterion 7 re-runs the others without re-reporting

void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
  if (silent) return;
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion, name.c_str(),
              detail.c_str());
  if (!pass) ++failures;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

SuiteOptions suite_options() {
  SuiteOptions opts;
  opts.tol.equality = 1e-10;
  opts.tol.inequality = 1e-9;
  opts.k_max = 8;
  opts.eps_list = {0.25, 0.5};
  return opts;
}

// criterion 1: the full verification suite over the canonical corpus
std::string criterion_full_suite() {
  SuiteReport rep = run_suite(default_corpus(), check_names(), suite_options());
  std::ostringstream detail;
  detail << "pass=" << rep.n_pass << " fail=" << rep.n_fail << " skipped=" << rep.n_skipped;
  report(1, "verification suite on the canonical corpus", rep.all_pass(), detail.str());
  return rep.to_jsonl();
}

// criterion 2: direct vs joint-space construction, entrywise
std::string criterion_cross_construction() {
  const double tol = 1e-12;
  double worst = 0.0;
  std::string worst_at = "-";
  int checked = 0;
  for (const Instance& inst : default_corpus()) {
    Graph g = graph_from_spec(inst.graph_spec);
    double joint = std::pow(double(inst.params.q), g.n) * std::ldexp(1.0, g.m());
    if (joint > 300000.0) continue;
    ++checked;
    double d = std::max(
        max_abs_diff(sw_matrix_direct(g, inst.params).mat,
                     sw_matrix_operator(g, inst.params).mat),
        max_abs_diff(sb_matrix(g, inst.params).mat, sb_matrix_operator(g, inst.params).mat));
    if (d > worst) {
      worst = d;
      worst_at = inst.graph_spec;
    }
  }
  report(2, "direct vs operator construction", worst <= tol && checked > 0,
         "instances=" + std::to_string(checked) + " worst=" + fmt(worst) + " at " + worst_at);
  std::ostringstream out;
  out << "cross-construction worst=" << worst << " instances=" << checked << "\n";
  return out.str();
}

// criterion 3: duality on grid:2 and grid:3
std::string criterion_duality() {
  bool pass = true;
  std::ostringstream out;
  double worst_mu = 0.0, worst_hb = 0.0, worst_gap = 0.0;
  for (const char* spec : {"grid:2", "grid:3"}) {
    for (auto [p, q] : std::vector<std::pair<double, int>>{{0.5, 2}, {0.3, 3}}) {
      Graph g = graph_from_spec(spec);
      ModelParams params(p, q);
      DualMap dm = dual_graph(g);
      ModelParams dparams(dual_parameter(params), q);
      const std::size_t states = std::size_t(1) << g.m();

      std::vector<double> mu = rc_distribution(g, params).w;
      std::vector<double> dmu = rc_distribution(dm.dual, dparams).w;
      double res_mu = 0.0;
      for (std::size_t a = 0; a < states; ++a)
        res_mu = std::max(res_mu, std::abs(mu[a] - dmu[dual_config(dm, a)]) / mu[a]);
      pass = pass && res_mu <= 1e-12;

      WeightedMatrix hb = hb_matrix(g, params);
      WeightedMatrix dhb = hb_matrix(dm.dual, dparams);
      double res_p = 0.0;
      for (std::size_t a = 0; a < states; ++a)
        for (std::size_t b = 0; b < states; ++b)
          res_p = std::max(res_p, std::abs(hb.mat(int(a), int(b)) -
                                           dhb.mat(int(dual_config(dm, a)),
                                                   int(dual_config(dm, b)))));
      pass = pass && res_p <= 1e-13;

      double res_gap = std::abs(spectral_gap(hb).gap - spectral_gap(dhb).gap);
      pass = pass && res_gap <= 1e-9;

      worst_mu = std::max(worst_mu, res_mu);
      worst_hb = std::max(worst_hb, res_p);
      worst_gap = std::max(worst_gap, res_gap);
      out << spec << " p=" << p << " q=" << q << " mu=" << res_mu << " hb=" << res_p
          << " gap=" << res_gap << "\n";
    }
  }
  report(3, "planar duality (measure, conjugacy, gap)", pass,
         "worst mu=" + fmt(worst_mu) + " hb=" + fmt(worst_hb) + " gap=" + fmt(worst_gap));
  return out.str();
}

// criterion 4: K2 golden values and tightness of the SB-HB upper bound
std::string criterion_golden_values() {
  const double tol = 1e-12;
  Graph g = generate("edge", 1);
  ModelParams params(0.5, 2);
  std::vector<double> mu = rc_distribution(g, params).w;
  double gsw = spectral_gap(sw_matrix_direct(g, params)).gap;
  double gsb = spectral_gap(sb_matrix(g, params)).gap;
  double ghb = spectral_gap(hb_matrix(g, params)).gap;
  double glsb = spectral_gap(lazy(sb_matrix(g, params))).gap;
  double c = 1.0 / (1.0 - params.p * (1.0 - 1.0 / params.q));

  bool pass = std::abs(mu[0] - 2.0 / 3.0) <= tol && std::abs(mu[1] - 1.0 / 3.0) <= tol &&
              std::abs(gsw - 0.75) <= tol && std::abs(gsb - 0.75) <= tol &&
              std::abs(ghb - 0.5) <= tol && std::abs(ghb - c * glsb) <= tol;
  std::ostringstream out;
  out << "mu=(" << mu[0] << "," << mu[1] << ") gap_sw=" << gsw << " gap_sb=" << gsb
      << " gap_hb=" << ghb << " tightness=" << std::abs(ghb - c * glsb) << "\n";
  report(4, "hand-derived K2 golden values", pass,
         "gaps sw=" + fmt(gsw) + " sb=" + fmt(gsb) + " hb=" + fmt(ghb) +
             " tightness=" + fmt(std::abs(ghb - c * glsb)));
  return out.str();
}

// criterion 5: sampler one-step rows and long-run histogram
std::string criterion_sampler() {
  bool pass = true;
  std::ostringstream out;
  double worst_row = 0.0;
  for (const char* spec : {"edge", "grid:2"}) {
    Graph g = graph_from_spec(spec);
    ModelParams params(0.5, 2);
    struct Case {
      Dynamics d;
      WeightedMatrix pm;
      std::uint64_t seed;
    };
    std::vector<Case> cases;
    cases.push_back({Dynamics::sw, sw_matrix_direct(g, params), 101});
    cases.push_back({Dynamics::hb, hb_matrix(g, params), 102});
    cases.push_back({Dynamics::sb, sb_matrix(g, params), 103});
    for (const Case& c : cases) {
      std::vector<double> emp = empirical_row(g, params, c.d, 0, 100000, c.seed);
      std::vector<double> exact(c.pm.mat.cols);
      for (int j = 0; j < c.pm.mat.cols; ++j) exact[j] = c.pm.mat(0, j);
      double tv = total_variation(emp, exact);
      pass = pass && tv < 0.01;
      worst_row = std::max(worst_row, tv);
      out << spec << " " << to_string(c.d) << " row tv=" << tv << "\n";
    }
  }
  Graph g2 = generate("grid", 2);
  ModelParams params(0.5, 2);
  std::vector<double> hist = occupation_histogram(g2, params, Dynamics::sw, 1000000, 202);
  double tv_long = total_variation(hist, rc_distribution(g2, params).w);
  pass = pass && tv_long <= 0.02;
  out << "grid:2 sw long-run tv=" << tv_long << "\n";
  report(5, "sampler statistical consistency", pass,
         "worst row tv=" + fmt(worst_row) + " long-run tv=" + fmt(tv_long));
  return out.str();
}

// criterion 6: SW autocorrelation scaling in the subcritical regime (advisory)
std::string criterion_scaling() {
  std::vector<double> log_n, log_tau;
  std::ostringstream out;
  for (int L : {8, 16, 32}) {
    Graph g = generate("grid", L);
    RunSpec spec;
    spec.graph_spec = "grid:" + std::to_string(L);
    spec.params = ModelParams(0.4, 2);
    spec.dynamics = Dynamics::sw;
    spec.steps = 20000;
    spec.burnin = 1000;
    spec.seed = 4000 + L;
    ChainTrace trace = run_chain(g, spec);
    std::vector<double> series;
    series.reserve(trace.records.size());
    for (const auto& r : trace.records) series.push_back(double(r.edges));
    AutocorrResult ac = autocorrelation(series);
    log_n.push_back(std::log(double(L) * L));
    log_tau.push_back(std::log(std::max(ac.tau_int, 0.5)));
    out << "L=" << L << " N=" << L * L << " tau_int=" << ac.tau_int
        << " window=" << ac.window << "\n";
  }
  // least-squares slope of log tau vs log N
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < log_n.size(); ++i) {
    mx += log_n[i];
    my += log_tau[i];
  }
  mx /= log_n.size();
  my /= log_n.size();
  double num = 0, den = 0;
  for (std::size_t i = 0; i < log_n.size(); ++i) {
    num += (log_n[i] - mx) * (log_tau[i] - my);
    den += (log_n[i] - mx) * (log_n[i] - mx);
  }
  double slope = num / den;
  out << "slope=" << slope << " threshold=1.3 (advisory)\n";
  // the report itself is the deliverable; the threshold is advisory only
  report(6, "subcritical SW autocorrelation scaling report", true,
         "log-log slope=" + fmt(slope) + (slope <= 1.3 ? " within" : " above") +
             " advisory threshold 1.3");
  return out.str();
}

std::string criteria_1_to_5() {
  std::string out;
  out += criterion_full_suite();
  out += criterion_cross_construction();
  out += criterion_duality();
  out += criterion_golden_values();
  out += criterion_sampler();
  return out;
}

}  // namespace

int main() {
  std::string first = criteria_1_to_5();
  std::string scaling = criterion_scaling();

  // criterion 7: the reports above must be byte-identical when recomputed
  silent = true;
  std::string second = criteria_1_to_5();
  silent = false;
  report(7, "determinism of criteria 1-5 reports", first == second, "byte comparison");

  std::printf("--- scaling report ---\n%s", scaling.c_str());
  return failures == 0 ? 0 : 1;
}
