#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rcgap/dynamics.hpp"
#include "rcgap/graph.hpp"
#include "rcgap/measures.hpp"
#include "rcgap/sampler.hpp"
#include "rcgap/spectral.hpp"
#include "rcgap/verify.hpp"

namespace {

constexpr const char* kVersion = "rcgap 0.1.0";

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_p(const std::string& s, int q) {
  if (s == "self-dual") return rcgap::self_dual(q);
  std::size_t pos = 0;
  double v = std::stod(s, &pos);
  if (pos != s.size()) throw rcgap::ParseError("bad value for --p: '" + s + "'");
  return v;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw rcgap::Error("cannot open output file " + out_path);
  f << text;
}

// header line carried by every output: tool version plus the resolved config
std::string header(const std::string& config) { return std::string("# ") + kVersion + " " + config + "\n"; }

rcgap::WeightedMatrix build_chain(const rcgap::Graph& g, const rcgap::ModelParams& params,
                                  const std::string& dynamics, const rcgap::Caps& caps) {
  if (dynamics == "sw") return rcgap::sw_matrix_direct(g, params, caps);
  if (dynamics == "hb") return rcgap::hb_matrix(g, params, caps);
  if (dynamics == "sb") return rcgap::sb_matrix(g, params, caps);
  if (dynamics == "lazy-sb") return rcgap::lazy(rcgap::sb_matrix(g, params, caps));
  if (dynamics == "sw-potts") return rcgap::sw_potts_matrix(g, params, caps);
  throw rcgap::ParseError("unknown dynamics '" + dynamics + "'");
}

struct ExactGapArgs {
  std::string graph, p = "0.5", dynamics = "sw", format = "text", out;
  int q = 2;
  std::size_t cap_states = 4096, cap_joint = 300000;
};

int cmd_exact_gap(const ExactGapArgs& a) {
  rcgap::Graph g = rcgap::graph_from_spec(a.graph);
  rcgap::ModelParams params(parse_p(a.p, a.q), a.q);
  rcgap::Caps caps{a.cap_states, a.cap_joint};
  rcgap::WeightedMatrix pm = build_chain(g, params, a.dynamics, caps);
  rcgap::SpectralReport rep = rcgap::spectral_gap(pm);

  std::string config = "cmd=exact-gap graph=" + a.graph + " p=" + fmt(params.p) +
                       " q=" + std::to_string(a.q) + " dynamics=" + a.dynamics;
  std::ostringstream text;
  if (a.format == "json") {
    nlohmann::ordered_json j;
    j["version"] = kVersion;
    j["graph"] = a.graph;
    j["p"] = params.p;
    j["q"] = a.q;
    j["dynamics"] = a.dynamics;
    j["states"] = pm.mat.rows;
    j["gap"] = rep.gap;
    j["second_modulus"] = rep.second_modulus;
    j["min_eigenvalue"] = rep.negative_tail;
    j["full_spectrum"] = rep.full_spectrum;
    text << j.dump() << "\n";
  } else {
    text << header(config);
    text << "states " << pm.mat.rows << "\n";
    text << "gap " << fmt(rep.gap) << "\n";
    text << "second_modulus " << fmt(rep.second_modulus) << "\n";
    text << "min_eigenvalue " << fmt(rep.negative_tail) << "\n";
  }
  emit(a.out, text.str());
  return 0;
}

struct VerifyArgs {
  std::vector<std::string> graphs, ps, checks = {"all"};
  std::vector<int> qs;
  std::vector<double> eps = {0.25, 0.5};
  double tol = -1.0;
  std::size_t cap_states = 4096, cap_joint = 300000, cap_mix = 1024;
  int k_max = 8;
  std::string out;
};

int cmd_verify(const VerifyArgs& a) {
  rcgap::SuiteOptions opts;
  opts.caps = {a.cap_states, a.cap_joint};
  opts.mix_states_cap = a.cap_mix;
  opts.k_max = a.k_max;
  opts.eps_list = a.eps;
  if (a.tol > 0.0) {
    opts.tol.equality = a.tol;
    opts.tol.inequality = a.tol;
  }

  std::vector<rcgap::Instance> corpus;
  if (a.graphs.empty() && a.ps.empty() && a.qs.empty()) {
    corpus = rcgap::default_corpus();
  } else {
    std::vector<std::string> graphs = a.graphs;
    if (graphs.empty()) graphs = {"edge", "path:3", "cycle:3", "cycle:4", "complete:4", "grid:2", "grid:3"};
    std::vector<int> qs = a.qs.empty() ? std::vector<int>{2, 3} : a.qs;
    std::vector<std::string> ps =
        a.ps.empty() ? std::vector<std::string>{"0.2", "0.5", "self-dual", "0.8"} : a.ps;
    for (const auto& gs : graphs)
      for (int q : qs)
        for (const auto& p : ps)
          corpus.push_back({gs, rcgap::ModelParams(parse_p(p, q), q)});
  }

  std::vector<std::string> checks = a.checks;
  if (checks.size() == 1 && checks[0] == "all") checks = rcgap::check_names();

  rcgap::SuiteReport report = rcgap::run_suite(corpus, checks, opts);

  std::ostringstream text;
  text << header("cmd=verify instances=" + std::to_string(corpus.size()));
  text << report.to_jsonl();
  emit(a.out, text.str());
  std::cerr << report.summary();
  return report.all_pass() ? 0 : 1;
}

struct SweepArgs {
  std::string graph, grid = "0.1:0.9:0.1", out;
  int q = 2;
  std::vector<std::string> dynamics = {"sw", "hb", "sb"};
  std::size_t cap_states = 4096, cap_joint = 300000;
};

int cmd_sweep(const SweepArgs& a) {
  double lo, hi, step;
  if (std::sscanf(a.grid.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0.0)
    throw rcgap::ParseError("bad p-grid '" + a.grid + "' (expected a:b:step)");
  rcgap::Graph g = rcgap::graph_from_spec(a.graph);
  rcgap::Caps caps{a.cap_states, a.cap_joint};

  std::ostringstream text;
  text << header("cmd=sweep graph=" + a.graph + " q=" + std::to_string(a.q) + " grid=" + a.grid);
  text << "p,gap_sw,gap_hb,gap_sb,ratio_sw_hb\n";
  for (double p = lo; p <= hi + 1e-12; p += step) {
    rcgap::ModelParams params(p, a.q);
    double gsw = rcgap::spectral_gap(rcgap::sw_matrix_direct(g, params, caps)).gap;
    double ghb = rcgap::spectral_gap(rcgap::hb_matrix(g, params, caps)).gap;
    double gsb = rcgap::spectral_gap(rcgap::sb_matrix(g, params, caps)).gap;
    text << fmt(p) << "," << fmt(gsw) << "," << fmt(ghb) << "," << fmt(gsb) << ","
         << fmt(gsw / ghb) << "\n";
  }
  emit(a.out, text.str());
  return 0;
}

struct SampleRunArgs {
  std::string graph, p = "0.5", dynamics = "sw", out;
  int q = 2;
  long steps = 1000, burnin = 0, thin = 1;
  std::uint64_t seed = 0;
  std::vector<std::string> observables;  // accepted for CLI stability; all are emitted
};

int cmd_sample_run(const SampleRunArgs& a) {
  rcgap::Graph g = rcgap::graph_from_spec(a.graph);
  rcgap::RunSpec spec;
  spec.graph_spec = a.graph;
  spec.params = rcgap::ModelParams(parse_p(a.p, a.q), a.q);
  spec.dynamics = rcgap::dynamics_from_string(a.dynamics);
  spec.steps = a.steps;
  spec.burnin = a.burnin;
  spec.seed = a.seed;
  spec.thin = a.thin;
  rcgap::ChainTrace trace = rcgap::run_chain(g, spec);
  emit(a.out, rcgap::chain_trace_csv(trace, spec));
  return 0;
}

struct SampleCheckRowArgs {
  std::string graph, p = "0.5", dynamics = "sb", out;
  int q = 2;
  std::uint64_t state = 0, seed = 0;
  long samples = 100000;
  std::size_t cap_states = 4096, cap_joint = 300000;
};

int cmd_sample_check_row(const SampleCheckRowArgs& a) {
  rcgap::Graph g = rcgap::graph_from_spec(a.graph);
  rcgap::ModelParams params(parse_p(a.p, a.q), a.q);
  rcgap::Caps caps{a.cap_states, a.cap_joint};
  rcgap::Dynamics d = rcgap::dynamics_from_string(a.dynamics);

  std::vector<double> emp =
      rcgap::empirical_row(g, params, d, a.state, a.samples, a.seed);
  rcgap::WeightedMatrix pm = build_chain(g, params, a.dynamics, caps);
  if (a.state >= static_cast<std::uint64_t>(pm.mat.rows))
    throw rcgap::Error("--state out of range");
  std::vector<double> exact(pm.mat.cols);
  for (int j = 0; j < pm.mat.cols; ++j) exact[j] = pm.mat(static_cast<int>(a.state), j);
  double tv = rcgap::total_variation(emp, exact);

  std::ostringstream text;
  text << header("cmd=sample-check-row graph=" + a.graph + " dynamics=" + a.dynamics +
                 " p=" + fmt(params.p) + " q=" + std::to_string(a.q) +
                 " state=" + std::to_string(a.state) + " samples=" + std::to_string(a.samples) +
                 " seed=" + std::to_string(a.seed));
  text << "tv " << fmt(tv) << "\n";
  emit(a.out, text.str());
  return 0;
}

struct DualArgs {
  std::string graph, out;
};

int cmd_dual(const DualArgs& a) {
  rcgap::Graph g = rcgap::graph_from_spec(a.graph);
  rcgap::DualMap dm = rcgap::dual_graph(g);
  nlohmann::ordered_json j;
  j["version"] = kVersion;
  j["graph"] = a.graph;
  j["dual"] = nlohmann::ordered_json::parse(rcgap::graph_to_json(dm.dual));
  // pairing: dual edge i crosses primal edge i; faces listed as primal
  // edge-end cycles per dual vertex
  nlohmann::ordered_json faces = nlohmann::ordered_json::array();
  for (const auto& f : dm.face_of_dual_vertex) faces.push_back(f);
  j["faces"] = faces;
  emit(a.out, j.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact spectral-gap toolkit for random-cluster Markov chains"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  ExactGapArgs eg;
  CLI::App* exact = app.add_subcommand("exact", "exact computations on small state spaces");
  exact->require_subcommand(1);
  CLI::App* gap = exact->add_subcommand("gap", "spectral gap of one chain");
  gap->add_option("--graph", eg.graph)->required();
  gap->add_option("--p", eg.p);
  gap->add_option("--q", eg.q);
  gap->add_option("--dynamics", eg.dynamics);
  gap->add_option("--format", eg.format)->check(CLI::IsMember({"text", "json"}));
  gap->add_option("--cap-states", eg.cap_states);
  gap->add_option("--cap-joint", eg.cap_joint);
  gap->add_option("--out", eg.out);

  VerifyArgs va;
  CLI::App* verify = app.add_subcommand("verify", "run the verification suite");
  verify->add_option("--graph", va.graphs);
  verify->add_option("--p", va.ps);
  verify->add_option("--q", va.qs);
  verify->add_option("--checks", va.checks);
  verify->add_option("--tol", va.tol);
  verify->add_option("--eps", va.eps);
  verify->add_option("--k-max", va.k_max);
  verify->add_option("--cap-states", va.cap_states);
  verify->add_option("--cap-joint", va.cap_joint);
  verify->add_option("--cap-mix", va.cap_mix);
  verify->add_option("--out", va.out);

  SweepArgs sa;
  CLI::App* sweep = app.add_subcommand("sweep", "gap vs p sweep, CSV output");
  sweep->add_option("--graph", sa.graph)->required();
  sweep->add_option("--q", sa.q);
  sweep->add_option("--p", sa.grid);
  sweep->add_option("--dynamics", sa.dynamics);
  sweep->add_option("--cap-states", sa.cap_states);
  sweep->add_option("--cap-joint", sa.cap_joint);
  sweep->add_option("--out", sa.out);

  CLI::App* sample = app.add_subcommand("sample", "Markov chain sampling");
  sample->require_subcommand(1);

  SampleRunArgs ra;
  CLI::App* run = sample->add_subcommand("run", "run a chain and emit observables as CSV");
  run->add_option("--graph", ra.graph)->required();
  run->add_option("--p", ra.p);
  run->add_option("--q", ra.q);
  run->add_option("--dynamics", ra.dynamics);
  run->add_option("--steps", ra.steps);
  run->add_option("--burnin", ra.burnin);
  run->add_option("--seed", ra.seed);
  run->add_option("--thin", ra.thin);
  run->add_option("--observables", ra.observables);
  run->add_option("--out", ra.out);

  SampleCheckRowArgs ca;
  CLI::App* check_row =
      sample->add_subcommand("check-row", "empirical one-step row vs the exact matrix row");
  check_row->add_option("--graph", ca.graph)->required();
  check_row->add_option("--p", ca.p);
  check_row->add_option("--q", ca.q);
  check_row->add_option("--dynamics", ca.dynamics);
  check_row->add_option("--state", ca.state);
  check_row->add_option("--samples", ca.samples);
  check_row->add_option("--seed", ca.seed);
  check_row->add_option("--cap-states", ca.cap_states);
  check_row->add_option("--cap-joint", ca.cap_joint);
  check_row->add_option("--out", ca.out);

  DualArgs da;
  CLI::App* dual = app.add_subcommand("dual", "planar dual of an embedded graph");
  dual->add_option("--graph", da.graph)->required();
  dual->add_option("--out", da.out);

  try {
    app.parse(argc, argv);
    if (gap->parsed()) return cmd_exact_gap(eg);
    if (verify->parsed()) return cmd_verify(va);
    if (sweep->parsed()) return cmd_sweep(sa);
    if (run->parsed()) return cmd_sample_run(ra);
    if (check_row->parsed()) return cmd_sample_check_row(ca);
    if (dual->parsed()) return cmd_dual(da);
    return 2;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const rcgap::CapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const rcgap::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
