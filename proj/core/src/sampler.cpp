#include "rcgap/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <numeric>
#include <sstream>

namespace rcgap {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw Error("Rng::below: n must be positive");
  // rejection sampling keeps the draw exactly uniform
  std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                        std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = eng_();
  } while (x >= limit);
  return x % n;
}

Dynamics dynamics_from_string(const std::string& s) {
  if (s == "sw") return Dynamics::sw;
  if (s == "sw-potts") return Dynamics::sw_potts;
  if (s == "hb") return Dynamics::hb;
  if (s == "sb") return Dynamics::sb;
  throw ParseError("unknown dynamics '" + s + "' (expected sw, sw-potts, hb, sb)");
}

std::string to_string(Dynamics d) {
  switch (d) {
    case Dynamics::sw: return "sw";
    case Dynamics::sw_potts: return "sw-potts";
    case Dynamics::hb: return "hb";
    case Dynamics::sb: return "sb";
  }
  return "?";
}

ChainState initial_state(const Graph& g, Dynamics d) {
  ChainState s;
  if (d == Dynamics::sw_potts)
    s.spins.assign(g.n, 1);
  else
    s.edge_in.assign(g.m(), 0);
  return s;
}

namespace {

// Component labels over the currently included edges; reuses the arena.
void label_components(const Graph& g, const std::vector<std::uint8_t>& edge_in,
                      DisjointSet& ds) {
  ds.reset(g.n);
  for (int e = 0; e < g.m(); ++e)
    if (edge_in[e]) ds.unite(g.edges[e].u, g.edges[e].v);
}

// BFS connectivity between u and v over included edges, ignoring edge `skip`
// (-1 for none).
bool bfs_connected(const Graph& g, const std::vector<std::uint8_t>& edge_in, int u, int v,
                   int skip, const std::vector<std::vector<std::pair<int, int>>>& adj,
                   std::vector<int>& visit_mark, int& visit_token, std::vector<int>& queue) {
  if (u == v) return true;
  ++visit_token;
  queue.clear();
  queue.push_back(u);
  visit_mark[u] = visit_token;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int x = queue[head];
    for (const auto& [e, y] : adj[x]) {
      if (e == skip || !edge_in[e]) continue;
      if (visit_mark[y] == visit_token) continue;
      if (y == v) return true;
      visit_mark[y] = visit_token;
      queue.push_back(y);
    }
  }
  return false;
}

struct Workspace {
  int n = 0;
  std::vector<Edge> edges;  // copy used to detect a different graph
  DisjointSet ds;
  std::vector<int> colors;
  std::vector<std::vector<std::pair<int, int>>> adj;  // vertex -> (edge, other end)
  std::vector<int> visit_mark;
  int visit_token = 0;
  std::vector<int> queue;

  explicit Workspace(const Graph& g)
      : n(g.n), edges(g.edges), ds(g.n), colors(g.n), adj(g.n), visit_mark(g.n, 0) {
    for (int e = 0; e < g.m(); ++e) {
      adj[g.edges[e].u].push_back({e, g.edges[e].v});
      if (g.edges[e].u != g.edges[e].v) adj[g.edges[e].v].push_back({e, g.edges[e].u});
    }
  }

  bool matches(const Graph& g) const {
    if (n != g.n || edges.size() != g.edges.size()) return false;
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (edges[e].u != g.edges[e].u || edges[e].v != g.edges[e].v) return false;
    return true;
  }
};

thread_local std::unique_ptr<Workspace> tl_ws;

Workspace& workspace(const Graph& g) {
  if (!tl_ws || !tl_ws->matches(g)) tl_ws = std::make_unique<Workspace>(g);
  return *tl_ws;
}

}  // namespace

void sw_step(const Graph& g, const ModelParams& params, ChainState& state, Rng& rng) {
  Workspace& ws = workspace(g);
  label_components(g, state.edge_in, ws.ds);
  // colors drawn in vertex order for roots, then inherited
  for (int v = 0; v < g.n; ++v)
    if (ws.ds.find(v) == v) ws.colors[v] = static_cast<int>(rng.below(params.q));
  for (int e = 0; e < g.m(); ++e) {
    int cu = ws.colors[ws.ds.find(g.edges[e].u)];
    int cv = ws.colors[ws.ds.find(g.edges[e].v)];
    state.edge_in[e] = (cu == cv) ? (rng.uniform() < params.p) : 0;
  }
  ++state.step;
}

void sw_potts_step(const Graph& g, const ModelParams& params, ChainState& state, Rng& rng) {
  Workspace& ws = workspace(g);
  ws.ds.reset(g.n);
  for (int e = 0; e < g.m(); ++e) {
    if (state.spins[g.edges[e].u] == state.spins[g.edges[e].v] && rng.uniform() < params.p)
      ws.ds.unite(g.edges[e].u, g.edges[e].v);
  }
  for (int v = 0; v < g.n; ++v)
    if (ws.ds.find(v) == v) ws.colors[v] = 1 + static_cast<int>(rng.below(params.q));
  for (int v = 0; v < g.n; ++v) state.spins[v] = ws.colors[ws.ds.find(v)];
  ++state.step;
}

void hb_step(const Graph& g, const ModelParams& params, ChainState& state, Rng& rng) {
  ++state.step;
  if (rng.uniform() < 0.5) return;  // lazy half
  Workspace& ws = workspace(g);
  int e = static_cast<int>(rng.below(g.m()));
  bool conn = bfs_connected(g, state.edge_in, g.edges[e].u, g.edges[e].v, e, ws.adj,
                            ws.visit_mark, ws.visit_token, ws.queue);
  double alpha = conn ? params.p : params.p / (params.p + params.q * (1.0 - params.p));
  state.edge_in[e] = rng.uniform() < alpha;
}

void sb_step(const Graph& g, const ModelParams& params, ChainState& state, Rng& rng) {
  ++state.step;
  Workspace& ws = workspace(g);
  int e = static_cast<int>(rng.below(g.m()));
  // e itself stays in play: a present edge connects its own endpoints
  bool conn = state.edge_in[e] ||
              bfs_connected(g, state.edge_in, g.edges[e].u, g.edges[e].v, e, ws.adj,
                            ws.visit_mark, ws.visit_token, ws.queue);
  double alpha = conn ? params.p : params.p / params.q;
  state.edge_in[e] = rng.uniform() < alpha;
}

namespace {

ObservableRecord observe(const Graph& g, const ModelParams& params, const ChainState& state,
                         bool potts_side, Workspace& ws) {
  ObservableRecord rec{};
  rec.step = state.step;
  std::vector<std::uint8_t> edge_in;
  const std::vector<std::uint8_t>* edges = &state.edge_in;
  if (potts_side) {
    edge_in.resize(g.m());
    for (int e = 0; e < g.m(); ++e)
      edge_in[e] = state.spins[g.edges[e].u] == state.spins[g.edges[e].v];
    edges = &edge_in;
    std::vector<int> freq(params.q + 1, 0);
    for (int v = 0; v < g.n; ++v) ++freq[state.spins[v]];
    rec.magnetization = double(*std::max_element(freq.begin(), freq.end())) / g.n;
  }
  rec.edges = static_cast<int>(std::count(edges->begin(), edges->end(), 1));
  label_components(g, *edges, ws.ds);
  rec.components = ws.ds.components();
  int largest = 0;
  for (int v = 0; v < g.n; ++v)
    if (ws.ds.find(v) == v) largest = std::max(largest, ws.ds.size_of(v));
  rec.largest = largest;
  return rec;
}

void one_step(const Graph& g, const ModelParams& params, Dynamics d, ChainState& state,
              Rng& rng) {
  switch (d) {
    case Dynamics::sw: sw_step(g, params, state, rng); break;
    case Dynamics::sw_potts: sw_potts_step(g, params, state, rng); break;
    case Dynamics::hb: hb_step(g, params, state, rng); break;
    case Dynamics::sb: sb_step(g, params, state, rng); break;
  }
}

}  // namespace

ChainTrace run_chain(const Graph& g, const RunSpec& spec) {
  if (spec.steps < 1) throw Error("run_chain: steps must be >= 1");
  if (spec.thin < 1) throw Error("run_chain: thin must be >= 1");
  Rng rng(spec.seed);
  ChainState state = initial_state(g, spec.dynamics);
  Workspace& ws = workspace(g);
  ChainTrace trace;
  trace.potts_side = spec.dynamics == Dynamics::sw_potts;
  for (long t = 0; t < spec.burnin; ++t) one_step(g, spec.params, spec.dynamics, state, rng);
  for (long t = 0; t < spec.steps; ++t) {
    one_step(g, spec.params, spec.dynamics, state, rng);
    if ((t + 1) % spec.thin == 0)
      trace.records.push_back(observe(g, spec.params, state, trace.potts_side, ws));
  }
  return trace;
}

std::string chain_trace_csv(const ChainTrace& trace, const RunSpec& spec) {
  std::ostringstream out;
  out << "# generator=" << Rng::kName << " version=" << Rng::kVersion << " seed=" << spec.seed
      << "\n";
  out << "# graph=" << spec.graph_spec << " dynamics=" << to_string(spec.dynamics)
      << " p=" << [&] {
           char buf[32];
           std::snprintf(buf, sizeof buf, "%.17g", spec.params.p);
           return std::string(buf);
         }()
      << " q=" << spec.params.q << " steps=" << spec.steps << " burnin=" << spec.burnin
      << " thin=" << spec.thin << "\n";
  out << (trace.potts_side ? "step,edges,components,largest,magnetization"
                           : "step,edges,components,largest")
      << "\n";
  char buf[32];
  for (const auto& r : trace.records) {
    out << r.step << "," << r.edges << "," << r.components << "," << r.largest;
    if (trace.potts_side) {
      std::snprintf(buf, sizeof buf, "%.17g", r.magnetization);
      out << "," << buf;
    }
    out << "\n";
  }
  return out.str();
}

AutocorrResult autocorrelation(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 100) throw Error("autocorrelation: need at least 100 samples");
  double mean = std::accumulate(series.begin(), series.end(), 0.0) / n;
  double c0 = 0.0;
  for (double x : series) c0 += (x - mean) * (x - mean);
  c0 /= n;
  AutocorrResult res;
  if (c0 <= 0.0) {
    res.zero_variance = true;
    res.tau_int = 0.5;
    res.window = 0;
    return res;
  }
  double tau = 0.5;
  const std::size_t w_max = n / 2;
  for (std::size_t w = 1; w <= w_max; ++w) {
    double cw = 0.0;
    for (std::size_t i = 0; i + w < n; ++i) cw += (series[i] - mean) * (series[i + w] - mean);
    cw /= n;
    tau += cw / c0;
    if (double(w) >= 5.0 * tau) {
      res.tau_int = tau;
      res.window = static_cast<int>(w);
      return res;
    }
  }
  res.tau_int = tau;
  res.window = static_cast<int>(w_max);
  return res;
}

std::vector<double> empirical_row(const Graph& g, const ModelParams& params, Dynamics d,
                                  std::uint64_t start_state, long samples, std::uint64_t seed) {
  Rng rng(seed);
  std::size_t space;
  if (d == Dynamics::sw_potts) {
    space = 1;
    for (int v = 0; v < g.n; ++v) space *= params.q;
  } else {
    if (g.m() > 24) throw CapError("empirical_row: RC space too large to histogram");
    space = std::size_t(1) << g.m();
  }
  if (start_state >= space) throw Error("empirical_row: start state out of range");
  std::vector<double> freq(space, 0.0);
  ChainState state = initial_state(g, d);
  for (long s = 0; s < samples; ++s) {
    // reset to the start state
    if (d == Dynamics::sw_potts) {
      std::uint64_t code = start_state;
      for (int v = 0; v < g.n; ++v) {
        state.spins[v] = static_cast<int>(code % params.q) + 1;
        code /= params.q;
      }
    } else {
      for (int e = 0; e < g.m(); ++e) state.edge_in[e] = (start_state >> e) & 1;
    }
    state.step = 0;
    one_step(g, params, d, state, rng);
    std::uint64_t out = 0;
    if (d == Dynamics::sw_potts) {
      std::uint64_t mult = 1;
      for (int v = 0; v < g.n; ++v) {
        out += std::uint64_t(state.spins[v] - 1) * mult;
        mult *= params.q;
      }
    } else {
      for (int e = 0; e < g.m(); ++e)
        if (state.edge_in[e]) out |= std::uint64_t(1) << e;
    }
    freq[out] += 1.0;
  }
  for (double& f : freq) f /= double(samples);
  return freq;
}

std::vector<double> occupation_histogram(const Graph& g, const ModelParams& params, Dynamics d,
                                         long steps, std::uint64_t seed) {
  if (d == Dynamics::sw_potts) throw Error("occupation_histogram: RC dynamics only");
  if (g.m() > 24) throw CapError("occupation_histogram: RC space too large");
  const std::size_t space = std::size_t(1) << g.m();
  Rng rng(seed);
  ChainState state = initial_state(g, d);
  std::vector<double> freq(space, 0.0);
  for (long t = 0; t < steps; ++t) {
    one_step(g, params, d, state, rng);
    std::uint64_t code = 0;
    for (int e = 0; e < g.m(); ++e)
      if (state.edge_in[e]) code |= std::uint64_t(1) << e;
    freq[code] += 1.0;
  }
  for (double& f : freq) f /= double(steps);
  return freq;
}

double total_variation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("total_variation: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

}  // namespace rcgap
