#include "rcgap/graph.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>

#include <nlohmann/json.hpp>

namespace rcgap {

using json = nlohmann::json;

void DisjointSet::reset(int n) {
  parent_.resize(n);
  std::iota(parent_.begin(), parent_.end(), 0);
  size_.assign(n, 1);
  n_components_ = n;
}

int DisjointSet::find(int x) {
  int root = x;
  while (parent_[root] != root) root = parent_[root];
  while (parent_[x] != root) {
    int next = parent_[x];
    parent_[x] = root;
    x = next;
  }
  return root;
}

bool DisjointSet::unite(int x, int y) {
  int rx = find(x), ry = find(y);
  if (rx == ry) return false;
  if (size_[rx] < size_[ry]) std::swap(rx, ry);
  parent_[ry] = rx;
  size_[rx] += size_[ry];
  --n_components_;
  return true;
}

void Graph::validate() const {
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
      throw Error("edge " + std::to_string(i) + ": endpoint out of range");
  }
  if (!rotations.empty()) {
    if (static_cast<int>(rotations.size()) != n)
      throw Error("rotations: need one cycle per vertex");
    std::vector<int> seen(2 * edges.size(), 0);
    for (int v = 0; v < n; ++v) {
      for (int h : rotations[v]) {
        if (h < 0 || h >= 2 * m())
          throw Error("rotations: edge-end id " + std::to_string(h) + " out of range");
        if (end_vertex(h) != v)
          throw Error("rotations: edge-end " + std::to_string(h) + " not incident to vertex " +
                      std::to_string(v));
        if (seen[h]++)
          throw Error("rotations: edge-end " + std::to_string(h) + " appears twice");
      }
    }
    for (int h = 0; h < 2 * m(); ++h)
      if (!seen[h]) throw Error("rotations: edge-end " + std::to_string(h) + " missing");
  }
}

Graph parse_graph(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("graph file: invalid JSON: ") + e.what());
  }
  Graph g;
  try {
    g.n = j.at("vertices").get<int>();
    for (const auto& pair : j.at("edges")) {
      if (!pair.is_array() || pair.size() != 2)
        throw ParseError("graph file: each edge must be a [u,v] pair");
      g.edges.push_back({pair[0].get<int>(), pair[1].get<int>()});
    }
    if (j.contains("rotations")) {
      for (const auto& cyc : j.at("rotations"))
        g.rotations.push_back(cyc.get<std::vector<int>>());
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("graph file: ") + e.what());
  }
  if (g.n < 0) throw ParseError("graph file: negative vertex count");
  try {
    g.validate();
  } catch (const Error& e) {
    throw ParseError(std::string("graph file: ") + e.what());
  }
  return g;
}

std::string graph_to_json(const Graph& g) {
  json j;
  j["vertices"] = g.n;
  json edges = json::array();
  for (const Edge& e : g.edges) edges.push_back({e.u, e.v});
  j["edges"] = edges;
  if (g.has_rotations()) j["rotations"] = g.rotations;
  return j.dump();
}

namespace {

// Rotation cycles from an ordered list of (vertex, end) incidences per vertex.
void attach_rotations(Graph& g, const std::vector<std::vector<int>>& ends_per_vertex) {
  g.rotations = ends_per_vertex;
  g.validate();
}

Graph make_grid(int L) {
  Graph g;
  g.n = L * L;
  auto idx = [L](int row, int col) { return row * L + col; };  // row=u1-1, col=u2-1
  // lexicographic by (min endpoint, max endpoint)
  for (int v = 0; v < g.n; ++v) {
    int row = v / L, col = v % L;
    if (col + 1 < L) g.edges.push_back({v, idx(row, col + 1)});
    if (row + 1 < L) g.edges.push_back({v, idx(row + 1, col)});
  }
  std::stable_sort(g.edges.begin(), g.edges.end(), [](const Edge& a, const Edge& b) {
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  });
  // end lookup: edge index between ordered pair
  std::map<std::pair<int, int>, int> eidx;
  for (int i = 0; i < g.m(); ++i) eidx[{g.edges[i].u, g.edges[i].v}] = i;
  auto end_id = [&](int from, int to) {
    auto it = eidx.find({std::min(from, to), std::max(from, to)});
    int e = it->second;
    return (g.edges[e].u == from) ? 2 * e : 2 * e + 1;
  };
  // counterclockwise: right, up, left, down (col+1, row+1, col-1, row-1)
  std::vector<std::vector<int>> rot(g.n);
  for (int v = 0; v < g.n; ++v) {
    int row = v / L, col = v % L;
    if (col + 1 < L) rot[v].push_back(end_id(v, idx(row, col + 1)));
    if (row + 1 < L) rot[v].push_back(end_id(v, idx(row + 1, col)));
    if (col - 1 >= 0) rot[v].push_back(end_id(v, idx(row, col - 1)));
    if (row - 1 >= 0) rot[v].push_back(end_id(v, idx(row - 1, col)));
  }
  attach_rotations(g, rot);
  return g;
}

}  // namespace

Graph generate(const std::string& family, int size) {
  if (size < 1) throw Error("generate: size must be >= 1");
  if (family == "edge") {
    Graph g;
    g.n = 2;
    g.edges.push_back({0, 1});
    attach_rotations(g, {{0}, {1}});
    return g;
  }
  if (family == "path") {
    Graph g;
    g.n = size;
    for (int i = 0; i + 1 < size; ++i) g.edges.push_back({i, i + 1});
    std::vector<std::vector<int>> rot(g.n);
    for (int i = 0; i + 1 < size; ++i) {
      rot[i].push_back(2 * i);
      rot[i + 1].push_back(2 * i + 1);
    }
    attach_rotations(g, rot);
    return g;
  }
  if (family == "cycle") {
    if (size < 3) throw Error("generate: cycle needs size >= 3");
    Graph g;
    g.n = size;
    for (int i = 0; i < size; ++i) g.edges.push_back({i, (i + 1) % size});
    std::vector<std::vector<int>> rot(g.n);
    for (int i = 0; i < size; ++i) {
      int prev = (i + size - 1) % size;
      rot[i] = {2 * i, 2 * prev + 1};  // outgoing edge, then incoming edge
    }
    attach_rotations(g, rot);
    return g;
  }
  if (family == "complete") {
    Graph g;
    g.n = size;
    for (int u = 0; u < size; ++u)
      for (int v = u + 1; v < size; ++v) g.edges.push_back({u, v});
    return g;  // no embedding supplied
  }
  if (family == "grid") return make_grid(size);
  if (family == "grid-dual") return dual_graph(make_grid(size)).dual;
  throw Error("generate: unknown family '" + family + "'");
}

Graph graph_from_spec(const std::string& spec) {
  if (spec == "edge") return generate("edge", 1);
  auto colon = spec.find(':');
  if (colon != std::string::npos) {
    std::string family = spec.substr(0, colon);
    std::string rest = spec.substr(colon + 1);
    if (family == "file") {
      std::ifstream in(rest);
      if (!in) throw ParseError("graph spec: cannot open file '" + rest + "'");
      std::stringstream ss;
      ss << in.rdbuf();
      return parse_graph(ss.str());
    }
    int size = 0;
    try {
      size = std::stoi(rest);
    } catch (...) {
      throw ParseError("graph spec: bad size in '" + spec + "'");
    }
    return generate(family, size);
  }
  throw ParseError("graph spec: unknown spec '" + spec + "'");
}

std::vector<int> component_labels(const Graph& g, EdgeSubset a, int* n_components) {
  DisjointSet ds(g.n);
  for (int e = 0; e < g.m(); ++e)
    if (a >> e & 1) ds.unite(g.edges[e].u, g.edges[e].v);
  std::vector<int> label(g.n, -1);
  int c = 0;
  for (int v = 0; v < g.n; ++v) {
    int r = ds.find(v);
    if (label[r] < 0) label[r] = c++;
    label[v] = label[r];
  }
  if (n_components) *n_components = c;
  return label;
}

int count_components(const Graph& g, EdgeSubset a) {
  DisjointSet ds(g.n);
  for (int e = 0; e < g.m(); ++e)
    if (a >> e & 1) ds.unite(g.edges[e].u, g.edges[e].v);
  return ds.components();
}

bool connected_in(const Graph& g, EdgeSubset a, int u, int v) {
  if (u == v) return true;
  DisjointSet ds(g.n);
  for (int e = 0; e < g.m(); ++e)
    if (a >> e & 1) ds.unite(g.edges[e].u, g.edges[e].v);
  return ds.find(u) == ds.find(v);
}

DualMap dual_graph(const Graph& g) {
  if (!g.has_rotations()) throw Error("dual_graph: rotation system required");
  g.validate();
  if (count_components(g, g.full_mask()) != 1) throw Error("dual_graph: graph must be connected");

  const int m = g.m();
  // position of each edge-end within its vertex's rotation cycle
  std::vector<int> cyc_of(2 * m, -1), pos_of(2 * m, -1);
  for (int v = 0; v < g.n; ++v)
    for (std::size_t i = 0; i < g.rotations[v].size(); ++i) {
      cyc_of[g.rotations[v][i]] = v;
      pos_of[g.rotations[v][i]] = static_cast<int>(i);
    }
  auto next_cw = [&](int h) {
    const auto& cyc = g.rotations[cyc_of[h]];
    int i = pos_of[h];
    return cyc[(i + cyc.size() - 1) % cyc.size()];
  };

  // Face tracing: h -> next clockwise end after the twin of h.
  std::vector<int> face_of(2 * m, -1);
  std::vector<std::vector<int>> faces;
  for (int h0 = 0; h0 < 2 * m; ++h0) {
    if (face_of[h0] >= 0) continue;
    std::vector<int> orbit;
    int h = h0;
    do {
      if (face_of[h] >= 0) throw Error("dual_graph: inconsistent rotation system");
      face_of[h] = static_cast<int>(faces.size());
      orbit.push_back(h);
      h = next_cw(Graph::twin(h));
    } while (h != h0);
    faces.push_back(std::move(orbit));
  }

  DualMap d;
  d.face_of_dual_vertex = faces;
  d.dual.n = static_cast<int>(faces.size());
  for (int e = 0; e < m; ++e)
    d.dual.edges.push_back({face_of[2 * e], face_of[2 * e + 1]});
  // Dual rotation at a face vertex: the ends in face-trace order. Dual end id
  // of primal end h: 2e if h sits at d.dual.edges[e].u-side, i.e. h == 2e maps
  // to the face of 2e which is edges[e].u of the dual, so the ids carry over.
  d.dual.rotations.assign(d.dual.n, {});
  for (int f = 0; f < d.dual.n; ++f) {
    for (int h : faces[f]) d.dual.rotations[f].push_back(h);
  }
  d.dual.validate();

  // Euler check: n - m + f = 2 for connected planar G.
  if (g.n - m + d.dual.n != 2) throw Error("dual_graph: embedding violates Euler's formula");
  return d;
}

EdgeSubset dual_config(const DualMap& d, EdgeSubset a) {
  int m = d.dual.m();
  EdgeSubset full = (m == 64) ? ~EdgeSubset(0) : ((EdgeSubset(1) << m) - 1);
  return ~a & full;
}

namespace {

// Adjacency count matrix (self-loops counted once on the diagonal).
std::vector<std::vector<int>> adjacency_counts(const Graph& g) {
  std::vector<std::vector<int>> c(g.n, std::vector<int>(g.n, 0));
  for (const Edge& e : g.edges) {
    if (e.u == e.v)
      c[e.u][e.u] += 1;
    else {
      c[e.u][e.v] += 1;
      c[e.v][e.u] += 1;
    }
  }
  return c;
}

}  // namespace

bool isomorphic(const Graph& a, const Graph& b) {
  if (a.n != b.n || a.m() != b.m()) return false;
  auto ca = adjacency_counts(a), cb = adjacency_counts(b);
  std::vector<int> perm(a.n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (int i = 0; i < a.n && ok; ++i)
      for (int j = i; j < a.n && ok; ++j)
        if (ca[i][j] != cb[perm[i]][perm[j]]) ok = false;
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

}  // namespace rcgap
