#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rcgap {

/// Generic error raised by rcgap operations.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Input that could not be parsed (graph files, CLI specs).
struct ParseError : Error {
  using Error::Error;
};

/// A state space would exceed a configured cap.
struct CapError : Error {
  using Error::Error;
};

/// Edge subset A <= E as a bitmask over edge indices (bit i <=> edge i in A).
using EdgeSubset = std::uint64_t;

struct Edge {
  int u = 0;
  int v = 0;
};

/// Finite multigraph. Parallel edges and self-loops are allowed.
/// Edge indices are 0..m-1 in input order and stable under all operations.
///
/// An optional rotation system encodes a planar embedding: for each vertex a
/// counterclockwise cyclic order of its incident edge-ends, where edge-end
/// 2*i sits at edges[i].u and 2*i+1 at edges[i].v. A self-loop contributes
/// both of its ends to its vertex's cycle.
struct Graph {
  int n = 0;
  std::vector<Edge> edges;
  std::vector<std::vector<int>> rotations;  // empty => no embedding given

  int m() const { return static_cast<int>(edges.size()); }
  bool has_rotations() const { return !rotations.empty(); }

  int end_vertex(int h) const {
    const Edge& e = edges[h >> 1];
    return (h & 1) ? e.v : e.u;
  }
  static int end_edge(int h) { return h >> 1; }
  static int twin(int h) { return h ^ 1; }

  EdgeSubset full_mask() const { return (m() == 64) ? ~EdgeSubset(0) : ((EdgeSubset(1) << m()) - 1); }

  /// Throws Error if endpoints are out of range or the rotation system is
  /// inconsistent with the incidence structure.
  void validate() const;
};

/// Disjoint-set union with path compression and union by size.
class DisjointSet {
 public:
  explicit DisjointSet(int n = 0) { reset(n); }
  void reset(int n);
  int find(int x);
  /// Returns true if the union merged two distinct sets.
  bool unite(int x, int y);
  int components() const { return n_components_; }
  int size_of(int x) { return size_[find(x)]; }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
  int n_components_ = 0;
};

/// Parse the JSON graph file format:
///   {"vertices": n, "edges": [[u,v],...], "rotations": [[end ids ccw],...]}
Graph parse_graph(const std::string& text);

/// Serialize in the same JSON format (rotations included when present).
std::string graph_to_json(const Graph& g);

/// Named families: edge, path:n, cycle:n, complete:n, grid:L, grid-dual:L.
/// grid:L is the LxL square lattice with the standard planar rotation system
/// (counterclockwise: right, up, left, down), vertex (u1,u2) -> (u1-1)*L+(u2-1),
/// edges sorted lexicographically by (min endpoint, max endpoint).
Graph generate(const std::string& family, int size);

/// Graph spec strings accepted by the CLI:
/// edge | path:n | cycle:n | complete:n | grid:L | grid-dual:L | file:PATH
Graph graph_from_spec(const std::string& spec);

/// Number of connected components of (V, A), isolated vertices included.
int count_components(const Graph& g, EdgeSubset a);

/// Component label per vertex (labels are 0..c-1 in order of first vertex).
/// Returns the number of components in *n_components.
std::vector<int> component_labels(const Graph& g, EdgeSubset a, int* n_components);

/// True iff u and v are in the same component of (V, A); u == v is true.
bool connected_in(const Graph& g, EdgeSubset a, int u, int v);

/// Planar dual of an embedded graph. Dual edge i corresponds to primal
/// edge i (identity pairing); |E dual| == |E|.
struct DualMap {
  Graph dual;  // carries a rotation system of its own
  /// For each dual vertex, the edge-ends of the primal graph traced around
  /// the corresponding face.
  std::vector<std::vector<int>> face_of_dual_vertex;
};

/// Face tracing on the rotation system. Requires g connected with rotations.
DualMap dual_graph(const Graph& g);

/// Dual configuration: e in A <=> e-dual not in A-dual. Pure bitmask
/// complement within the m-bit mask (edge pairing is the identity).
EdgeSubset dual_config(const DualMap& d, EdgeSubset a);

/// Brute-force multigraph isomorphism (intended for small n only).
bool isomorphic(const Graph& a, const Graph& b);

}  // namespace rcgap
