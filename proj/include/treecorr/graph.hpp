#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace treecorr {

using Vertex = int;
using Edge = std::pair<Vertex, Vertex>;

// Girth of a forest.
inline constexpr int kInfiniteGirth = std::numeric_limits<int>::max();

// Vertices of the radius-r ball in the d-regular tree. For d >= 3 this is
// 1 + d((d-1)^r - 1)/(d-2); d = 2 (the bi-infinite path) gives 2r + 1.
std::int64_t ball_size(int d, int r);

// Vertices at distance exactly k >= 1 from a vertex of T_d: d(d-1)^(k-1).
std::int64_t sphere_size(int d, int k);

// Simple d-regular graph on vertices 0..n-1. Immutable once built.
class FiniteRegularGraph {
 public:
  // Validates regularity and simplicity, and that the girth is at least
  // girth_lower_bound. Throws PreconditionError otherwise.
  FiniteRegularGraph(int n, int d, std::span<const Edge> edges, int girth_lower_bound = 0);

  int n() const { return n_; }
  int d() const { return d_; }
  int girth_lower_bound() const { return girth_lower_bound_; }
  std::span<const Vertex> neighbors(Vertex v) const { return adjacency_[v]; }
  const std::vector<std::vector<Vertex>>& adjacency() const { return adjacency_; }
  std::vector<Edge> edges() const;

 private:
  int n_;
  int d_;
  int girth_lower_bound_;
  std::vector<std::vector<Vertex>> adjacency_;
};

// Shortest cycle length (BFS from every vertex), kInfiniteGirth for forests.
int girth(const FiniteRegularGraph& graph);

bool is_connected(const FiniteRegularGraph& graph);

// BFS distances from `source`, -1 for unreachable or beyond max_depth.
std::vector<int> bfs_distances(const FiniteRegularGraph& graph, Vertex source,
                               int max_depth = std::numeric_limits<int>::max());

struct GenerationOptions {
  int max_attempts = 1000;
};

// Random simple d-regular graph with girth >= min_girth via sequential
// pairing of half-edges. A candidate partner is rejected when joining it
// would create a loop, a multi-edge or a cycle shorter than min_girth; a dead
// end discards the attempt. Throws PreconditionError for odd n*d and
// GenerationError when every attempt dead-ends. Deterministic per seed.
FiniteRegularGraph random_regular_graph(int n, int d, int min_girth, std::uint64_t seed,
                                        GenerationOptions options = {});

// A few fixed graphs used throughout the tests and the CLI examples.
FiniteRegularGraph complete_graph(int n);
FiniteRegularGraph cycle_graph(int n);
FiniteRegularGraph petersen_graph();

// Edge-list text format: first line "n d", then one "u v" pair per line,
// 0-indexed. Throws PreconditionError on malformed input.
FiniteRegularGraph read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const FiniteRegularGraph& graph);

}  // namespace treecorr
