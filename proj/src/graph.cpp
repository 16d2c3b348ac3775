#include "treecorr/graph.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>

#include "treecorr/errors.hpp"
#include "treecorr/parallel.hpp"

namespace treecorr {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw PreconditionError("tree size overflows 64 bits");
  return out;
}

std::int64_t checked_pow(std::int64_t base, int exponent) {
  std::int64_t out = 1;
  for (int i = 0; i < exponent; ++i) out = checked_mul(out, base);
  return out;
}

}  // namespace

std::int64_t ball_size(int d, int r) {
  require(d >= 2, "ball_size: degree must be at least 2");
  require(r >= 0, "ball_size: radius must be nonnegative");
  if (r == 0) return 1;
  if (d == 2) return 2 * static_cast<std::int64_t>(r) + 1;
  return 1 + checked_mul(d, checked_pow(d - 1, r) - 1) / (d - 2);
}

std::int64_t sphere_size(int d, int k) {
  require(d >= 2, "sphere_size: degree must be at least 2");
  require(k >= 1, "sphere_size: distance must be at least 1");
  return checked_mul(d, checked_pow(d - 1, k - 1));
}

FiniteRegularGraph::FiniteRegularGraph(int n, int d, std::span<const Edge> edges,
                                       int girth_lower_bound)
    : n_(n), d_(d), girth_lower_bound_(girth_lower_bound), adjacency_(static_cast<std::size_t>(n)) {
  require(n >= 1, "graph: need at least one vertex");
  require(d >= 1, "graph: degree must be positive");
  require((static_cast<std::int64_t>(n) * d) % 2 == 0, "graph: n*d must be even");
  require(static_cast<std::int64_t>(edges.size()) * 2 == static_cast<std::int64_t>(n) * d,
          "graph: edge count must be n*d/2");
  for (const auto& [u, v] : edges) {
    require(u >= 0 && u < n && v >= 0 && v < n, "graph: vertex id out of range");
    require(u != v, "graph: self-loop");
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
  for (auto& list : adjacency_) {
    require(static_cast<int>(list.size()) == d, "graph: vertex degree differs from d");
    std::sort(list.begin(), list.end());
    require(std::adjacent_find(list.begin(), list.end()) == list.end(), "graph: multi-edge");
  }
  if (girth_lower_bound_ > 3) {
    require(girth(*this) >= girth_lower_bound_, "graph: girth below the recorded lower bound");
  }
}

std::vector<Edge> FiniteRegularGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(n_) * d_ / 2);
  for (Vertex u = 0; u < n_; ++u) {
    for (Vertex v : adjacency_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

std::vector<int> bfs_distances(const FiniteRegularGraph& graph, Vertex source, int max_depth) {
  std::vector<int> dist(static_cast<std::size_t>(graph.n()), -1);
  std::vector<Vertex> frontier{source};
  dist[source] = 0;
  for (int depth = 0; depth < max_depth && !frontier.empty(); ++depth) {
    std::vector<Vertex> next;
    for (Vertex u : frontier) {
      for (Vertex w : graph.neighbors(u)) {
        if (dist[w] < 0) {
          dist[w] = depth + 1;
          next.push_back(w);
        }
      }
    }
    frontier = std::move(next);
  }
  return dist;
}

int girth(const FiniteRegularGraph& graph) {
  const int n = graph.n();
  int best = kInfiniteGirth;
  std::vector<int> dist(static_cast<std::size_t>(n));
  std::vector<Vertex> parent(static_cast<std::size_t>(n));
  std::queue<Vertex> queue;
  for (Vertex root = 0; root < n; ++root) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[root] = 0;
    parent[root] = -1;
    queue = {};
    queue.push(root);
    while (!queue.empty()) {
      const Vertex u = queue.front();
      queue.pop();
      // No shorter cycle through this root can appear past this depth.
      if (best != kInfiniteGirth && 2 * dist[u] >= best) break;
      for (Vertex w : graph.neighbors(u)) {
        if (dist[w] < 0) {
          dist[w] = dist[u] + 1;
          parent[w] = u;
          queue.push(w);
        } else if (w != parent[u]) {
          best = std::min(best, dist[u] + dist[w] + 1);
        }
      }
    }
  }
  return best;
}

bool is_connected(const FiniteRegularGraph& graph) {
  const auto dist = bfs_distances(graph, 0);
  return std::none_of(dist.begin(), dist.end(), [](int x) { return x < 0; });
}

namespace {

// One sequential pairing attempt; false on a dead end.
bool try_pairing(int n, int d, int min_girth, Engine& engine, std::vector<Edge>& edges) {
  std::vector<std::vector<Vertex>> adjacency(static_cast<std::size_t>(n));
  std::vector<Vertex> points;  // unmatched half-edges, labelled by vertex
  points.reserve(static_cast<std::size_t>(n) * d);
  for (Vertex v = 0; v < n; ++v) {
    for (int j = 0; j < d; ++j) points.push_back(v);
  }
  edges.clear();
  // A new edge u-w closes a cycle of length dist(u,w)+1, so every w within
  // distance min_girth-2 of u (u itself included) is forbidden.
  const int forbidden_radius = std::max(1, min_girth - 2);
  std::vector<int> mark(static_cast<std::size_t>(n), -1);
  std::vector<std::size_t> candidates;
  int stamp = 0;
  while (!points.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
    const std::size_t first = pick(engine);
    const Vertex u = points[first];
    std::swap(points[first], points.back());
    points.pop_back();

    ++stamp;
    std::vector<Vertex> frontier{u};
    mark[u] = stamp;
    for (int depth = 0; depth < forbidden_radius && !frontier.empty(); ++depth) {
      std::vector<Vertex> next;
      for (Vertex x : frontier) {
        for (Vertex y : adjacency[x]) {
          if (mark[y] != stamp) {
            mark[y] = stamp;
            next.push_back(y);
          }
        }
      }
      frontier = std::move(next);
    }
    candidates.clear();
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (mark[points[i]] != stamp) candidates.push_back(i);
    }
    if (candidates.empty()) return false;
    std::uniform_int_distribution<std::size_t> pick_partner(0, candidates.size() - 1);
    const std::size_t second = candidates[pick_partner(engine)];
    const Vertex w = points[second];
    std::swap(points[second], points.back());
    points.pop_back();
    adjacency[u].push_back(w);
    adjacency[w].push_back(u);
    edges.emplace_back(std::min(u, w), std::max(u, w));
  }
  return true;
}

}  // namespace

FiniteRegularGraph random_regular_graph(int n, int d, int min_girth, std::uint64_t seed,
                                        GenerationOptions options) {
  require(n >= 1 && d >= 1, "random_regular_graph: n and d must be positive");
  require((static_cast<std::int64_t>(n) * d) % 2 == 0, "random_regular_graph: n*d must be even");
  require(d < n, "random_regular_graph: a simple d-regular graph needs n > d");
  require(min_girth >= 3, "random_regular_graph: min_girth must be at least 3");
  require(options.max_attempts >= 1, "random_regular_graph: need at least one attempt");
  std::vector<Edge> edges;
  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    Engine engine = chunk_engine(seed, static_cast<std::uint64_t>(attempt));
    if (try_pairing(n, d, min_girth, engine, edges)) {
      std::sort(edges.begin(), edges.end());
      return FiniteRegularGraph(n, d, edges, min_girth);
    }
  }
  throw GenerationError("random_regular_graph: no graph with n=" + std::to_string(n) +
                        ", d=" + std::to_string(d) + ", girth>=" + std::to_string(min_girth) +
                        " after " + std::to_string(options.max_attempts) + " attempts");
}

FiniteRegularGraph complete_graph(int n) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  }
  return FiniteRegularGraph(n, n - 1, edges);
}

FiniteRegularGraph cycle_graph(int n) {
  require(n >= 3, "cycle_graph: need n >= 3");
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) edges.emplace_back(u, (u + 1) % n);
  return FiniteRegularGraph(n, 2, edges);
}

FiniteRegularGraph petersen_graph() {
  std::vector<Edge> edges;
  for (Vertex i = 0; i < 5; ++i) {
    edges.emplace_back(i, (i + 1) % 5);          // outer 5-cycle
    edges.emplace_back(i, i + 5);                // spokes
    edges.emplace_back(5 + i, 5 + (i + 2) % 5);  // inner pentagram
  }
  return FiniteRegularGraph(10, 3, edges);
}

FiniteRegularGraph read_edge_list(std::istream& in) {
  std::string line;
  auto next_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      const auto first = out.find_first_not_of(" \t\r");
      if (first != std::string::npos) return true;
    }
    return false;
  };
  require(next_line(line), "edge list: missing header line \"n d\"");
  int n = 0;
  int d = 0;
  {
    std::istringstream header(line);
    std::string extra;
    require(static_cast<bool>(header >> n >> d) && !(header >> extra),
            "edge list: malformed header \"" + line + "\"");
  }
  std::vector<Edge> edges;
  while (next_line(line)) {
    std::istringstream row(line);
    Vertex u = 0;
    Vertex v = 0;
    std::string extra;
    require(static_cast<bool>(row >> u >> v) && !(row >> extra),
            "edge list: malformed edge line \"" + line + "\"");
    edges.emplace_back(u, v);
  }
  return FiniteRegularGraph(n, d, edges);
}

void write_edge_list(std::ostream& out, const FiniteRegularGraph& graph) {
  out << graph.n() << ' ' << graph.d() << '\n';
  for (const auto& [u, v] : graph.edges()) out << u << ' ' << v << '\n';
}

}  // namespace treecorr
