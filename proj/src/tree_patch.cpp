#include "treecorr/tree_patch.hpp"

#include <algorithm>
#include <numeric>

#include "treecorr/errors.hpp"

namespace treecorr {

namespace {

struct HullVertex {
  Vertex parent;  // -1 for v
  int dist_v;
  int dist_w;
};

}  // namespace

TreePatch::TreePatch(int d, int k, int r) : d_(d), k_(k), r_(r) {
  require(d >= 2, "tree patch: degree must be at least 2");
  require(k >= 0 && r >= 0, "tree patch: k and r must be nonnegative");

  std::vector<HullVertex> hull;
  // The v-w path; path vertex i has hull id i.
  for (int i = 0; i <= k; ++i) hull.push_back({i == 0 ? -1 : i - 1, i, k - i});

  // Off-path branches: a vertex j steps away from path vertex i is within
  // distance r of v or w iff j <= r - min(i, k - i).
  for (int i = 0; i <= k; ++i) {
    const int budget = r - std::min(i, k - i);
    if (budget < 1) continue;
    const int path_degree = (k == 0) ? 0 : ((i == 0 || i == k) ? 1 : 2);
    std::vector<Vertex> frontier;
    for (int b = 0; b < d - path_degree; ++b) {
      hull.push_back({i, i + 1, k - i + 1});
      frontier.push_back(static_cast<Vertex>(hull.size() - 1));
    }
    for (int depth = 2; depth <= budget; ++depth) {
      std::vector<Vertex> next;
      for (Vertex parent : frontier) {
        for (int c = 0; c < d - 1; ++c) {
          hull.push_back({parent, hull[parent].dist_v + 1, hull[parent].dist_w + 1});
          next.push_back(static_cast<Vertex>(hull.size() - 1));
        }
      }
      frontier = std::move(next);
    }
  }

  // Renumber: patch vertices in creation order, hidden path vertices last.
  const auto in_patch = [&](const HullVertex& h) { return std::min(h.dist_v, h.dist_w) <= r; };
  std::vector<Vertex> new_id(hull.size());
  Vertex next_id = 0;
  for (std::size_t h = 0; h < hull.size(); ++h) {
    if (in_patch(hull[h])) new_id[h] = next_id++;
  }
  size_ = next_id;
  for (std::size_t h = 0; h < hull.size(); ++h) {
    if (!in_patch(hull[h])) new_id[h] = next_id++;
  }

  const std::size_t total = hull.size();
  hull_parent_.assign(total, -1);
  hull_depth_.assign(total, 0);
  dist_v_.assign(static_cast<std::size_t>(size_), 0);
  dist_w_.assign(static_cast<std::size_t>(size_), 0);
  adjacency_.assign(static_cast<std::size_t>(size_), {});
  for (std::size_t h = 0; h < total; ++h) {
    const Vertex id = new_id[h];
    hull_parent_[id] = hull[h].parent < 0 ? -1 : new_id[hull[h].parent];
    hull_depth_[id] = hull[h].dist_v;
    if (id < size_) {
      dist_v_[id] = hull[h].dist_v;
      dist_w_[id] = hull[h].dist_w;
    }
  }
  for (Vertex id = 0; id < static_cast<Vertex>(total); ++id) {
    const Vertex parent = hull_parent_[id];
    if (parent >= 0 && id < size_ && parent < size_) {
      adjacency_[id].push_back(parent);
      adjacency_[parent].push_back(id);
    }
  }
  w_ = new_id[static_cast<std::size_t>(k)];
}

int TreePatch::distance(Vertex a, Vertex b) const {
  int steps = 0;
  while (hull_depth_[a] > hull_depth_[b]) {
    a = hull_parent_[a];
    ++steps;
  }
  while (hull_depth_[b] > hull_depth_[a]) {
    b = hull_parent_[b];
    ++steps;
  }
  while (a != b) {
    a = hull_parent_[a];
    b = hull_parent_[b];
    steps += 2;
  }
  return steps;
}

int TreePatch::diameter() const {
  int best = 0;
  for (Vertex a = 0; a < size_; ++a) {
    for (Vertex b = a + 1; b < size_; ++b) best = std::max(best, distance(a, b));
  }
  return best;
}

std::vector<Edge> TreePatch::edges() const {
  std::vector<Edge> out;
  for (Vertex u = 0; u < size_; ++u) {
    for (Vertex x : adjacency_[u]) {
      if (u < x) out.emplace_back(u, x);
    }
  }
  return out;
}

}  // namespace treecorr
