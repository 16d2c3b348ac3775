#pragma once

#include <span>
#include <vector>

#include "treecorr/graph.hpp"

namespace treecorr {

// The vertices of T_d within distance r of v or of w, where dist(v, w) = k.
//
// Patch vertices are numbered 0..size()-1 with v = 0. When k > 2r + 1 the two
// balls are not joined inside the patch; the connecting path is still kept
// internally so that distance() reports true distances in T_d.
class TreePatch {
 public:
  TreePatch(int d, int k, int r);

  int d() const { return d_; }
  int k() const { return k_; }
  int r() const { return r_; }
  int size() const { return size_; }
  Vertex v() const { return 0; }
  Vertex w() const { return w_; }

  // Neighbours inside the patch (the patch is an induced forest of T_d).
  std::span<const Vertex> neighbors(Vertex u) const { return adjacency_[u]; }
  int dist_to_v(Vertex u) const { return dist_v_[u]; }
  int dist_to_w(Vertex u) const { return dist_w_[u]; }
  const std::vector<int>& dist_to_v() const { return dist_v_; }
  const std::vector<int>& dist_to_w() const { return dist_w_; }

  // Distance in T_d between two patch vertices.
  int distance(Vertex a, Vertex b) const;
  int diameter() const;
  std::vector<Edge> edges() const;

 private:
  int d_;
  int k_;
  int r_;
  int size_ = 0;
  Vertex w_ = 0;
  std::vector<std::vector<Vertex>> adjacency_;
  std::vector<int> dist_v_;
  std::vector<int> dist_w_;
  // Hull tree (patch vertices first, hidden path vertices after), rooted at v.
  std::vector<Vertex> hull_parent_;
  std::vector<int> hull_depth_;
};

}  // namespace treecorr
