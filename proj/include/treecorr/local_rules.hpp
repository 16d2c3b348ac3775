#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "treecorr/graph.hpp"
#include "treecorr/parallel.hpp"
#include "treecorr/tree_patch.hpp"

namespace treecorr {

// Radius-r ball of T_d in canonical BFS order: index 0 is the root, the root
// has d children and every other non-leaf vertex has d - 1.
class BallShape {
 public:
  BallShape(int d, int r);

  int d() const { return d_; }
  int r() const { return r_; }
  int size() const { return static_cast<int>(parent_.size()); }
  Vertex parent(Vertex i) const { return parent_[i]; }
  int depth(Vertex i) const { return depth_[i]; }
  std::span<const Vertex> children(Vertex i) const { return children_[i]; }

 private:
  int d_;
  int r_;
  std::vector<Vertex> parent_;
  std::vector<int> depth_;
  std::vector<std::vector<Vertex>> children_;
};

// Shared, immutable shape for (d, r).
std::shared_ptr<const BallShape> ball_shape(int d, int r);

struct LabeledBall {
  std::shared_ptr<const BallShape> shape;
  std::vector<double> labels;  // labels[i] belongs to canonical vertex i
};

enum class LabelModel { uniform01, sign };

// Exact output moments under i.i.d. labels, when known.
struct Moments {
  double mean;
  double variance;
};

struct LocalRule {
  std::string name;
  int radius = 0;
  LabelModel label_model = LabelModel::uniform01;
  std::function<double(const LabeledBall&)> evaluate;
  std::optional<Moments> moments;

  bool is_normalized() const {
    return moments && moments->mean == 0.0 && moments->variance == 1.0;
  }
};

// 1 iff the root label is strictly smaller than every other label of the
// closed radius-1 ball; ties give 0. Uniform [0,1) labels.
LocalRule rule_minlabel();

// Y = |S_r|^(-1/2) * sum of the ball's labels under fair +-1 labels.
LocalRule rule_ballsum(int r);

// Label of the root's first child in canonical order. Not invariant under
// ball automorphisms; exists to exercise the invariance probe.
LocalRule rule_first_child_label();

// (output - mean) / sd, with moments recorded as {0, 1}.
LocalRule standardize(const LocalRule& rule, double mean, double sd);

// One independent draw per vertex, in vertex order.
void fill_labels(Engine& engine, LabelModel model, std::span<double> out);
std::vector<double> iid_labeling(int vertex_count, LabelModel model, std::uint64_t seed);
std::vector<double> iid_labeling(const TreePatch& patch, LabelModel model, std::uint64_t seed);
std::vector<double> iid_labeling(const FiniteRegularGraph& graph, LabelModel model,
                                 std::uint64_t seed);

// Host vertex for every canonical ball index when the radius-r ball around
// `center` is complete and a tree; throws BallError otherwise.
std::vector<Vertex> ball_embedding(const TreePatch& patch, Vertex center, const BallShape& shape);
std::vector<Vertex> ball_embedding(const FiniteRegularGraph& graph, Vertex center,
                                   const BallShape& shape);

// Precomputed embeddings of a rule's ball at a fixed set of host vertices.
class RuleEvaluator {
 public:
  RuleEvaluator(const LocalRule& rule, const TreePatch& patch, std::span<const Vertex> at);
  RuleEvaluator(const LocalRule& rule, const FiniteRegularGraph& graph, std::span<const Vertex> at);

  std::size_t count() const { return embeddings_.size(); }
  // Output at the i-th requested vertex; `scratch` is reused between calls.
  double evaluate(std::size_t i, std::span<const double> labels, LabeledBall& scratch) const;
  LabeledBall make_scratch() const;

 private:
  const LocalRule* rule_;
  std::shared_ptr<const BallShape> shape_;
  std::vector<std::vector<Vertex>> embeddings_;
};

std::vector<double> apply_rule(const LocalRule& rule, const TreePatch& patch,
                               std::span<const double> labels, std::span<const Vertex> at);
std::vector<double> apply_rule(const LocalRule& rule, const FiniteRegularGraph& graph,
                               std::span<const double> labels, std::span<const Vertex> at);

// Uniformly random root-preserving automorphism: perm[i] is the image of i.
std::vector<Vertex> random_ball_automorphism(const BallShape& shape, Engine& engine);

struct InvarianceReport {
  bool passed = true;
  int trials_run = 0;
  // Populated for the first violation only.
  std::vector<double> original_labels;
  std::vector<double> permuted_labels;
  double original_value = 0.0;
  double permuted_value = 0.0;
};

// Evaluates the rule on random labelings and on random automorphic images of
// them; any inexact match is a violation.
InvarianceReport check_automorphism_invariance(const LocalRule& rule, int d, int trials,
                                               std::uint64_t seed);

}  // namespace treecorr
