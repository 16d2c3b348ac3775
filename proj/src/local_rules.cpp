#include "treecorr/local_rules.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <utility>

#include "treecorr/errors.hpp"

namespace treecorr {

BallShape::BallShape(int d, int r) : d_(d), r_(r) {
  require(d >= 2, "ball shape: degree must be at least 2");
  require(r >= 0, "ball shape: radius must be nonnegative");
  parent_.push_back(-1);
  depth_.push_back(0);
  children_.emplace_back();
  std::vector<Vertex> frontier{0};
  for (int depth = 1; depth <= r; ++depth) {
    std::vector<Vertex> next;
    for (Vertex p : frontier) {
      const int fanout = (p == 0) ? d : d - 1;
      for (int c = 0; c < fanout; ++c) {
        const auto id = static_cast<Vertex>(parent_.size());
        parent_.push_back(p);
        depth_.push_back(depth);
        children_.emplace_back();
        children_[p].push_back(id);
        next.push_back(id);
      }
    }
    frontier = std::move(next);
  }
}

std::shared_ptr<const BallShape> ball_shape(int d, int r) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const BallShape>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{d, r}];
  if (!slot) slot = std::make_shared<const BallShape>(d, r);
  return slot;
}

LocalRule rule_minlabel() {
  LocalRule rule;
  rule.name = "minlabel";
  rule.radius = 1;
  rule.label_model = LabelModel::uniform01;
  rule.evaluate = [](const LabeledBall& ball) {
    const double root = ball.labels[0];
    for (std::size_t i = 1; i < ball.labels.size(); ++i) {
      if (!(root < ball.labels[i])) return 0.0;
    }
    return 1.0;
  };
  return rule;
}

LocalRule rule_ballsum(int r) {
  require(r >= 0, "ballsum: radius must be nonnegative");
  LocalRule rule;
  rule.name = "ballsum";
  rule.radius = r;
  rule.label_model = LabelModel::sign;
  rule.evaluate = [](const LabeledBall& ball) {
    // +-1 labels: the sum is an exact integer whatever the summation order.
    const double sum = std::accumulate(ball.labels.begin(), ball.labels.end(), 0.0);
    return sum / std::sqrt(static_cast<double>(ball.labels.size()));
  };
  rule.moments = Moments{0.0, 1.0};
  return rule;
}

LocalRule rule_first_child_label() {
  LocalRule rule;
  rule.name = "first-child";
  rule.radius = 1;
  rule.label_model = LabelModel::uniform01;
  rule.evaluate = [](const LabeledBall& ball) { return ball.labels.at(1); };
  return rule;
}

LocalRule standardize(const LocalRule& rule, double mean, double sd) {
  require(sd > 0.0, "standardize: standard deviation must be positive");
  LocalRule out = rule;
  out.name = rule.name + "-std";
  out.evaluate = [inner = rule.evaluate, mean, sd](const LabeledBall& ball) {
    return (inner(ball) - mean) / sd;
  };
  out.moments = Moments{0.0, 1.0};
  return out;
}

void fill_labels(Engine& engine, LabelModel model, std::span<double> out) {
  if (model == LabelModel::sign) {
    for (double& x : out) x = random_sign(engine);
  } else {
    for (double& x : out) x = uniform01(engine);
  }
}

std::vector<double> iid_labeling(int vertex_count, LabelModel model, std::uint64_t seed) {
  require(vertex_count >= 0, "iid_labeling: negative vertex count");
  std::vector<double> labels(static_cast<std::size_t>(vertex_count));
  Engine engine(mix_seed(seed, 0));
  fill_labels(engine, model, labels);
  return labels;
}

std::vector<double> iid_labeling(const TreePatch& patch, LabelModel model, std::uint64_t seed) {
  return iid_labeling(patch.size(), model, seed);
}

std::vector<double> iid_labeling(const FiniteRegularGraph& graph, LabelModel model,
                                 std::uint64_t seed) {
  return iid_labeling(graph.n(), model, seed);
}

namespace {

template <typename Neighbors>
std::vector<Vertex> embed_ball(int host_size, int host_degree, Neighbors&& neighbors, Vertex center,
                               const BallShape& shape) {
  require(center >= 0 && center < host_size, "ball embedding: vertex out of range");
  require(host_degree == shape.d(), "ball embedding: host degree differs from the rule's degree");
  std::vector<Vertex> map(static_cast<std::size_t>(shape.size()), -1);
  std::vector<Vertex> host_parent(static_cast<std::size_t>(shape.size()), -1);
  std::map<Vertex, Vertex> seen;  // host vertex -> canonical index
  map[0] = center;
  seen[center] = 0;
  for (Vertex i = 0; i < shape.size(); ++i) {
    const auto children = shape.children(i);
    if (children.empty()) continue;
    const Vertex x = map[i];
    std::size_t next_child = 0;
    for (Vertex y : neighbors(x)) {
      if (y == host_parent[i]) continue;
      if (next_child >= children.size()) {
        throw BallError("ball around vertex " + std::to_string(center) + " has excess degree");
      }
      if (seen.contains(y)) {
        throw BallError("ball around vertex " + std::to_string(center) + " is not a tree");
      }
      const Vertex c = children[next_child++];
      map[c] = y;
      host_parent[c] = x;
      seen[y] = c;
    }
    if (next_child != children.size()) {
      throw BallError("ball around vertex " + std::to_string(center) +
                      " is truncated by the host");
    }
  }
  // Edges between two leaves would close a cycle of length 2r + 1.
  for (Vertex i = 0; i < shape.size(); ++i) {
    if (!shape.children(i).empty()) continue;
    for (Vertex y : neighbors(map[i])) {
      if (y == host_parent[i]) continue;
      if (seen.contains(y)) {
        throw BallError("ball around vertex " + std::to_string(center) + " is not a tree");
      }
    }
  }
  return map;
}

}  // namespace

std::vector<Vertex> ball_embedding(const TreePatch& patch, Vertex center, const BallShape& shape) {
  return embed_ball(patch.size(), patch.d(), [&](Vertex x) { return patch.neighbors(x); }, center,
                    shape);
}

std::vector<Vertex> ball_embedding(const FiniteRegularGraph& graph, Vertex center,
                                   const BallShape& shape) {
  return embed_ball(graph.n(), graph.d(), [&](Vertex x) { return graph.neighbors(x); }, center,
                    shape);
}

RuleEvaluator::RuleEvaluator(const LocalRule& rule, const TreePatch& patch,
                             std::span<const Vertex> at)
    : rule_(&rule), shape_(ball_shape(patch.d(), rule.radius)) {
  for (Vertex u : at) embeddings_.push_back(ball_embedding(patch, u, *shape_));
}

RuleEvaluator::RuleEvaluator(const LocalRule& rule, const FiniteRegularGraph& graph,
                             std::span<const Vertex> at)
    : rule_(&rule), shape_(ball_shape(graph.d(), rule.radius)) {
  for (Vertex u : at) embeddings_.push_back(ball_embedding(graph, u, *shape_));
}

LabeledBall RuleEvaluator::make_scratch() const {
  return LabeledBall{shape_, std::vector<double>(static_cast<std::size_t>(shape_->size()))};
}

double RuleEvaluator::evaluate(std::size_t i, std::span<const double> labels,
                               LabeledBall& scratch) const {
  const auto& map = embeddings_[i];
  for (std::size_t j = 0; j < map.size(); ++j) scratch.labels[j] = labels[map[j]];
  return rule_->evaluate(scratch);
}

namespace {

template <typename Host>
std::vector<double> apply_rule_on(const LocalRule& rule, const Host& host, int host_size,
                                  std::span<const double> labels, std::span<const Vertex> at) {
  require(static_cast<int>(labels.size()) == host_size, "apply_rule: one label per host vertex");
  const RuleEvaluator evaluator(rule, host, at);
  auto scratch = evaluator.make_scratch();
  std::vector<double> out(at.size());
  for (std::size_t i = 0; i < at.size(); ++i) out[i] = evaluator.evaluate(i, labels, scratch);
  return out;
}

}  // namespace

std::vector<double> apply_rule(const LocalRule& rule, const TreePatch& patch,
                               std::span<const double> labels, std::span<const Vertex> at) {
  return apply_rule_on(rule, patch, patch.size(), labels, at);
}

std::vector<double> apply_rule(const LocalRule& rule, const FiniteRegularGraph& graph,
                               std::span<const double> labels, std::span<const Vertex> at) {
  return apply_rule_on(rule, graph, graph.n(), labels, at);
}

std::vector<Vertex> random_ball_automorphism(const BallShape& shape, Engine& engine) {
  std::vector<Vertex> perm(static_cast<std::size_t>(shape.size()), -1);
  perm[0] = 0;
  for (Vertex i = 0; i < shape.size(); ++i) {
    const auto from = shape.children(i);
    const auto to = shape.children(perm[i]);
    std::vector<Vertex> order(to.begin(), to.end());
    std::shuffle(order.begin(), order.end(), engine);
    for (std::size_t j = 0; j < from.size(); ++j) perm[from[j]] = order[j];
  }
  return perm;
}

InvarianceReport check_automorphism_invariance(const LocalRule& rule, int d, int trials,
                                               std::uint64_t seed) {
  require(trials >= 1, "invariance check: need at least one trial");
  const auto shape = ball_shape(d, rule.radius);
  Engine engine(mix_seed(seed, 0));
  InvarianceReport report;
  LabeledBall original{shape, std::vector<double>(static_cast<std::size_t>(shape->size()))};
  LabeledBall permuted = original;
  for (int t = 0; t < trials; ++t) {
    fill_labels(engine, rule.label_model, original.labels);
    const auto perm = random_ball_automorphism(*shape, engine);
    for (std::size_t i = 0; i < perm.size(); ++i) permuted.labels[perm[i]] = original.labels[i];
    const double a = rule.evaluate(original);
    const double b = rule.evaluate(permuted);
    report.trials_run = t + 1;
    if (a != b) {
      report.passed = false;
      report.original_labels = original.labels;
      report.permuted_labels = permuted.labels;
      report.original_value = a;
      report.permuted_value = b;
      return report;
    }
  }
  return report;
}

}  // namespace treecorr
