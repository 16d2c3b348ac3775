#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "treecorr/errors.hpp"
#include "treecorr/graph.hpp"
#include "treecorr/local_rules.hpp"
#include "treecorr/tree_patch.hpp"

using namespace treecorr;

namespace {

double mean_of(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

std::vector<Vertex> all_vertices(int n) {
  std::vector<Vertex> out(static_cast<std::size_t>(n));
  std::iota(out.begin(), out.end(), 0);
  return out;
}

}  // namespace

TEST_CASE("ball shape layout") {
  const BallShape shape(3, 2);
  CHECK(shape.size() == 10);
  CHECK(shape.children(0).size() == 3);
  for (Vertex i = 1; i <= 3; ++i) {
    CHECK(shape.parent(i) == 0);
    CHECK(shape.depth(i) == 1);
    CHECK(shape.children(i).size() == 2);
  }
  for (Vertex i = 4; i < 10; ++i) {
    CHECK(shape.depth(i) == 2);
    CHECK(shape.children(i).empty());
  }
  CHECK(ball_shape(4, 3)->size() == ball_size(4, 3));
  CHECK(ball_shape(4, 3) == ball_shape(4, 3));
}

TEST_CASE("labelings are deterministic per seed") {
  const auto a = iid_labeling(1000, LabelModel::uniform01, 7);
  const auto b = iid_labeling(1000, LabelModel::uniform01, 7);
  const auto c = iid_labeling(1000, LabelModel::uniform01, 8);
  CHECK(a == b);
  CHECK(a != c);
  for (double x : a) CHECK((x >= 0.0 && x < 1.0));

  const auto signs = iid_labeling(100000, LabelModel::sign, 3);
  for (double x : signs) CHECK(std::abs(x) == 1.0);
  // Fair signs: mean has sd 1/sqrt(n) ~ 0.003.
  CHECK(std::abs(mean_of(signs)) < 0.015);
  const auto u = iid_labeling(100000, LabelModel::uniform01, 3);
  CHECK(std::abs(mean_of(u) - 0.5) < 0.005);
}

TEST_CASE("minlabel fires with probability 1/(d+1)") {
  for (int d : {3, 4}) {
    const TreePatch patch(d, 0, 1);
    const auto rule = rule_minlabel();
    const std::vector<Vertex> at{patch.v()};
    const RuleEvaluator eval(rule, patch, at);
    auto scratch = eval.make_scratch();
    Engine engine(11);
    std::vector<double> labels(static_cast<std::size_t>(patch.size()));
    const int trials = 200000;
    int hits = 0;
    for (int t = 0; t < trials; ++t) {
      fill_labels(engine, rule.label_model, labels);
      hits += eval.evaluate(0, labels, scratch) == 1.0 ? 1 : 0;
    }
    const double p = 1.0 / (d + 1);
    const double se = std::sqrt(p * (1 - p) / trials);
    CHECK(std::abs(hits / static_cast<double>(trials) - p) < 5 * se);
  }
}

TEST_CASE("minlabel output is an independent set") {
  // Radius-1 balls are trees only without triangles.
  const auto graph = random_regular_graph(500, 3, 4, 4);
  const auto rule = rule_minlabel();
  const auto out = apply_rule(rule, graph, iid_labeling(graph, rule.label_model, 9),
                              all_vertices(graph.n()));
  for (const auto& [u, v] : graph.edges()) CHECK(out[u] + out[v] <= 1.0);
  CHECK(std::accumulate(out.begin(), out.end(), 0.0) > 0.0);
}

TEST_CASE("a rule only sees its radius-r ball") {
  const TreePatch patch(3, 6, 1);
  const auto rule = rule_ballsum(1);
  auto labels = iid_labeling(patch, rule.label_model, 5);
  const std::vector<Vertex> at{patch.v(), patch.w()};
  const auto before = apply_rule(rule, patch, labels, at);
  for (Vertex u = 0; u < patch.size(); ++u) {
    if (patch.dist_to_v(u) > 1) labels[u] = -labels[u];
  }
  const auto after = apply_rule(rule, patch, labels, at);
  CHECK(after[0] == before[0]);
}

TEST_CASE("ball sum value and moments") {
  const TreePatch patch(3, 0, 2);
  const auto rule = rule_ballsum(2);
  std::vector<double> labels(static_cast<std::size_t>(patch.size()), 1.0);
  labels[3] = -1.0;
  const std::vector<Vertex> at{patch.v()};
  CHECK(apply_rule(rule, patch, labels, at)[0] == doctest::Approx(8.0 / std::sqrt(10.0)));
  REQUIRE(rule.moments);
  CHECK(rule.is_normalized());
  CHECK_FALSE(rule_minlabel().is_normalized());
}

TEST_CASE("standardize rescales output and moments") {
  const double d = 3;
  const double p = 1.0 / (d + 1);
  const auto rule = standardize(rule_minlabel(), p, std::sqrt(p * (1 - p)));
  CHECK(rule.is_normalized());
  CHECK(rule.radius == 1);
  const TreePatch patch(3, 0, 1);
  const std::vector<double> labels{0.1, 0.5, 0.6, 0.7};
  const std::vector<Vertex> at{patch.v()};
  CHECK(apply_rule(rule, patch, labels, at)[0] == doctest::Approx((1 - p) / std::sqrt(p * (1 - p))));
}

TEST_CASE("ball embedding rejects balls that are not trees or are cut off") {
  const auto shape = ball_shape(3, 1);
  CHECK_THROWS_AS(ball_embedding(complete_graph(4), 0, *shape), BallError);  // leaf-leaf edges
  CHECK_NOTHROW(ball_embedding(petersen_graph(), 0, *shape));
  // Girth 5 closes 5-cycles through leaf-leaf edges of the radius-2 ball.
  CHECK_THROWS_AS(ball_embedding(petersen_graph(), 0, *ball_shape(3, 2)), BallError);
  CHECK_NOTHROW(ball_embedding(random_regular_graph(100, 3, 6, 1), 0, *ball_shape(3, 2)));
  CHECK_THROWS_AS(ball_embedding(cycle_graph(6), 0, *shape), PreconditionError);  // degree 2
  // A radius-1 patch cannot host a radius-2 ball.
  const TreePatch patch(3, 4, 1);
  CHECK_THROWS_AS(ball_embedding(patch, patch.v(), *ball_shape(3, 2)), BallError);
  CHECK_NOTHROW(ball_embedding(patch, patch.v(), *shape));
}

TEST_CASE("ball embedding maps canonical vertices to host vertices at the right depth") {
  const TreePatch patch(4, 3, 2);
  const auto shape = ball_shape(4, 2);
  const auto emb = ball_embedding(patch, patch.w(), *shape);
  REQUIRE(static_cast<int>(emb.size()) == shape->size());
  for (Vertex i = 0; i < shape->size(); ++i) {
    CHECK(patch.dist_to_w(emb[i]) == shape->depth(i));
    if (i > 0) CHECK(patch.distance(emb[i], emb[shape->parent(i)]) == 1);
  }
}

TEST_CASE("random ball automorphisms preserve the tree") {
  const auto shape = ball_shape(3, 3);
  Engine engine(2);
  for (int t = 0; t < 50; ++t) {
    const auto perm = random_ball_automorphism(*shape, engine);
    CHECK(perm[0] == 0);
    std::vector<int> seen(perm.size(), 0);
    for (Vertex i = 0; i < shape->size(); ++i) {
      ++seen[perm[i]];
      CHECK(shape->depth(perm[i]) == shape->depth(i));
      if (i > 0) CHECK(perm[shape->parent(i)] == shape->parent(perm[i]));
    }
    for (int s : seen) CHECK(s == 1);
  }
}

TEST_CASE("automorphism invariance probe") {
  CHECK(check_automorphism_invariance(rule_minlabel(), 3, 200, 1).passed);
  CHECK(check_automorphism_invariance(rule_ballsum(2), 3, 200, 1).passed);
  const auto bad = check_automorphism_invariance(rule_first_child_label(), 3, 200, 1);
  CHECK_FALSE(bad.passed);
  CHECK(bad.original_value != bad.permuted_value);
  CHECK_FALSE(bad.original_labels.empty());
}
