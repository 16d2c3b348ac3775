#include "treecorr/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "treecorr/errors.hpp"
#include "treecorr/parallel.hpp"
#include "treecorr/tree_patch.hpp"

namespace treecorr {

void PairMoments::merge(const PairMoments& other) {
  count += other.count;
  sum_x += other.sum_x;
  sum_y += other.sum_y;
  sum_xx += other.sum_xx;
  sum_yy += other.sum_yy;
  sum_xy += other.sum_xy;
}

double PairMoments::covariance() const {
  return sum_xy / count - (sum_x / count) * (sum_y / count);
}

double PairMoments::variance_x() const {
  return std::max(0.0, sum_xx / count - (sum_x / count) * (sum_x / count));
}

double PairMoments::variance_y() const {
  return std::max(0.0, sum_yy / count - (sum_y / count) * (sum_y / count));
}

std::optional<double> PairMoments::correlation() const {
  const double vx = variance_x();
  const double vy = variance_y();
  if (count < 2.0 || vx <= 0.0 || vy <= 0.0) return std::nullopt;
  return covariance() / std::sqrt(vx * vy);
}

EstimateWithError batch_estimate(double pooled, const std::vector<double>& batch_values,
                                 std::size_t samples, std::uint64_t seed) {
  EstimateWithError out;
  out.estimate = pooled;
  out.samples = samples;
  out.seed = seed;
  const auto b = static_cast<double>(batch_values.size());
  if (batch_values.size() >= 2) {
    double mean = 0.0;
    for (double x : batch_values) mean += x;
    mean /= b;
    double ss = 0.0;
    for (double x : batch_values) ss += (x - mean) * (x - mean);
    out.standard_error = std::sqrt(ss / (b - 1.0)) / std::sqrt(b);
  }
  return out;
}

namespace {

EstimateWithError summarize(const std::vector<PairMoments>& per_batch, std::size_t samples,
                            std::uint64_t seed, const std::string& what) {
  PairMoments total;
  std::vector<double> batch_values;
  for (const auto& m : per_batch) {
    total.merge(m);
    if (const auto c = m.correlation()) batch_values.push_back(*c);
  }
  const auto pooled = total.correlation();
  if (!pooled) throw DegenerateVarianceError(what + ": rule output has zero variance");
  if (batch_values.size() < 2) {
    throw DegenerateVarianceError(what + ": too few batches with nonzero variance");
  }
  return batch_estimate(*pooled, batch_values, samples, seed);
}

std::size_t effective_batches(std::size_t samples, std::size_t batches) {
  return std::max<std::size_t>(1, std::min(samples, batches));
}

}  // namespace

EstimateWithError mc_correlation(const LocalRule& rule, int d, int k, std::size_t samples,
                                 std::uint64_t seed, std::size_t batches) {
  require(samples >= 1000, "mc_correlation: need at least 1000 samples");
  require(k >= 0, "mc_correlation: k must be nonnegative");
  const TreePatch patch(d, k, rule.radius);
  const std::vector<Vertex> ends{patch.v(), patch.w()};
  const RuleEvaluator evaluator(rule, patch, ends);
  batches = effective_batches(samples, batches);
  std::vector<PairMoments> per_batch(batches);
  parallel_for(batches, [&](std::size_t b) {
    Engine engine = chunk_engine(seed, b);
    std::vector<double> labels(static_cast<std::size_t>(patch.size()));
    auto scratch = evaluator.make_scratch();
    PairMoments acc;
    const auto range = chunk_range(samples, batches, b);
    for (std::size_t s = range.begin; s < range.end; ++s) {
      fill_labels(engine, rule.label_model, labels);
      acc.add(evaluator.evaluate(0, labels, scratch), evaluator.evaluate(1, labels, scratch));
    }
    per_batch[b] = acc;
  });
  return summarize(per_batch, samples, seed, "mc_correlation");
}

Rational ballsum_corr_exact(int d, int r, int k) {
  require(d >= 3, "ballsum_corr_exact: degree must be at least 3");
  require(r >= 0 && k >= 0, "ballsum_corr_exact: r and k must be nonnegative");
  if (k == 0) return Rational(1);
  if (k > 2 * r) return Rational(0);
  const BigInt dd(d);
  const BigInt denominator = dd * ipow(BigInt(d - 1), static_cast<unsigned>(r)) - 2;
  if (k % 2 == 0) {
    // Overlap is the radius-(r - k/2) ball around the path midpoint.
    const auto overlap_radius = static_cast<unsigned>(r - k / 2);
    return Rational(dd * ipow(BigInt(d - 1), overlap_radius) - 2, denominator);
  }
  // Two middle vertices; each contributes a branch of depth r - (k+1)/2.
  const auto exponent = static_cast<unsigned>(r - (k - 1) / 2);
  return Rational(2 * (ipow(BigInt(d - 1), exponent) - 1), denominator);
}

double ballsum_limit(int d, int k) {
  require(d >= 3, "ballsum_limit: degree must be at least 3");
  require(k >= 1, "ballsum_limit: k must be at least 1");
  if (k % 2 == 0) return std::pow(d - 1.0, -0.5 * k);
  return 2.0 / d * std::pow(d - 1.0, -0.5 * (k - 1));
}

BoundCheckReport bound_check(const LocalRule& rule, int d, int k, std::size_t samples,
                             std::uint64_t seed) {
  BoundCheckReport report;
  report.k = k;
  report.measured = mc_correlation(rule, d, k, samples, seed);
  report.bound = corr_bound(d, k);
  report.margin = report.bound - std::abs(report.measured.estimate);
  report.passed = std::abs(report.measured.estimate) <=
                  report.bound + 4.0 * report.measured.standard_error;
  return report;
}

std::vector<BoundCheckReport> bound_check_sequence(const CorrelationSequence& sequence) {
  std::vector<BoundCheckReport> out;
  for (std::size_t k = 0; k < sequence.values.size(); ++k) {
    BoundCheckReport report;
    report.k = static_cast<int>(k);
    report.measured.estimate = sequence.values[k];
    report.bound = corr_bound(sequence.d, static_cast<int>(k));
    report.margin = report.bound - std::abs(sequence.values[k]);
    report.passed = std::abs(sequence.values[k]) <= report.bound + 1e-9;
    out.push_back(report);
  }
  return out;
}

GraphTreeReport graph_vs_tree_check(const LocalRule& rule, const FiniteRegularGraph& graph, int k,
                                    std::size_t samples, std::uint64_t seed, std::size_t batches) {
  require(k >= 1, "graph_vs_tree_check: k must be at least 1");
  const int needed = k + 2 * rule.radius + 2;
  const int g = girth(graph);
  require(g >= needed, "graph_vs_tree_check: girth " + std::to_string(g) + " is below k + 2r + 2 = " +
                           std::to_string(needed));
  require(samples >= 1000, "graph_vs_tree_check: need at least 1000 pair samples");

  std::vector<Vertex> all(static_cast<std::size_t>(graph.n()));
  for (Vertex u = 0; u < graph.n(); ++u) all[u] = u;
  const RuleEvaluator evaluator(rule, graph, all);
  batches = effective_batches(samples, batches);
  std::vector<PairMoments> per_batch(batches);
  parallel_for(batches, [&](std::size_t b) {
    Engine engine = chunk_engine(seed, b);
    std::vector<double> labels(static_cast<std::size_t>(graph.n()));
    fill_labels(engine, rule.label_model, labels);
    std::vector<double> outputs(labels.size());
    auto scratch = evaluator.make_scratch();
    for (std::size_t u = 0; u < outputs.size(); ++u) outputs[u] = evaluator.evaluate(u, labels, scratch);

    std::uniform_int_distribution<Vertex> pick_vertex(0, graph.n() - 1);
    std::vector<Vertex> sphere;
    PairMoments acc;
    const auto range = chunk_range(samples, batches, b);
    for (std::size_t s = range.begin; s < range.end; ++s) {
      const Vertex v = pick_vertex(engine);
      const auto dist = bfs_distances(graph, v, k);
      sphere.clear();
      for (Vertex u = 0; u < graph.n(); ++u) {
        if (dist[u] == k) sphere.push_back(u);
      }
      std::uniform_int_distribution<std::size_t> pick_end(0, sphere.size() - 1);
      const Vertex w = sphere[pick_end(engine)];
      acc.add(outputs[v], outputs[w]);
    }
    per_batch[b] = acc;
  });

  GraphTreeReport report;
  report.k = k;
  report.graph = summarize(per_batch, samples, seed, "graph_vs_tree_check");
  report.tree = mc_correlation(rule, graph.d(), k, samples, mix_seed(seed, 0x7ee));
  report.combined_se = std::hypot(report.graph.standard_error, report.tree.standard_error);
  report.passed = std::abs(report.graph.estimate - report.tree.estimate) <= 4.0 * report.combined_se;
  return report;
}

}  // namespace treecorr
