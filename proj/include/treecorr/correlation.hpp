#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "treecorr/chebyshev.hpp"
#include "treecorr/graph.hpp"
#include "treecorr/local_rules.hpp"
#include "treecorr/rational.hpp"

namespace treecorr {

// Batches per Monte Carlo run. Batch b is driven by chunk_engine(seed, b).
inline constexpr std::size_t kDefaultBatches = 100;

// Running sums for a pair of outputs; merging is plain addition.
struct PairMoments {
  double count = 0.0;
  double sum_x = 0.0;
  double sum_y = 0.0;
  double sum_xx = 0.0;
  double sum_yy = 0.0;
  double sum_xy = 0.0;

  void add(double x, double y) {
    count += 1.0;
    sum_x += x;
    sum_y += y;
    sum_xx += x * x;
    sum_yy += y * y;
    sum_xy += x * y;
  }
  void merge(const PairMoments& other);
  double covariance() const;
  double variance_x() const;
  double variance_y() const;
  // Plug-in Pearson correlation; nullopt when either variance is zero.
  std::optional<double> correlation() const;
};

struct EstimateWithError {
  double estimate = 0.0;
  double standard_error = 0.0;  // sd of the batch estimates / sqrt(batches)
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

// Pooled value plus batch standard error from per-batch values.
EstimateWithError batch_estimate(double pooled, const std::vector<double>& batch_values,
                                 std::size_t samples, std::uint64_t seed);

// Pearson correlation of the rule's outputs at the two ends of a distance-k
// pair in T_d, from `samples` i.i.d. labelings of the (d, k, r) tree patch.
// Throws DegenerateVarianceError when an output never varies.
EstimateWithError mc_correlation(const LocalRule& rule, int d, int k, std::size_t samples,
                                 std::uint64_t seed, std::size_t batches = kDefaultBatches);

// Exact correlation of the ball-sum rule: |S_r(v) cap S_r(w)| / |S_r(v)|.
// Zero once the balls are disjoint (k > 2r).
Rational ballsum_corr_exact(int d, int r, int k);

// r -> infinity limit of ballsum_corr_exact: (d-1)^(-k/2) for even k,
// (2/d)(d-1)^(-(k-1)/2) for odd k.
double ballsum_limit(int d, int k);

struct BoundCheckReport {
  int k = 0;
  EstimateWithError measured;
  double bound = 0.0;
  double margin = 0.0;  // bound - |estimate|
  bool passed = false;  // |estimate| <= bound + 4 SE
};

BoundCheckReport bound_check(const LocalRule& rule, int d, int k, std::size_t samples,
                             std::uint64_t seed);

// Same comparison for a theoretical sequence (SE = 0, slack 1e-9).
std::vector<BoundCheckReport> bound_check_sequence(const CorrelationSequence& sequence);

struct GraphTreeReport {
  int k = 0;
  EstimateWithError graph;  // pairs at distance k on the labelled graph
  EstimateWithError tree;   // mc_correlation on the tree patch
  double combined_se = 0.0;
  bool passed = false;  // |graph - tree| <= 4 * combined_se
};

// Requires girth(graph) >= k + 2r + 2 and rejects the input before sampling
// otherwise. `samples` counts vertex pairs; each batch draws one labelling of
// the whole graph and samples/batches uniformly random distance-k pairs.
GraphTreeReport graph_vs_tree_check(const LocalRule& rule, const FiniteRegularGraph& graph, int k,
                                    std::size_t samples, std::uint64_t seed,
                                    std::size_t batches = kDefaultBatches);

}  // namespace treecorr
