#pragma once

#include <cstdint>

#include "treecorr/graph.hpp"

namespace treecorr {

struct RhoOptions {
  int max_iters = 100000;
  // Stop once ||A^2 v - lambda v|| <= tol * lambda for the top unit Ritz vector v.
  double tol = 1e-8;
  std::uint64_t seed = 1;
};

struct RhoEstimate {
  double value = 0.0;  // largest |eigenvalue| of A on mean-zero vectors
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

inline constexpr int kRhoBlockSize = 8;

// Block power iteration on A^2 (kRhoBlockSize vectors, Rayleigh-Ritz each
// step) with the block re-projected onto the mean-zero subspace; the squared
// operator makes the -lambda end of the spectrum (bipartite graphs) as
// visible as the +lambda end. The result is the square root of the top Ritz
// value, and `residual` is that Ritz pair's residual. Rejects disconnected
// graphs.
RhoEstimate rho_estimate(const FiniteRegularGraph& graph, RhoOptions options = {});

struct SpectralReport {
  int d = 0;
  int n = 0;
  double rho_estimate = 0.0;
  double ramanujan_threshold = 0.0;  // 2 sqrt(d - 1)
  bool is_ramanujan = false;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

// rho <= 2 sqrt(d-1) + tol. Equality counts as Ramanujan.
SpectralReport is_ramanujan(const FiniteRegularGraph& graph, double tol = 1e-6,
                            RhoOptions options = {});

inline constexpr int kMaxSubsetVertices = 16;
inline constexpr int kMaxSubsetWalkLength = 50;

struct SubsetRho {
  double value = 0.0;
  std::uint32_t best_subset = 0;  // bit v set iff v in H
  int best_k = 0;
};

// d * max over proper nonempty H and 1 <= k <= max_k of
// |(p_k(H) - nu(H)) / (1 - nu(H))|^(1/k). H = V is skipped (1 - nu(H) = 0).
SubsetRho rho_via_subsets(const FiniteRegularGraph& graph, int max_k);

// One term of the supremum above.
double subset_term(const FiniteRegularGraph& graph, std::uint32_t subset, int k);

}  // namespace treecorr
