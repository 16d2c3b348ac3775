#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "treecorr/chebyshev.hpp"
#include "treecorr/correlation.hpp"
#include "treecorr/local_rules.hpp"
#include "treecorr/tree_patch.hpp"

namespace treecorr {

// Distance-dependent correlation p(0) = 1, p(1), ..., p(K) on T_d.
struct DistanceKernel {
  int d = 0;
  std::vector<double> values;

  int range() const { return static_cast<int>(values.size()) - 1; }
};

// Validates p(0) = 1 and |p(k)| <= 1.
DistanceKernel make_kernel(int d, std::vector<double> values);
DistanceKernel kernel_from_sequence(const CorrelationSequence& sequence);

// Entry (a, b) = p(dist(a, b)) over all patch vertices.
Eigen::MatrixXd gram_matrix(const DistanceKernel& kernel, const TreePatch& patch);

struct PsdResult {
  double min_eigenvalue = 0.0;
  bool is_psd = false;  // min_eigenvalue >= -tol
};

// Dense symmetric eigensolve. Rejects asymmetric input.
PsdResult psd_check(const Eigen::MatrixXd& matrix, double tol = 1e-8);

inline constexpr double kCholeskyJitter = 1e-10;

// Rows are independent N(0, Gram) draws over the patch vertices, using the
// Cholesky factor of Gram + 1e-10 I. Throws NotPsdError when the Gram matrix
// fails psd_check at 1e-8.
Eigen::MatrixXd sample_gaussian(const DistanceKernel& kernel, const TreePatch& patch,
                                std::size_t n_samples, std::uint64_t seed);

// Sample covariance (mean-centred, divisor n) of the rows.
Eigen::MatrixXd empirical_covariance(const Eigen::MatrixXd& samples);

struct CltReport {
  int n_copies = 0;
  int k = 0;
  // Covariance of the scaled sums at the ends of a distance-k pair.
  EstimateWithError covariance;
  // Variance of the scaled sum at v (1 for a normalized rule).
  double variance = 0.0;
  // Excess kurtosis of the scaled sum at v and its large-sample SE sqrt(24/n).
  double excess_kurtosis = 0.0;
  double kurtosis_se = 0.0;
};

// Simulates n^{-1/2} (sum of n_copies independent copies of the rule's
// process) on the (d, k, r) patch. The rule must be normalized (mean 0,
// variance 1); use standardize() for others.
CltReport clt_convergence(const LocalRule& rule, int d, int k, int n_copies, std::size_t samples,
                          std::uint64_t seed, std::size_t batches = kDefaultBatches);

}  // namespace treecorr
