#include "treecorr/spectrum.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "treecorr/errors.hpp"
#include "treecorr/parallel.hpp"

namespace treecorr {

namespace {

// out = A x, column by column.
void multiply_adjacency(const FiniteRegularGraph& graph, const Eigen::MatrixXd& x, Eigen::MatrixXd& out) {
  out.resize(x.rows(), x.cols());
  for (Vertex u = 0; u < graph.n(); ++u) {
    out.row(u).setZero();
    for (Vertex w : graph.neighbors(u)) out.row(u) += x.row(w);
  }
}

void project_mean_zero(Eigen::MatrixXd& x) {
  x.rowwise() -= x.colwise().mean();
}

void multiply_adjacency(const FiniteRegularGraph& graph, const std::vector<double>& x,
                        std::vector<double>& out) {
  for (Vertex u = 0; u < graph.n(); ++u) {
    double acc = 0.0;
    for (Vertex w : graph.neighbors(u)) acc += x[w];
    out[u] = acc;
  }
}

void project_mean_zero(std::vector<double>& x) {
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  for (double& v : x) v -= mean;
}

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& x) {
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
  return qr.householderQ() * Eigen::MatrixXd::Identity(x.rows(), x.cols());
}

}  // namespace

RhoEstimate rho_estimate(const FiniteRegularGraph& graph, RhoOptions options) {
  require(graph.n() >= 2, "rho_estimate: need at least two vertices");
  require(options.max_iters >= 1, "rho_estimate: max_iters must be positive");
  require(options.tol > 0.0, "rho_estimate: tol must be positive");
  require(is_connected(graph), "rho_estimate: graph is disconnected");

  // Block power iteration; a single vector stalls when +rho and -rho' are
  // nearly equal, since both become one eigenvalue cluster of A^2.
  const Eigen::Index n = graph.n();
  const Eigen::Index block = std::min<Eigen::Index>(kRhoBlockSize, n - 1);
  Engine engine(mix_seed(options.seed, 0));
  Eigen::MatrixXd q(n, block);
  for (Eigen::Index j = 0; j < block; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) q(i, j) = uniform01(engine) - 0.5;
  }
  project_mean_zero(q);
  q = orthonormal_basis(q);

  Eigen::MatrixXd aq;
  Eigen::MatrixXd bq;
  RhoEstimate result;
  for (int iter = 1; iter <= options.max_iters; ++iter) {
    multiply_adjacency(graph, q, aq);
    multiply_adjacency(graph, aq, bq);
    project_mean_zero(bq);
    // Rayleigh-Ritz on span(q); the top Ritz pair approximates rho^2.
    const Eigen::MatrixXd h = aq.transpose() * aq;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(h);
    const double lambda = std::max(0.0, ritz.eigenvalues()(block - 1));
    const Eigen::VectorXd y = ritz.eigenvectors().col(block - 1);
    result.value = std::sqrt(lambda);
    result.iterations = iter;
    result.residual = (bq * y - lambda * (q * y)).norm();
    if (lambda == 0.0 || result.residual <= options.tol * lambda) {
      result.converged = true;
      break;
    }
    q = orthonormal_basis(bq * ritz.eigenvectors());
  }
  return result;
}

SpectralReport is_ramanujan(const FiniteRegularGraph& graph, double tol, RhoOptions options) {
  const auto estimate = rho_estimate(graph, options);
  SpectralReport report;
  report.d = graph.d();
  report.n = graph.n();
  report.rho_estimate = estimate.value;
  report.ramanujan_threshold = 2.0 * std::sqrt(graph.d() - 1.0);
  report.is_ramanujan = estimate.value <= report.ramanujan_threshold + tol;
  report.iterations = estimate.iterations;
  report.residual = estimate.residual;
  report.converged = estimate.converged;
  return report;
}

namespace {

void require_subset_domain(const FiniteRegularGraph& graph, int max_k) {
  require(graph.n() <= kMaxSubsetVertices, "rho_via_subsets: at most 16 vertices");
  require(graph.n() >= 2, "rho_via_subsets: need at least two vertices");
  require(max_k >= 1 && max_k <= kMaxSubsetWalkLength, "rho_via_subsets: k_max must lie in [1, 50]");
}

// terms[k-1] = d |(p_k(H) - nu) / (1 - nu)|^(1/k) for k = 1..max_k.
//
// p_k(H) - nu equals (1_H, M^k g) / |H| with g = 1_H - nu 1 mean-zero, so the
// difference is never formed by cancellation; g is re-projected onto the
// mean-zero subspace every step so rounding cannot feed the eigenvalue-1
// direction, which would otherwise dominate the k-th root at large k.
std::vector<double> subset_terms(const FiniteRegularGraph& graph, std::uint32_t subset, int max_k) {
  const auto n = static_cast<std::size_t>(graph.n());
  std::vector<double> indicator(n, 0.0);
  for (Vertex v = 0; v < graph.n(); ++v) {
    if ((subset >> v) & 1U) indicator[v] = 1.0;
  }
  const double size = std::accumulate(indicator.begin(), indicator.end(), 0.0);
  const double nu = size / graph.n();
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = indicator[i] - nu;
  std::vector<double> next(n);
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(max_k));
  for (int k = 1; k <= max_k; ++k) {
    multiply_adjacency(graph, g, next);
    for (double& x : next) x /= graph.d();
    project_mean_zero(next);
    std::swap(g, next);
    const double excess = std::inner_product(indicator.begin(), indicator.end(), g.begin(), 0.0) / size;
    terms.push_back(graph.d() * std::pow(std::abs(excess / (1.0 - nu)), 1.0 / k));
  }
  return terms;
}

}  // namespace

double subset_term(const FiniteRegularGraph& graph, std::uint32_t subset, int k) {
  require_subset_domain(graph, k);
  const std::uint32_t full = (1U << graph.n()) - 1U;
  require(subset != 0 && (subset & ~full) == 0, "subset_term: H must be a nonempty vertex subset");
  require(subset != full, "subset_term: H = V has 1 - nu(H) = 0");
  return subset_terms(graph, subset, k).back();
}

SubsetRho rho_via_subsets(const FiniteRegularGraph& graph, int max_k) {
  require_subset_domain(graph, max_k);
  const std::uint32_t full = (1U << graph.n()) - 1U;
  SubsetRho best;
  for (std::uint32_t subset = 1; subset < full; ++subset) {
    const auto terms = subset_terms(graph, subset, max_k);
    for (int k = 1; k <= max_k; ++k) {
      if (terms[k - 1] > best.value) best = {terms[k - 1], subset, k};
    }
  }
  return best;
}

}  // namespace treecorr
