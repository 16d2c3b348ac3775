#include "treecorr/gaussian.hpp"

#include <cmath>
#include <random>
#include <string>

#include "treecorr/errors.hpp"
#include "treecorr/parallel.hpp"

namespace treecorr {

DistanceKernel make_kernel(int d, std::vector<double> values) {
  require(d >= 2, "kernel: degree must be at least 2");
  require(!values.empty() && values[0] == 1.0, "kernel: p(0) must equal 1");
  for (double p : values) {
    require(std::isfinite(p) && std::abs(p) <= 1.0 + 1e-12, "kernel: values must lie in [-1, 1]");
  }
  return DistanceKernel{d, std::move(values)};
}

DistanceKernel kernel_from_sequence(const CorrelationSequence& sequence) {
  return make_kernel(sequence.d, sequence.values);
}

Eigen::MatrixXd gram_matrix(const DistanceKernel& kernel, const TreePatch& patch) {
  require(kernel.d == patch.d(), "gram_matrix: kernel and patch degrees differ");
  const int n = patch.size();
  Eigen::MatrixXd gram(n, n);
  for (Vertex a = 0; a < n; ++a) {
    gram(a, a) = kernel.values[0];
    for (Vertex b = a + 1; b < n; ++b) {
      const int dist = patch.distance(a, b);
      require(dist <= kernel.range(), "gram_matrix: patch distance " + std::to_string(dist) +
                                          " exceeds the kernel range " +
                                          std::to_string(kernel.range()));
      gram(a, b) = gram(b, a) = kernel.values[dist];
    }
  }
  return gram;
}

PsdResult psd_check(const Eigen::MatrixXd& matrix, double tol) {
  require(matrix.rows() == matrix.cols() && matrix.rows() > 0, "psd_check: need a square matrix");
  const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  require((matrix - matrix.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale,
          "psd_check: matrix is not symmetric");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix, Eigen::EigenvaluesOnly);
  PsdResult result;
  result.min_eigenvalue = solver.eigenvalues().minCoeff();
  result.is_psd = result.min_eigenvalue >= -tol;
  return result;
}

namespace {

// Lower factor L with L L^T ~= gram. Boundary kernels can leave the jittered
// matrix numerically indefinite at the 1e-10 level; those fall back to the
// symmetric square root with clamped eigenvalues.
Eigen::MatrixXd covariance_factor(const Eigen::MatrixXd& gram) {
  const Eigen::MatrixXd jittered =
      gram + kCholeskyJitter * Eigen::MatrixXd::Identity(gram.rows(), gram.cols());
  const Eigen::LLT<Eigen::MatrixXd> llt(jittered);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jittered);
  const Eigen::VectorXd root = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * root.asDiagonal();
}

}  // namespace

Eigen::MatrixXd sample_gaussian(const DistanceKernel& kernel, const TreePatch& patch,
                                std::size_t n_samples, std::uint64_t seed) {
  require(n_samples >= 1, "sample_gaussian: need at least one sample");
  const Eigen::MatrixXd gram = gram_matrix(kernel, patch);
  const auto psd = psd_check(gram, 1e-8);
  if (!psd.is_psd) {
    throw NotPsdError("sample_gaussian: kernel Gram matrix is not positive semi-definite",
                      psd.min_eigenvalue);
  }
  const Eigen::MatrixXd factor = covariance_factor(gram);
  const auto dim = static_cast<Eigen::Index>(patch.size());
  Eigen::MatrixXd samples(static_cast<Eigen::Index>(n_samples), dim);
  const std::size_t chunks = std::min(n_samples, kDefaultBatches);
  parallel_for(chunks, [&](std::size_t c) {
    Engine engine = chunk_engine(seed, c);
    std::normal_distribution<double> normal;
    Eigen::VectorXd z(dim);
    const auto range = chunk_range(n_samples, chunks, c);
    for (std::size_t s = range.begin; s < range.end; ++s) {
      for (Eigen::Index i = 0; i < dim; ++i) z(i) = normal(engine);
      samples.row(static_cast<Eigen::Index>(s)) = (factor * z).transpose();
    }
  });
  return samples;
}

Eigen::MatrixXd empirical_covariance(const Eigen::MatrixXd& samples) {
  require(samples.rows() >= 2, "empirical_covariance: need at least two rows");
  const Eigen::RowVectorXd mean = samples.colwise().mean();
  const Eigen::MatrixXd centred = samples.rowwise() - mean;
  return centred.transpose() * centred / static_cast<double>(samples.rows());
}

CltReport clt_convergence(const LocalRule& rule, int d, int k, int n_copies, std::size_t samples,
                          std::uint64_t seed, std::size_t batches) {
  require(rule.is_normalized(), "clt_convergence: rule must have mean 0 and variance 1");
  require(n_copies >= 1, "clt_convergence: n_copies must be positive");
  require(samples >= 1000, "clt_convergence: need at least 1000 samples");
  const TreePatch patch(d, k, rule.radius);
  const std::vector<Vertex> ends{patch.v(), patch.w()};
  const RuleEvaluator evaluator(rule, patch, ends);
  batches = std::min(samples, batches);

  struct BatchSums {
    PairMoments pair;
    double sum_x3 = 0.0;
    double sum_x4 = 0.0;
  };
  std::vector<BatchSums> per_batch(batches);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_copies));
  parallel_for(batches, [&](std::size_t b) {
    Engine engine = chunk_engine(seed, b);
    std::vector<double> labels(static_cast<std::size_t>(patch.size()));
    auto scratch = evaluator.make_scratch();
    BatchSums acc;
    const auto range = chunk_range(samples, batches, b);
    for (std::size_t s = range.begin; s < range.end; ++s) {
      double sv = 0.0;
      double sw = 0.0;
      for (int c = 0; c < n_copies; ++c) {
        fill_labels(engine, rule.label_model, labels);
        sv += evaluator.evaluate(0, labels, scratch);
        sw += evaluator.evaluate(1, labels, scratch);
      }
      sv *= scale;
      sw *= scale;
      acc.pair.add(sv, sw);
      acc.sum_x3 += sv * sv * sv;
      acc.sum_x4 += sv * sv * sv * sv;
    }
    per_batch[b] = acc;
  });

  BatchSums total;
  std::vector<double> batch_cov;
  for (const auto& bs : per_batch) {
    total.pair.merge(bs.pair);
    total.sum_x3 += bs.sum_x3;
    total.sum_x4 += bs.sum_x4;
    batch_cov.push_back(bs.pair.covariance());
  }
  CltReport report;
  report.n_copies = n_copies;
  report.k = k;
  report.covariance = batch_estimate(total.pair.covariance(), batch_cov, samples, seed);
  const double n = total.pair.count;
  const double m1 = total.pair.sum_x / n;
  const double m2 = total.pair.sum_xx / n;
  const double m3 = total.sum_x3 / n;
  const double m4 = total.sum_x4 / n;
  const double var = m2 - m1 * m1;
  report.variance = var;
  if (var <= 0.0) throw DegenerateVarianceError("clt_convergence: zero variance at v");
  const double central4 = m4 - 4.0 * m1 * m3 + 6.0 * m1 * m1 * m2 - 3.0 * m1 * m1 * m1 * m1;
  report.excess_kurtosis = central4 / (var * var) - 3.0;
  report.kurtosis_se = std::sqrt(24.0 / n);
  return report;
}

}  // namespace treecorr
