// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "treecorr/chebyshev.hpp"
#include "treecorr/correlation.hpp"
#include "treecorr/gaussian.hpp"
#include "treecorr/graph.hpp"
#include "treecorr/local_rules.hpp"
#include "treecorr/parallel.hpp"
#include "treecorr/spectrum.hpp"
#include "treecorr/walks.hpp"

using namespace treecorr;

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void expect(bool condition, const std::string& what) {
    if (!condition) {
      if (passed) detail << "failed: ";
      else detail << "; ";
      detail << what;
      passed = false;
    }
  }
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<void(Outcome&)> body;
};

std::string fmt(double x, int precision = 6) {
  std::ostringstream s;
  s << std::setprecision(precision) << x;
  return s.str();
}

// --- 1 ---------------------------------------------------------------------

void bound_reproduction(Outcome& o) {
  double worst_formula = 0.0;
  double worst_max = -1.0;
  for (int d = 3; d <= 5; ++d) {
    for (int k = 1; k <= 6; ++k) {
      const double at_one = q_value(d, k, 1.0);
      const double expected = at_one / std::sqrt(d * std::pow(d - 1.0, k - 1));
      const double err = std::abs(corr_bound(d, k) - expected);
      worst_formula = std::max(worst_formula, err);
      o.expect(err <= 1e-10, "corr_bound(" + std::to_string(d) + "," + std::to_string(k) + ")");
      double grid_max = 0.0;
      for (int i = 0; i <= 10000; ++i) grid_max = std::max(grid_max, std::abs(q_value(d, k, -1.0 + i * 2e-4)));
      worst_max = std::max(worst_max, grid_max - at_one);
      o.expect(grid_max - at_one <= 1e-9, "grid max of |q_k| above q_k(1)");
    }
  }
  o.detail << "max |bound - q_k(1)/sqrt(d(d-1)^(k-1))| = " << fmt(worst_formula)
           << ", max(grid max - q_k(1)) = " << fmt(worst_max);
}

// --- 2 ---------------------------------------------------------------------

void ballsum_exactness(Outcome& o) {
  o.expect(ballsum_corr_exact(3, 2, 2) == Rational(2, 5), "exact (3,2,2) != 2/5");
  o.expect(ballsum_corr_exact(3, 2, 3) == Rational(1, 5), "exact (3,2,3) != 1/5");
  for (int k : {2, 3}) {
    const double exact = to_double(ballsum_corr_exact(3, 2, k));
    const auto est = mc_correlation(rule_ballsum(2), 3, k, 1000000, 2000 + k);
    const double z = (est.estimate - exact) / est.standard_error;
    o.expect(std::abs(z) <= 4.0, "k=" + std::to_string(k) + " off by " + fmt(z) + " SE");
    o.detail << "k=" << k << ": exact " << format_rational(ballsum_corr_exact(3, 2, k)) << ", MC "
             << fmt(est.estimate) << " +- " << fmt(est.standard_error, 3) << "; ";
  }
}

// --- 3 ---------------------------------------------------------------------

void limit_values(Outcome& o) {
  const double k2 = to_double(ballsum_corr_exact(3, 8, 2));
  const double k3 = to_double(ballsum_corr_exact(3, 8, 3));
  o.expect(std::abs(k2 - 0.5) < 1e-2, "k=2 too far from 1/2");
  o.expect(std::abs(k3 - 1.0 / 3.0) < 1e-2, "k=3 too far from 1/3");
  o.detail << "r=8: k=2 " << format_rational(ballsum_corr_exact(3, 8, 2)) << " = " << fmt(k2)
           << ", k=3 " << format_rational(ballsum_corr_exact(3, 8, 3)) << " = " << fmt(k3);
}

// --- 4 ---------------------------------------------------------------------

void bound_dominance(Outcome& o) {
  // Automorphism-invariant built-in rules.
  std::vector<LocalRule> rules{rule_minlabel(), rule_ballsum(1), rule_ballsum(2), rule_ballsum(3)};
  double min_slack = 1e9;
  int checks = 0;
  for (const auto& rule : rules) {
    for (int d : {3, 4}) {
      for (int k = 1; k <= 5; ++k) {
        const std::uint64_t seed = mix_seed(4000 + static_cast<std::uint64_t>(d), 10 * rule.radius + k);
        const auto report = bound_check(rule, d, k, 100000, seed);
        ++checks;
        const double slack = report.bound + 4 * report.measured.standard_error -
                             std::abs(report.measured.estimate);
        min_slack = std::min(min_slack, slack);
        o.expect(report.passed, rule.name + " r=" + std::to_string(rule.radius) + " d=" +
                                    std::to_string(d) + " k=" + std::to_string(k));
      }
    }
  }
  o.detail << checks << " (rule, d, k) checks, min(bound + 4SE - |corr|) = " << fmt(min_slack);
}

// --- 5 ---------------------------------------------------------------------

// Returns to the root among all d^k step sequences on an explicit tree.
long long enumerate_returns(int d, int k) {
  std::vector<std::vector<int>> adj(1);
  std::vector<int> level{0};
  for (std::size_t u = 0; u < adj.size(); ++u) {
    if (level[u] == k) continue;
    for (int c = 0; c < (u == 0 ? d : d - 1); ++c) {
      adj.push_back({static_cast<int>(u)});
      level.push_back(level[u] + 1);
      adj[u].push_back(static_cast<int>(adj.size()) - 1);
    }
  }
  long long total = 1;
  for (int i = 0; i < k; ++i) total *= d;
  long long returns = 0;
  for (long long code = 0; code < total; ++code) {
    long long c = code;
    int u = 0;
    for (int s = 0; s < k; ++s, c /= d) u = adj[u][c % d];
    returns += u == 0 ? 1 : 0;
  }
  return returns;
}

void kesten_mckay_consistency(Outcome& o) {
  double worst = 0.0;
  for (int d = 3; d <= 5; ++d) {
    for (int k = 0; k <= 12; k += 2) {
      const double lhs = km_moment(d, k) / std::pow(d, k);
      const double err = std::abs(lhs - to_double(return_prob(d, k)));
      worst = std::max(worst, err);
      o.expect(err <= 1e-6, "moment d=" + std::to_string(d) + " k=" + std::to_string(k));
    }
    for (int k = 0; k <= 8; ++k) {
      long long total = 1;
      for (int i = 0; i < k; ++i) total *= d;
      o.expect(return_prob(d, k) == Rational(enumerate_returns(d, k), total),
               "enumeration d=" + std::to_string(d) + " k=" + std::to_string(k));
    }
  }
  o.detail << "max |km_moment/d^k - return_prob| = " << fmt(worst)
           << "; exact enumeration agrees for d = 3..5, k <= 8";
}

// --- 6 ---------------------------------------------------------------------

void walk_asymptote(Outcome& o) {
  const auto table = asymptote_check(3, 150);
  const double target = 2.0 * std::sqrt(2.0) / 3.0;
  const double last = table.rows.back().root;
  o.expect(std::abs(last - target) <= 0.02, "k=150 root " + fmt(last) + " not within 0.02");
  bool monotone = true;
  for (std::size_t i = 1; i < table.rows.size(); ++i) monotone = monotone && table.rows[i].root > table.rows[i - 1].root;
  o.expect(monotone, "not monotone");
  o.detail << "r_300^(1/300) = " << fmt(last) << ", gap to " << fmt(target) << " = "
           << fmt(target - last) << ", strictly increasing over k <= 150";
}

// --- 7 ---------------------------------------------------------------------

double dense_rho(const FiniteRegularGraph& g) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.n(), g.n());
  for (const auto& [u, v] : g.edges()) a(u, v) = a(v, u) = 1.0;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  Eigen::VectorXd ev = solver.eigenvalues();  // ascending; the last is d
  double rho = 0.0;
  for (Eigen::Index i = 0; i + 1 < ev.size(); ++i) rho = std::max(rho, std::abs(ev(i)));
  return rho;
}

void spectral_oracles(Outcome& o) {
  struct Named {
    std::string name;
    FiniteRegularGraph graph;
    double expected;
  };
  const std::vector<Named> graphs{{"C_4", cycle_graph(4), 2.0},
                                  {"C_6", cycle_graph(6), 2.0},
                                  {"K_4", complete_graph(4), 1.0},
                                  {"K_6", complete_graph(6), 1.0},
                                  {"Petersen", petersen_graph(), 2.0}};
  for (const auto& [name, graph, expected] : graphs) {
    const double rho = rho_estimate(graph).value;
    const double dense = dense_rho(graph);
    o.expect(std::abs(rho - dense) <= 1e-6 && std::abs(dense - expected) <= 1e-9, name + " rho");
    const auto sub = rho_via_subsets(graph, 40);
    o.expect(sub.value <= rho + 1e-9, name + " subset formula exceeds rho");
    if (name == "C_4" || name == "K_4") o.expect(rho - sub.value <= 0.05, name + " subset formula not within 0.05");
    o.detail << name << " rho " << fmt(rho, 10) << " subsets " << fmt(sub.value, 10) << "; ";
  }
}

// --- 8 ---------------------------------------------------------------------

void alon_boppana_evidence(Outcome& o) {
  const double threshold = 2.0 * std::sqrt(2.0);
  std::vector<double> deficits;
  for (int n : {100, 500, 2000}) {
    double min_rho = 1e9;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto g = random_regular_graph(n, 3, 3, mix_seed(8000 + static_cast<std::uint64_t>(n), seed));
      if (!is_connected(g)) {
        o.expect(false, "disconnected sample n=" + std::to_string(n));
        continue;
      }
      const auto est = rho_estimate(g);
      o.expect(est.converged, "power iteration did not converge at n=" + std::to_string(n));
      min_rho = std::min(min_rho, est.value);
    }
    deficits.push_back(threshold - min_rho);
    o.detail << "n=" << n << " min rho " << fmt(min_rho) << " deficit " << fmt(threshold - min_rho) << "; ";
  }
  o.expect(deficits[0] > deficits[1] && deficits[1] > deficits[2], "deficit not shrinking with n");
}

// --- 9 ---------------------------------------------------------------------

void sequence_characterization(Outcome& o) {
  double worst_delta = 0.0;
  const auto one = corr_sequence_from_measure(3, point_masses({1.0}, {1.0}), 20);
  for (int k = 0; k <= 20; ++k) worst_delta = std::max(worst_delta, std::abs(one.values[k] - corr_bound(3, k)));
  o.expect(worst_delta <= 1e-9, "delta_1 sequence differs from the bound");

  double worst_km = 0.0;
  const auto km = corr_sequence_from_measure(3, km_measure_normalized(3), 10);
  for (int k = 1; k <= 10; ++k) worst_km = std::max(worst_km, std::abs(km.values[k]));
  o.expect(worst_km <= 1e-6, "Kesten-McKay sequence not ~0");

  Engine engine(9009);
  double min_eig = 1e9;
  int matrices = 0;
  for (int m = 0; m < 50; ++m) {
    const int atoms = 1 + static_cast<int>(engine() % 5);
    std::vector<double> nodes;
    std::vector<double> weights;
    for (int a = 0; a < atoms; ++a) {
      nodes.push_back(2.0 * uniform01(engine) - 1.0);
      weights.push_back(uniform01(engine) + 1e-3);
    }
    const double mass = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (double& w : weights) w /= mass;
    const auto eta = point_masses(nodes, weights);
    for (int r = 0; r <= 3; ++r) {
      for (int k = 0; k <= 2 * r + 2; ++k) {
        const TreePatch patch(3, k, r);
        const auto seq = corr_sequence_from_measure(3, eta, patch.diameter());
        const auto psd = psd_check(gram_matrix(kernel_from_sequence(seq), patch));
        ++matrices;
        min_eig = std::min(min_eig, psd.min_eigenvalue);
        o.expect(psd.is_psd, "measure " + std::to_string(m) + " fails psd at r=" + std::to_string(r));
      }
    }
  }
  o.detail << "delta_1 err " << fmt(worst_delta) << ", KM max |x_k| " << fmt(worst_km) << ", "
           << matrices << " Gram matrices, min eigenvalue " << fmt(min_eig);
}

// --- 10 --------------------------------------------------------------------

void tree_graph_equivalence(Outcome& o) {
  const auto graph = random_regular_graph(2000, 3, 8, 10010);
  const auto report = graph_vs_tree_check(rule_ballsum(1), graph, 2, 100000, 10011);
  const double exact = to_double(ballsum_corr_exact(3, 1, 2));
  const double z = (report.graph.estimate - exact) / report.graph.standard_error;
  o.expect(std::abs(z) <= 4.0, "graph correlation off by " + fmt(z) + " SE");
  o.expect(report.passed, "graph and tree estimates disagree");
  o.detail << "girth " << girth(graph) << ", graph " << fmt(report.graph.estimate) << " +- "
           << fmt(report.graph.standard_error, 3) << ", tree " << fmt(report.tree.estimate) << ", exact 1/4";
}

// --- 11 --------------------------------------------------------------------

void gaussian_clt(Outcome& o) {
  const double p = 0.25;
  const auto rule = standardize(rule_minlabel(), p, std::sqrt(p * (1 - p)));
  const double exact = 1.0 / 21.0;  // minlabel correlation at distance 2, d = 3
  for (int n_copies : {1, 20, 200}) {
    const auto report = clt_convergence(rule, 3, 2, n_copies, 100000, 11000 + n_copies);
    const double z = (report.covariance.estimate - exact) / report.covariance.standard_error;
    o.expect(std::abs(z) <= 4.0, "n=" + std::to_string(n_copies) + " covariance off by " + fmt(z) + " SE");
    o.detail << "n=" << n_copies << " cov " << fmt(report.covariance.estimate) << " kurt "
             << fmt(report.excess_kurtosis, 3) << "; ";
  }
  const double tol = 4.0 / std::sqrt(1e5);
  for (int k = 1; k <= 3; ++k) {
    const TreePatch patch(3, k, 0);
    const auto kernel =
        kernel_from_sequence(corr_sequence_from_measure(3, point_masses({1.0}, {1.0}), patch.diameter()));
    const auto samples = sample_gaussian(kernel, patch, 100000, 11100 + k);
    const auto cov = empirical_covariance(samples);
    const double corr = cov(0, patch.w()) / std::sqrt(cov(0, 0) * cov(patch.w(), patch.w()));
    o.expect(std::abs(corr - corr_bound(3, k)) <= tol, "gaussian k=" + std::to_string(k));
    o.detail << "gaussian k=" << k << " " << fmt(corr) << " vs " << fmt(corr_bound(3, k)) << "; ";
  }
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "bound reproduction", 1.0, bound_reproduction},
      {2, "ball-sum exactness", 30.0, ballsum_exactness},
      {3, "ball-sum limit values", 1.0, limit_values},
      {4, "bound dominance for built-in rules", 120.0, bound_dominance},
      {5, "Kesten-McKay consistency", 10.0, kesten_mckay_consistency},
      {6, "walk asymptote", 5.0, walk_asymptote},
      {7, "spectral gap oracles", 10.0, spectral_oracles},
      {8, "spectral radius deficit shrinks with n", 300.0, alon_boppana_evidence},
      {9, "correlation-sequence characterization", 30.0, sequence_characterization},
      {10, "tree/graph equivalence at large girth", 120.0, tree_graph_equivalence},
      {11, "Gaussian process and CLT", 120.0, gaussian_clt},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome outcome;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(outcome);
    } catch (const std::exception& e) {
      outcome.expect(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    outcome.expect(seconds < c.budget_seconds, "runtime over " + fmt(c.budget_seconds) + " s");
    failures += outcome.passed ? 0 : 1;
    std::cout << (outcome.passed ? "PASS" : "FAIL") << "  [" << std::setw(2) << c.id << "] " << c.title << " ("
              << std::fixed << std::setprecision(2) << seconds << " s) " << std::defaultfloat << outcome.detail.str()
              << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " acceptance criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
