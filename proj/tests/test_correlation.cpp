#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "treecorr/correlation.hpp"
#include "treecorr/errors.hpp"
#include "treecorr/graph.hpp"
#include "treecorr/parallel.hpp"
#include "treecorr/tree_patch.hpp"
#include "treecorr/walks.hpp"

using namespace treecorr;

namespace {

// |S_r(v) cap S_r(w)| / |S_r| counted on the patch.
Rational overlap_ratio(int d, int r, int k) {
  const TreePatch p(d, k, r);
  int both = 0;
  for (Vertex u = 0; u < p.size(); ++u) both += (p.dist_to_v(u) <= r && p.dist_to_w(u) <= r) ? 1 : 0;
  return Rational(both, ball_size(d, r));
}

// Exact minlabel correlation at d: adjacent outputs exclude each other; at
// distance 2 the shared neighbour gives P(both) = 2 / ((d+1)(2d+1)).
double minlabel_corr(int d, int k) {
  const double p = 1.0 / (d + 1);
  const double var = p * (1 - p);
  if (k == 1) return -p * p / var;
  if (k == 2) return (2.0 / ((d + 1) * (2.0 * d + 1)) - p * p) / var;
  return 0.0;
}

}  // namespace

TEST_CASE("pair moments merge like one accumulator") {
  PairMoments all;
  PairMoments a;
  PairMoments b;
  for (int i = 0; i < 100; ++i) {
    const double x = std::sin(i);
    const double y = std::cos(3 * i) + 0.5 * x;
    all.add(x, y);
    (i < 40 ? a : b).add(x, y);
  }
  a.merge(b);
  CHECK(a.correlation().value() == doctest::Approx(all.correlation().value()));
  PairMoments flat;
  flat.add(1.0, 2.0);
  flat.add(1.0, 3.0);
  CHECK_FALSE(flat.correlation().has_value());
}

TEST_CASE("batch standard error is the sd of batch values over sqrt(batches)") {
  const auto e = batch_estimate(0.5, {1.0, 2.0, 3.0, 4.0}, 400, 9);
  CHECK(e.estimate == 0.5);
  // sd = sqrt(5/3), divided by 2.
  CHECK(e.standard_error == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
  CHECK(e.samples == 400);
  CHECK(e.seed == 9);
}

TEST_CASE("ball-sum exact correlation equals the counted overlap") {
  CHECK(ballsum_corr_exact(3, 2, 2) == Rational(2, 5));
  CHECK(ballsum_corr_exact(3, 2, 3) == Rational(1, 5));
  CHECK(ballsum_corr_exact(3, 1, 2) == Rational(1, 4));
  CHECK(ballsum_corr_exact(3, 2, 0) == 1);
  CHECK(ballsum_corr_exact(3, 2, 5) == 0);
  for (int d = 3; d <= 5; ++d) {
    for (int r = 0; r <= 4; ++r) {
      for (int k = 0; k <= 2 * r + 2; ++k) {
        CAPTURE(d);
        CAPTURE(r);
        CAPTURE(k);
        CHECK(ballsum_corr_exact(d, r, k) == overlap_ratio(d, r, k));
      }
    }
  }
}

TEST_CASE("ball-sum correlations approach their limits and respect the bound") {
  for (int d = 3; d <= 5; ++d) {
    for (int k = 1; k <= 6; ++k) {
      const double limit = ballsum_limit(d, k);
      CHECK(std::abs(to_double(ballsum_corr_exact(d, 30, k)) - limit) < 1e-6);
      for (int r = 0; r <= 10; ++r) CHECK(to_double(ballsum_corr_exact(d, r, k)) <= corr_bound(d, k));
    }
  }
  CHECK(ballsum_limit(3, 2) == doctest::Approx(0.5));
  CHECK(ballsum_limit(3, 3) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("Monte Carlo reproduces exact ball-sum values") {
  for (int d : {3, 4}) {
    for (int r = 0; r <= 3; ++r) {
      for (int k = 1; k <= 2 * r + 1; ++k) {
        const auto est = mc_correlation(rule_ballsum(r), d, k, 100000, mix_seed(17, 100 * d + 10 * r + k));
        const double exact = to_double(ballsum_corr_exact(d, r, k));
        CAPTURE(d);
        CAPTURE(r);
        CAPTURE(k);
        CHECK(est.standard_error > 0.0);
        CHECK(est.standard_error < 0.01);
        CHECK(std::abs(est.estimate - exact) <= 4 * est.standard_error);
      }
    }
  }
}

TEST_CASE("ball-sum correlations increase in r toward the limit from below") {
  for (int d = 3; d <= 5; ++d) {
    for (int k = 1; k <= 6; ++k) {
      double prev = 0.0;
      for (int r = (k + 1) / 2; r <= 12; ++r) {
        const double x = to_double(ballsum_corr_exact(d, r, k));
        CHECK(x > prev);
        CHECK(x < ballsum_limit(d, k));
        prev = x;
      }
    }
  }
}

TEST_CASE("walk-distance correlation is bounded by the ball-hitting probability") {
  // (f, M^k f) for the ball sum: average the distance-m correlation over the
  // distance of a k-step walk. Only m <= 2r contributes.
  for (int d : {3, 4}) {
    for (int r = 1; r <= 2; ++r) {
      for (int k = 1; k <= 8; ++k) {
        const auto chain = distance_chain(d, k);
        Rational exact = 0;
        double simulated = 0.0;
        double variance = 0.0;
        for (int m = 0; m <= std::min(k, 2 * r); ++m) {
          const Rational weight = chain.probability(m);
          if (weight == 0) continue;
          exact += weight * ballsum_corr_exact(d, r, m);
          if (m == 0) {
            simulated += to_double(weight);
            continue;
          }
          const auto est = mc_correlation(rule_ballsum(r), d, m, 20000, mix_seed(31, 1000 * d + 100 * r + m));
          simulated += to_double(weight) * est.estimate;
          variance += std::pow(to_double(weight) * est.standard_error, 2);
        }
        const Rational ball = hit_ball_prob(d, k, 2 * r);
        CAPTURE(d);
        CAPTURE(r);
        CAPTURE(k);
        CHECK(exact <= ball);
        CHECK(std::abs(simulated) <= to_double(ball) + 4 * std::sqrt(variance));
      }
    }
  }
}

TEST_CASE("Monte Carlo reproduces exact minlabel values") {
  for (int d : {3, 4}) {
    for (int k : {1, 2, 3, 4}) {
      const auto est = mc_correlation(rule_minlabel(), d, k, 200000, 23);
      CAPTURE(d);
      CAPTURE(k);
      CHECK(std::abs(est.estimate - minlabel_corr(d, k)) <= 4 * est.standard_error);
    }
  }
}

TEST_CASE("Monte Carlo is reproducible and independent of the worker count") {
  set_worker_count(1);
  const auto one = mc_correlation(rule_minlabel(), 3, 2, 20000, 5);
  set_worker_count(4);
  const auto four = mc_correlation(rule_minlabel(), 3, 2, 20000, 5);
  set_worker_count(0);
  CHECK(one.estimate == four.estimate);
  CHECK(one.standard_error == four.standard_error);
  const auto other = mc_correlation(rule_minlabel(), 3, 2, 20000, 6);
  CHECK(other.estimate != one.estimate);
}

TEST_CASE("Monte Carlo rejects degenerate input") {
  CHECK_THROWS_AS(mc_correlation(rule_minlabel(), 3, 1, 999, 1), PreconditionError);
  LocalRule constant = rule_minlabel();
  constant.evaluate = [](const LabeledBall&) { return 1.0; };
  CHECK_THROWS_AS(mc_correlation(constant, 3, 1, 1000, 1), DegenerateVarianceError);
}

TEST_CASE("bound checks") {
  const auto ok = bound_check(rule_ballsum(3), 3, 2, 50000, 1);
  CHECK(ok.passed);
  CHECK(ok.bound == doctest::Approx(corr_bound(3, 2)));
  CHECK(ok.margin == doctest::Approx(ok.bound - std::abs(ok.measured.estimate)));

  const auto seq = corr_sequence_from_measure(3, point_masses({1.0}, {1.0}), 6);
  for (const auto& report : bound_check_sequence(seq)) CHECK(report.passed);
  CorrelationSequence too_big{3, {1.0, 0.99}};
  CHECK_FALSE(bound_check_sequence(too_big)[1].passed);
}

TEST_CASE("graph versus tree check") {
  const auto g = random_regular_graph(2000, 3, 8, 3);
  const auto report = graph_vs_tree_check(rule_ballsum(1), g, 2, 20000, 4);
  CHECK(report.passed);
  CHECK(std::abs(report.graph.estimate - 0.25) <= 4 * report.graph.standard_error);
  // Girth 5 is below k + 2r + 2 = 6: refused before sampling.
  const auto short_girth = random_regular_graph(200, 3, 5, 1);
  if (girth(short_girth) < 6) {
    CHECK_THROWS_AS(graph_vs_tree_check(rule_ballsum(1), short_girth, 2, 20000, 1), PreconditionError);
  }
  CHECK_THROWS_AS(graph_vs_tree_check(rule_ballsum(1), petersen_graph(), 2, 20000, 1), PreconditionError);
}
