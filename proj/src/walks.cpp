#include "treecorr/walks.hpp"

#include <cmath>

#include "treecorr/errors.hpp"

namespace treecorr {

Rational DistanceChainState::probability(int distance) const {
  if (distance < 0 || distance >= static_cast<int>(walk_counts.size())) return Rational(0);
  return Rational(walk_counts[distance], ipow(BigInt(d), static_cast<unsigned>(steps)));
}

std::vector<double> DistanceChainState::probabilities() const {
  std::vector<double> out(walk_counts.size());
  for (std::size_t m = 0; m < walk_counts.size(); ++m) {
    out[m] = to_double(probability(static_cast<int>(m)));
  }
  return out;
}

DistanceChainState distance_chain(int d, int steps) {
  require(d >= 2, "distance chain: degree must be at least 2");
  require(steps >= 0, "distance chain: steps must be nonnegative");
  require(steps <= kExactWalkLimit, "distance chain: horizon above the exact limit");
  DistanceChainState state;
  state.d = d;
  state.steps = steps;
  state.walk_counts.assign(static_cast<std::size_t>(steps) + 1, BigInt(0));
  state.walk_counts[0] = 1;
  std::vector<BigInt> next(state.walk_counts.size());
  for (int s = 0; s < steps; ++s) {
    for (auto& x : next) x = 0;
    // After s steps only distances of the parity of s carry mass.
    for (int m = s % 2; m <= s; m += 2) {
      const BigInt& c = state.walk_counts[m];
      if (c == 0) continue;
      if (m == 0) {
        next[1] += c * d;
      } else {
        next[m - 1] += c;
        next[m + 1] += c * (d - 1);
      }
    }
    std::swap(state.walk_counts, next);
  }
  return state;
}

std::vector<double> distance_chain_float(int d, int steps) {
  require(d >= 2, "distance chain: degree must be at least 2");
  require(steps >= 0, "distance chain: steps must be nonnegative");
  const double down = 1.0 / d;
  const double up = (d - 1.0) / d;
  std::vector<double> p(static_cast<std::size_t>(steps) + 1, 0.0);
  std::vector<double> next(p.size());
  p[0] = 1.0;
  for (int s = 0; s < steps; ++s) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int m = s % 2; m <= s; m += 2) {
      if (m == 0) {
        next[1] += p[0];
      } else {
        next[m - 1] += p[m] * down;
        next[m + 1] += p[m] * up;
      }
    }
    std::swap(p, next);
  }
  return p;
}

Rational return_prob(int d, int k) {
  require(d >= 2, "return_prob: degree must be at least 2");
  require(k >= 0, "return_prob: k must be nonnegative");
  if (k % 2 == 1) return Rational(0);
  return distance_chain(d, k).probability(0);
}

double return_prob_float(int d, int k) {
  require(k >= 0, "return_prob: k must be nonnegative");
  if (k <= kExactWalkLimit) return to_double(return_prob(d, k));
  return distance_chain_float(d, k)[0];
}

Rational hit_ball_prob(int d, int k, int radius) {
  require(d >= 2, "hit_ball_prob: degree must be at least 2");
  require(k >= 0 && radius >= 0, "hit_ball_prob: k and R must be nonnegative");
  const auto state = distance_chain(d, k);
  BigInt inside = 0;
  for (int m = 0; m <= std::min(radius, k); ++m) inside += state.walk_counts[m];
  return Rational(inside, ipow(BigInt(d), static_cast<unsigned>(k)));
}

AsymptoteTable asymptote_check(int d, int max_k) {
  require(d >= 2, "asymptote_check: degree must be at least 2");
  require(max_k >= 1, "asymptote_check: max_k must be at least 1");
  AsymptoteTable table;
  table.d = d;
  table.target = 2.0 * std::sqrt(d - 1.0) / d;
  const int horizon = 2 * max_k;
  if (horizon <= kExactWalkLimit) {
    // One pass of the exact chain, reading off the return count every 2 steps.
    std::vector<BigInt> counts(static_cast<std::size_t>(horizon) + 1, BigInt(0));
    std::vector<BigInt> next(counts.size());
    counts[0] = 1;
    BigInt total = 1;
    for (int s = 0; s < horizon; ++s) {
      for (auto& x : next) x = 0;
      for (int m = s % 2; m <= s; m += 2) {
        if (counts[m] == 0) continue;
        if (m == 0) {
          next[1] += counts[0] * d;
        } else {
          next[m - 1] += counts[m];
          next[m + 1] += counts[m] * (d - 1);
        }
      }
      std::swap(counts, next);
      total *= d;
      if ((s + 1) % 2 == 0) {
        const Rational p(counts[0], total);
        const int steps = s + 1;
        table.rows.push_back({steps / 2, to_double(p), std::exp(log_of(p) / steps)});
      }
    }
  } else {
    for (int k = 1; k <= max_k; ++k) {
      const double p = distance_chain_float(d, 2 * k)[0];
      table.rows.push_back({k, p, std::pow(p, 1.0 / (2 * k))});
    }
  }
  return table;
}

std::vector<std::vector<double>> markov_powers(const FiniteRegularGraph& graph,
                                               std::span<const double> start, int max_k) {
  require(static_cast<int>(start.size()) == graph.n(), "markov_powers: vector size differs from n");
  require(max_k >= 0, "markov_powers: max_k must be nonnegative");
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(max_k) + 1);
  out.emplace_back(start.begin(), start.end());
  const double inv_d = 1.0 / graph.d();
  for (int k = 1; k <= max_k; ++k) {
    const auto& prev = out.back();
    std::vector<double> next(prev.size(), 0.0);
    for (Vertex u = 0; u < graph.n(); ++u) {
      double acc = 0.0;
      for (Vertex w : graph.neighbors(u)) acc += prev[w];
      next[u] = acc * inv_d;
    }
    out.push_back(std::move(next));
  }
  return out;
}

double finite_walk_prob(const FiniteRegularGraph& graph, std::span<const Vertex> subset, int k) {
  require(!subset.empty(), "finite_walk_prob: H must be nonempty");
  require(k >= 0, "finite_walk_prob: k must be nonnegative");
  std::vector<double> indicator(static_cast<std::size_t>(graph.n()), 0.0);
  for (Vertex v : subset) {
    require(v >= 0 && v < graph.n(), "finite_walk_prob: vertex out of range");
    indicator[v] = 1.0;
  }
  double h_size = 0.0;
  for (double x : indicator) h_size += x;
  const auto powers = markov_powers(graph, indicator, k);
  double acc = 0.0;
  for (Vertex v = 0; v < graph.n(); ++v) acc += indicator[v] * powers.back()[v];
  return acc / h_size;
}

}  // namespace treecorr
