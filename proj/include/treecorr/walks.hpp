#pragma once

#include <span>
#include <vector>

#include "treecorr/graph.hpp"
#include "treecorr/rational.hpp"

namespace treecorr {

// Horizon up to which the exact chain is used by default.
inline constexpr int kExactWalkLimit = 2000;

// Distribution of dist(root, X_k) for simple random walk on T_d. The tree
// walk's distance is itself Markov: from 0 it moves to 1, from m >= 1 it
// moves down with probability 1/d and up with probability (d-1)/d.
struct DistanceChainState {
  int d = 0;
  int steps = 0;
  // walk_counts[m] = number of the d^steps step sequences ending at distance m.
  std::vector<BigInt> walk_counts;

  Rational probability(int distance) const;
  std::vector<double> probabilities() const;
};

DistanceChainState distance_chain(int d, int steps);

// Same chain in double precision, for horizons past the exact limit.
std::vector<double> distance_chain_float(int d, int steps);

// P(walk of length k from the root of T_d is back at the root).
Rational return_prob(int d, int k);
double return_prob_float(int d, int k);

// P(walk of length k ends within distance R of the root).
Rational hit_ball_prob(int d, int k, int radius);

struct AsymptoteRow {
  int k;                    // half-length: walks of length 2k
  double return_probability;
  double root;              // r_{2k}^{1/(2k)}
};

struct AsymptoteTable {
  int d;
  double target;  // 2 sqrt(d-1) / d
  std::vector<AsymptoteRow> rows;
};

AsymptoteTable asymptote_check(int d, int max_k);

// p_k(H): probability that a k-step walk from a uniform vertex of H ends in H,
// by iterating the Markov operator A/d.
double finite_walk_prob(const FiniteRegularGraph& graph, std::span<const Vertex> subset, int k);

// The vector M^k 1_H for every k in 0..max_k (row k), reused by the subset
// formula for the spectral radius.
std::vector<std::vector<double>> markov_powers(const FiniteRegularGraph& graph,
                                               std::span<const double> start, int max_k);

}  // namespace treecorr
