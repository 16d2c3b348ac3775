#include "treecorr/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "treecorr/errors.hpp"

namespace treecorr {

Polynomial::Polynomial(std::vector<double> coefficients) : coefficients_(std::move(coefficients)) {
  trim();
}

void Polynomial::trim() {
  while (!coefficients_.empty() && coefficients_.back() == 0.0) coefficients_.pop_back();
}

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::times_x() const {
  if (is_zero()) return {};
  std::vector<double> c(coefficients_.size() + 1, 0.0);
  std::copy(coefficients_.begin(), coefficients_.end(), c.begin() + 1);
  return Polynomial(std::move(c));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<double> c(std::max(a.coefficients_.size(), b.coefficients_.size()), 0.0);
  for (std::size_t j = 0; j < a.coefficients_.size(); ++j) c[j] += a.coefficients_[j];
  for (std::size_t j = 0; j < b.coefficients_.size(); ++j) c[j] += b.coefficients_[j];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-1.0) * b; }

Polynomial operator*(double s, const Polynomial& p) {
  std::vector<double> c = p.coefficients_;
  for (double& x : c) x *= s;
  return Polynomial(std::move(c));
}

namespace {

// P_{j+1} = 2x P_j - P_{j-1}, shared by U and T.
Polynomial chebyshev_recurrence(Polynomial previous, Polynomial current, int steps) {
  for (int j = 0; j < steps; ++j) {
    Polynomial next = 2.0 * current.times_x() - previous;
    previous = std::move(current);
    current = std::move(next);
  }
  return current;
}

}  // namespace

Polynomial cheb_U(int k) {
  require(k >= -1, "cheb_U: k must be at least -1");
  require(k <= kMaxMonomialDegree, "cheb_U: degree above the monomial limit; use cheb_U_value");
  if (k == -1) return {};
  return chebyshev_recurrence(Polynomial{}, Polynomial({1.0}), k);
}

Polynomial cheb_T(int k) {
  require(k >= 0, "cheb_T: k must be nonnegative");
  require(k <= kMaxMonomialDegree, "cheb_T: degree above the monomial limit; use cheb_T_value");
  if (k == 0) return Polynomial({1.0});
  return chebyshev_recurrence(Polynomial({1.0}), Polynomial({0.0, 1.0}), k - 1);
}

double cheb_U_value(int k, double x) {
  require(k >= -1, "cheb_U_value: k must be at least -1");
  if (k == -1) return 0.0;
  double previous = 0.0;  // U_{-1}
  double current = 1.0;   // U_0
  for (int j = 0; j < k; ++j) {
    const double next = 2.0 * x * current - previous;
    previous = current;
    current = next;
  }
  return current;
}

double cheb_T_value(int k, double x) {
  require(k >= 0, "cheb_T_value: k must be nonnegative");
  if (k == 0) return 1.0;
  double previous = 1.0;
  double current = x;
  for (int j = 1; j < k; ++j) {
    const double next = 2.0 * x * current - previous;
    previous = current;
    current = next;
  }
  return current;
}

namespace {

void require_q_domain(int d, int k) {
  require(d >= 3, "q_k: degree must be at least 3");
  require(k >= 1, "q_k: defined for k >= 1 (distance 0 has correlation 1)");
}

}  // namespace

Polynomial q_poly(int d, int k) {
  require_q_domain(d, k);
  const double a = std::sqrt(static_cast<double>(d - 1) / d);
  const double b = 1.0 / std::sqrt(static_cast<double>(d) * (d - 1));
  return a * cheb_U(k) - b * cheb_U(k - 2);
}

double q_value(int d, int k, double x) {
  require_q_domain(d, k);
  const double a = std::sqrt(static_cast<double>(d - 1) / d);
  const double b = 1.0 / std::sqrt(static_cast<double>(d) * (d - 1));
  return a * cheb_U_value(k, x) - b * cheb_U_value(k - 2, x);
}

double corr_bound(int d, int k) {
  require(d >= 3, "corr_bound: degree must be at least 3");
  require(k >= 0, "corr_bound: distance must be nonnegative");
  return (k + 1.0 - 2.0 * k / d) * std::pow(d - 1.0, -0.5 * k);
}

double MeasureOnInterval::total_mass() const {
  double sum = 0.0;
  for (double w : weights) sum += w;
  return sum;
}

MeasureOnInterval point_masses(std::vector<double> nodes, std::vector<double> weights,
                               double lower, double upper) {
  require(nodes.size() == weights.size(), "point_masses: nodes and weights differ in length");
  require(!nodes.empty(), "point_masses: need at least one atom");
  require(lower <= upper, "point_masses: empty support interval");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    require(std::isfinite(nodes[i]) && std::isfinite(weights[i]), "point_masses: non-finite input");
    require(weights[i] >= 0.0, "point_masses: negative weight");
    require(nodes[i] >= lower && nodes[i] <= upper, "point_masses: atom outside the support");
  }
  MeasureOnInterval m;
  m.lower = lower;
  m.upper = upper;
  m.kind = MeasureOnInterval::Kind::point_masses;
  m.nodes = std::move(nodes);
  m.weights = std::move(weights);
  return m;
}

MeasureOnInterval rescale(const MeasureOnInterval& measure, double a, double b) {
  require(measure.upper > measure.lower, "rescale: degenerate support interval");
  const double scale = (b - a) / (measure.upper - measure.lower);
  MeasureOnInterval out = measure;
  out.lower = a;
  out.upper = b;
  for (double& x : out.nodes) x = std::clamp(a + (x - measure.lower) * scale, std::min(a, b),
                                             std::max(a, b));
  return out;
}

double km_density(int d, double t) {
  require(d >= 3, "km_density: degree must be at least 3");
  const double edge2 = 4.0 * (d - 1);
  if (t * t >= edge2) return 0.0;
  return d / (2.0 * std::numbers::pi) * std::sqrt(edge2 - t * t) / (static_cast<double>(d) * d - t * t);
}

MeasureOnInterval km_measure(int d, int grid_size) {
  require(d >= 3, "km_measure: degree must be at least 3");
  require(grid_size >= 1, "km_measure: grid must have at least one node");
  const double edge = 2.0 * std::sqrt(d - 1.0);
  const double h = std::numbers::pi / grid_size;
  MeasureOnInterval m;
  m.lower = -edge;
  m.upper = edge;
  m.kind = MeasureOnInterval::Kind::gridded_density;
  m.nodes.resize(static_cast<std::size_t>(grid_size));
  m.weights.resize(static_cast<std::size_t>(grid_size));
  for (int j = 0; j < grid_size; ++j) {
    // Ascending t: theta runs from pi down to 0.
    const double theta = std::numbers::pi - (j + 0.5) * h;
    const double t = edge * std::cos(theta);
    const double sin_theta = std::sin(theta);
    // density(t) dt with sqrt(4(d-1) - t^2) = edge sin(theta), dt = edge sin(theta) dtheta.
    const double dens = d / (2.0 * std::numbers::pi) * edge * sin_theta /
                        (static_cast<double>(d) * d - t * t);
    m.nodes[j] = t;
    m.weights[j] = dens * edge * sin_theta * h;
  }
  return m;
}

MeasureOnInterval km_measure_normalized(int d, int grid_size) {
  return rescale(km_measure(d, grid_size), -1.0, 1.0);
}

double km_moment(int d, int k, int grid_size) {
  require(k >= 0, "km_moment: k must be nonnegative");
  if (k % 2 == 1) return 0.0;
  const auto m = km_measure(d, grid_size);
  return m.integrate([k](double t) { return std::pow(t, k); });
}

CorrelationSequence corr_sequence_from_measure(int d, const MeasureOnInterval& eta, int max_k) {
  require(d >= 3, "correlation sequence: degree must be at least 3");
  require(max_k >= 0, "correlation sequence: max_k must be nonnegative");
  require(eta.nodes.size() == eta.weights.size(), "correlation sequence: malformed measure");
  constexpr double kSupportSlack = 1e-12;
  for (std::size_t i = 0; i < eta.nodes.size(); ++i) {
    require(std::abs(eta.nodes[i]) <= 1.0 + kSupportSlack,
            "correlation sequence: measure has mass outside [-1, 1]");
    require(eta.weights[i] >= 0.0, "correlation sequence: negative weight");
  }
  require(std::abs(eta.total_mass() - 1.0) <= 1e-9,
          "correlation sequence: measure is not a probability measure");

  CorrelationSequence seq;
  seq.d = d;
  seq.values.assign(static_cast<std::size_t>(max_k) + 1, 0.0);
  seq.values[0] = 1.0;
  const double a = std::sqrt((d - 1.0) / d);
  const double b = 1.0 / std::sqrt(static_cast<double>(d) * (d - 1));
  for (std::size_t i = 0; i < eta.nodes.size(); ++i) {
    const double x = std::clamp(eta.nodes[i], -1.0, 1.0);
    const double w = eta.weights[i];
    double u_prev2 = 0.0;  // U_{k-2}
    double u_prev = 0.0;   // U_{k-1}
    double u = 1.0;        // U_k, starting at k = 0
    for (int k = 1; k <= max_k; ++k) {
      u_prev2 = u_prev;
      u_prev = u;
      u = 2.0 * x * u_prev - u_prev2;
      seq.values[k] += w * (a * u - b * u_prev2);
    }
  }
  for (int k = 1; k <= max_k; ++k) {
    seq.values[k] /= std::sqrt(d * std::pow(d - 1.0, k - 1));
  }
  return seq;
}

}  // namespace treecorr
