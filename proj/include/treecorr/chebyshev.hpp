#pragma once

#include <span>
#include <vector>

namespace treecorr {

// Real polynomial in the monomial basis; trailing zero coefficients trimmed.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coefficients);

  // coefficients()[j] multiplies x^j. Empty for the zero polynomial.
  const std::vector<double>& coefficients() const { return coefficients_; }
  int degree() const { return static_cast<int>(coefficients_.size()) - 1; }
  bool is_zero() const { return coefficients_.empty(); }

  double operator()(double x) const;  // Horner

  Polynomial times_x() const;
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(double s, const Polynomial& p);
  friend bool operator==(const Polynomial& a, const Polynomial& b) = default;

 private:
  void trim();
  std::vector<double> coefficients_;
};

// Largest k for which monomial coefficients are produced. Every coefficient
// up to here is an integer times a power of two that fits a double exactly.
inline constexpr int kMaxMonomialDegree = 60;

Polynomial cheb_U(int k);  // k >= -1, U_{-1} = 0
Polynomial cheb_T(int k);  // k >= 0

// Values by the three-term recurrence in x; usable for any k.
double cheb_U_value(int k, double x);
double cheb_T_value(int k, double x);

// q_k(x) = sqrt((d-1)/d) U_k(x) - U_{k-2}(x) / sqrt(d(d-1)), for d >= 3, k >= 1.
Polynomial q_poly(int d, int k);
double q_value(int d, int k, double x);

// (k + 1 - 2k/d) (d - 1)^(-k/2): bound on |corr| at distance k.
double corr_bound(int d, int k);

// Weighted nodes on [lower, upper]; covers both point-mass lists and
// densities discretised on a quadrature grid.
struct MeasureOnInterval {
  enum class Kind { point_masses, gridded_density };

  double lower = -1.0;
  double upper = 1.0;
  Kind kind = Kind::point_masses;
  std::vector<double> nodes;
  std::vector<double> weights;

  double total_mass() const;
  // Sum of weight * f(node).
  template <typename F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

// Throws PreconditionError for negative weights, nodes outside the support,
// or mismatched sizes.
MeasureOnInterval point_masses(std::vector<double> nodes, std::vector<double> weights,
                               double lower = -1.0, double upper = 1.0);

// Image of the measure under the affine map taking [lower, upper] onto [a, b].
MeasureOnInterval rescale(const MeasureOnInterval& measure, double a, double b);

// Kesten-McKay density d/(2 pi) sqrt(4(d-1) - t^2) / (d^2 - t^2), zero off
// [-2 sqrt(d-1), 2 sqrt(d-1)].
double km_density(int d, double t);

// The density discretised by composite midpoint in the angle variable
// t = 2 sqrt(d-1) cos(theta). The substitution removes the square-root edges,
// so mass and polynomial moments are accurate to rounding.
MeasureOnInterval km_measure(int d, int grid_size = 20000);

// Same measure pushed to [-1, 1] by t -> t / (2 sqrt(d-1)).
MeasureOnInterval km_measure_normalized(int d, int grid_size = 20000);

// k-th moment of the Kesten-McKay measure (0 for odd k).
double km_moment(int d, int k, int grid_size = 20000);

struct CorrelationSequence {
  int d = 0;
  std::vector<double> values;  // values[0] = 1
};

// x_0 = 1 and x_k = integral of q_k / sqrt(d (d-1)^(k-1)) against eta, for a
// probability measure eta on [-1, 1].
CorrelationSequence corr_sequence_from_measure(int d, const MeasureOnInterval& eta, int max_k);

}  // namespace treecorr
