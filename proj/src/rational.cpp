#include "treecorr/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace treecorr {

namespace {

// value = mantissa * 2^exponent with mantissa carrying ~64 significant bits.
double scaled_log2_parts(const BigInt& value, long& exponent) {
  const long bits = static_cast<long>(boost::multiprecision::msb(value)) + 1;
  const long shift = bits > 64 ? bits - 64 : 0;
  const BigInt top = value >> shift;
  exponent = shift;
  return top.convert_to<double>();
}

}  // namespace

double to_double(const Rational& value) {
  if (value == 0) return 0.0;
  const bool negative = value < 0;
  const BigInt num = abs(boost::multiprecision::numerator(value));
  const BigInt den = boost::multiprecision::denominator(value);
  long num_exp = 0;
  long den_exp = 0;
  const double num_top = scaled_log2_parts(num, num_exp);
  const double den_top = scaled_log2_parts(den, den_exp);
  const double result = std::ldexp(num_top / den_top, static_cast<int>(num_exp - den_exp));
  return negative ? -result : result;
}

double log_of(const Rational& value) {
  if (value <= 0) throw std::domain_error("log_of: non-positive rational");
  long num_exp = 0;
  long den_exp = 0;
  const double num_top = scaled_log2_parts(boost::multiprecision::numerator(value), num_exp);
  const double den_top = scaled_log2_parts(boost::multiprecision::denominator(value), den_exp);
  return std::log(num_top) - std::log(den_top) +
         static_cast<double>(num_exp - den_exp) * std::log(2.0);
}

std::string format_rational(const Rational& value) {
  return boost::multiprecision::numerator(value).str() + "/" +
         boost::multiprecision::denominator(value).str();
}

BigInt ipow(const BigInt& base, unsigned exponent) {
  return boost::multiprecision::pow(base, exponent);
}

}  // namespace treecorr
