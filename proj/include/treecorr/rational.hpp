#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace treecorr {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Nearest double (to within a few ulps) even when numerator and denominator
// are far outside the double range.
double to_double(const Rational& value);

// Natural log of a positive rational, robust to huge numerators/denominators.
double log_of(const Rational& value);

// "p/q" in lowest terms, always with an explicit denominator.
std::string format_rational(const Rational& value);

BigInt ipow(const BigInt& base, unsigned exponent);

}  // namespace treecorr
