#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace ctx {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "p" or "p/q" with optional sign, arbitrary precision.
/// Throws std::invalid_argument on anything else (including q = 0).
Rational parse_rational(const std::string& text);

/// Lowest terms; "p" when the denominator is 1, otherwise "p/q".
std::string format_rational(const Rational& value);

/// Exact value of a finite double. Throws std::invalid_argument on NaN/Inf.
Rational rational_from_double(double x);

/// Closest rational to x with denominator <= max_denominator.
/// Ties are broken towards the smaller denominator.
Rational nearest_rational(double x, const BigInt& max_denominator);

double to_double(const Rational& value);

} // namespace ctx
