#pragma once
// Exact rational arithmetic used everywhere a verdict depends on a number.
// GMP-backed; no floating point anywhere in this library's decision paths.

#include <boost/multiprecision/gmp.hpp>
#include <optional>
#include <string>
#include <vector>

namespace arbkit {

using Rat = boost::multiprecision::mpq_rational;
using Int = boost::multiprecision::mpz_int;

// Parse a rational from its external spellings:
//   "p/q"      (q > 0 after normalization; "3/-6" is accepted and normalized)
//   "123"      plain integer
//   "-0.625"   finite decimal (converted exactly; never rounded)
// Returns nullopt on anything else, including repeating-decimal notations,
// floats with exponents, NaN/inf spellings, and empty strings.
std::optional<Rat> parse_rational(const std::string& text);

// Canonical spelling: integer when the denominator is 1, otherwise "p/q"
// in lowest terms with q > 0. parse_rational(format_rational(x)) == x.
std::string format_rational(const Rat& x);

inline Rat rat(long p, long q = 1) { return Rat(p, q); }

std::string format_vector(const std::vector<Rat>& v);

} // namespace arbkit
