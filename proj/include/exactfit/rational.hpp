#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>

namespace exactfit {

/// Exact rational scalar used for every numeric value in the toolkit.
/// The backend keeps values canonical (lowest terms, positive denominator)
/// after every operation; arithmetic is exact and division by zero throws.
using Rat = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

/// Interchange form: "p/q", or just "p" when the denominator is 1.
std::string rat_to_string(const Rat& r);

/// Parses "p" or "p/q" (optional leading '-', decimal digits only, positive
/// denominator). Decimal-point notation is rejected.
/// Throws std::invalid_argument on malformed input or a zero denominator.
Rat rat_from_string(std::string_view s);

}  // namespace exactfit
