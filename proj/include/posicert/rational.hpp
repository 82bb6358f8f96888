#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace posicert {

/// Exact rational in canonical form (gcd(|num|, den) = 1, den > 0).
using Rational = mpq_class;
using Integer = mpz_class;

/// Thrown on malformed input (bad JSON, non-fraction coefficient strings,
/// arity mismatches). Precondition violations in the library use
/// std::invalid_argument.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// num/den reduced to canonical form (the two-argument mpq_class
/// constructor does not reduce). den must be nonzero.
Rational make_rational(long num, long den);

/// Parses "p" or "p/q" (optional leading '-'); decimals and exponents are
/// rejected so that every coefficient on disk is exact.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" text ("p" when the denominator is 1).
std::string to_string(const Rational& q);

Rational abs(const Rational& q);

/// q^e for e >= 0.
Rational pow(const Rational& q, unsigned e);

/// Returns r with r*r == q when q is the square of a rational.
std::optional<Rational> exact_sqrt(const Rational& q);

double to_double(const Rational& q);

/// Exact conversion of a finite double (every binary64 is a dyadic rational).
Rational from_double(double v);

int sign(const Rational& q);

}  // namespace posicert
