#pragma once

#include <map>
#include <string>

#include "posicert/rational.hpp"

namespace posicert {

enum class Provenance { User, Estimated, Default };

std::string to_string(Provenance p);

/// Parameters consumed by the penalty formula and every degree-bound calculator.
struct BoundInputs {
  unsigned n = 1;
  unsigned m = 0;
  unsigned d = 1;
  unsigned d_g = 1;
  Rational kappa = 1;
  Rational L_g = 1;
  Rational c_g = 1;
  Rational f_min = 1;
  /// Keyed by field name ("kappa", "L_g", ...); missing entries mean User.
  std::map<std::string, Provenance> provenance;

  Provenance source(const std::string& field) const;
  /// Throws std::invalid_argument unless kappa >= 1, L_g >= 1, c_g > 0, f_min > 0.
  void validate() const;
};

/// base^exponent for base >= 1 and rational exponent >= 0: exact when the
/// exponent is an integer, otherwise a floating value rounded upward and
/// returned as its exact binary rational.
Rational power_upper(const Rational& base, const Rational& exponent);

}  // namespace posicert
