#include "posicert/bound_inputs.hpp"

#include <cmath>
#include <stdexcept>

namespace posicert {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::User:
      return "user";
    case Provenance::Estimated:
      return "estimated";
    case Provenance::Default:
      return "default";
  }
  return "user";
}

Provenance BoundInputs::source(const std::string& field) const {
  const auto it = provenance.find(field);
  return it == provenance.end() ? Provenance::User : it->second;
}

void BoundInputs::validate() const {
  if (kappa < 1) throw std::invalid_argument("kappa must be >= 1");
  if (L_g < 1) throw std::invalid_argument("L_g must be >= 1");
  if (c_g <= 0) throw std::invalid_argument("c_g must be positive");
  if (f_min <= 0) throw std::invalid_argument("f_min must be positive");
}

Rational power_upper(const Rational& base, const Rational& exponent) {
  if (base < 1 || exponent < 0) throw std::invalid_argument("power_upper needs base >= 1, exponent >= 0");
  if (exponent.get_den() == 1) {
    if (!exponent.get_num().fits_ulong_p()) throw std::overflow_error("power_upper: exponent too large");
    return pow(base, static_cast<unsigned>(exponent.get_num().get_ui()));
  }
  // Round the inputs up, then pad by a relative 1e-12, far above the few ulps
  // that log, multiply and exp can lose.
  const double b = std::nextafter(to_double(base), HUGE_VAL);
  const double e = std::nextafter(to_double(exponent), HUGE_VAL);
  const double bumped = std::exp(std::log(b) * e) * (1 + 1e-12);
  if (!std::isfinite(bumped)) throw std::overflow_error("power_upper: result overflows double");
  return from_double(bumped);
}

}  // namespace posicert
