#pragma once

// Shared generators for property-style tests.

#include <random>
#include <vector>

#include "posicert/poly.hpp"

namespace posicert::testing {

inline Rational ratio(long num, long den) { return make_rational(num, den); }

inline Rational random_rational(std::mt19937_64& rng, int max_num = 9, int max_den = 4) {
  std::uniform_int_distribution<int> num(-max_num, max_num);
  std::uniform_int_distribution<int> den(1, max_den);
  return make_rational(num(rng), den(rng));
}

inline Monomial random_monomial(std::mt19937_64& rng, std::size_t n, unsigned max_degree) {
  std::uniform_int_distribution<unsigned> deg(0, max_degree);
  std::uniform_int_distribution<std::size_t> var(0, n - 1);
  std::vector<unsigned> e(n, 0);
  const unsigned d = deg(rng);
  for (unsigned k = 0; k < d; ++k) ++e[var(rng)];
  return Monomial(std::move(e));
}

/// Random polynomial in n variables with total degree <= max_degree.
inline Polynomial random_polynomial(std::mt19937_64& rng, std::size_t n, unsigned max_degree,
                                    std::size_t max_terms = 6) {
  std::uniform_int_distribution<std::size_t> count(1, max_terms);
  Polynomial p(n);
  const std::size_t k = count(rng);
  for (std::size_t t = 0; t < k; ++t) p.add_term(random_monomial(rng, n, max_degree), random_rational(rng));
  return p;
}

/// Random nonzero polynomial whose degree is exactly `degree`.
inline Polynomial random_polynomial_exact(std::mt19937_64& rng, std::size_t n, unsigned degree,
                                          std::size_t max_terms = 6) {
  while (true) {
    Polynomial p = random_polynomial(rng, n, degree, max_terms);
    std::vector<unsigned> e(n, 0);
    std::uniform_int_distribution<std::size_t> var(0, n - 1);
    for (unsigned k = 0; k < degree; ++k) ++e[var(rng)];
    p.add_term(Monomial(std::move(e)), Rational(1 + static_cast<int>(rng() % 5)));
    if (!p.is_zero() && p.degree() == degree) return p;
  }
}

inline std::vector<Rational> random_point(std::mt19937_64& rng, std::size_t n, int lo = -1, int hi = 1,
                                          int resolution = 64) {
  std::uniform_int_distribution<int> k(lo * resolution, hi * resolution);
  std::vector<Rational> x;
  for (std::size_t i = 0; i < n; ++i) {
    Rational q(k(rng), resolution);
    q.canonicalize();
    x.push_back(q);
  }
  return x;
}

}  // namespace posicert::testing
