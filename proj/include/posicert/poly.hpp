#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "posicert/rational.hpp"

namespace posicert {

/// Exponent vector x^a = x_1^{a_1} ... x_n^{a_n}.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::size_t nvars) : exps_(nvars, 0) {}
  explicit Monomial(std::vector<unsigned> exps) : exps_(std::move(exps)) {}
  Monomial(std::initializer_list<unsigned> exps) : exps_(exps) {}

  static Monomial variable(std::size_t nvars, std::size_t i, unsigned power = 1);

  std::size_t nvars() const { return exps_.size(); }
  unsigned degree() const;
  unsigned operator[](std::size_t i) const { return exps_[i]; }
  const std::vector<unsigned>& exponents() const { return exps_; }
  bool is_constant() const { return degree() == 0; }

  Monomial operator*(const Monomial& other) const;

  bool operator==(const Monomial&) const = default;

 private:
  std::vector<unsigned> exps_;
};

/// Graded lexicographic order: lower total degree first, ties broken
/// lexicographically with x_1 > x_2 > ... > x_n.
struct GrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

/// Closed axis-aligned box with rational bounds.
struct Interval {
  Rational lo;
  Rational hi;
};

class Box {
 public:
  Box() = default;
  explicit Box(std::vector<Interval> axes);

  /// [-1,1]^n
  static Box symmetric(std::size_t n);
  /// [0,1]^n
  static Box unit(std::size_t n);
  /// [-1,1]^n x [0,1]^m
  static Box lifted(std::size_t n, std::size_t m);

  std::size_t dims() const { return axes_.size(); }
  const Interval& operator[](std::size_t i) const { return axes_[i]; }
  const std::vector<Interval>& axes() const { return axes_; }

  /// Uniform grid of `points_per_axis` points per axis (endpoints included).
  std::vector<std::vector<Rational>> grid(unsigned points_per_axis) const;

 private:
  std::vector<Interval> axes_;
};

/// Sparse multivariate polynomial with exact rational coefficients.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, Rational, GrlexLess>;

  Polynomial() = default;
  explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, const Rational& c);
  static Polynomial variable(std::size_t nvars, std::size_t i);
  static Polynomial term(const Monomial& m, const Rational& c);

  std::size_t nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  /// Total degree; 0 for the zero polynomial.
  unsigned degree() const;
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  Rational coeff(const Monomial& m) const;
  Rational constant_term() const;

  /// Accumulates c*m into the polynomial, pruning a resulting zero.
  void add_term(const Monomial& m, const Rational& c);

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Polynomial& other);
  Polynomial& operator*=(const Rational& c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  Polynomial operator-() const;

  Polynomial pow(unsigned e) const;

  bool operator==(const Polynomial& other) const;

  /// Human-readable rendering, e.g. "1/4 + x1 - x1^2".
  std::string to_string() const;

 private:
  void require_same_arity(const Polynomial& other, const char* op) const;

  std::size_t nvars_ = 0;
  TermMap terms_;
};

Polynomial add(const Polynomial& a, const Polynomial& b);
Polynomial mul(const Polynomial& a, const Polynomial& b);

/// Substitutes x_i <- images[i] for every variable of p. All images share an
/// arity, which becomes the arity of the result.
Polynomial substitute(const Polynomial& p, std::span<const Polynomial> images);

/// F(x, u) with u <- subs(x): F has n + m variables, each substituent n.
Polynomial compose(const Polynomial& F, std::span<const Polynomial> subs);

/// Re-embeds p into `nvars` >= p.nvars() variables (new variables appended).
Polynomial extend_vars(const Polynomial& p, std::size_t nvars);

/// d p / d x_i
Polynomial partial_derivative(const Polynomial& p, std::size_t i);
Rational eval(const Polynomial& p, std::span<const Rational> point);
double eval_double(const Polynomial& p, std::span<const double> point);

Rational norm_l1_coef(const Polynomial& p);
Rational norm_linf_coef(const Polynomial& p);
/// max_a |p_a| * a! / |a|!
Rational norm_weighted_L(const Polynomial& p);

struct SupNormBracket {
  Rational lower;  // max |p| over the grid
  Rational upper;  // sum |p_a| * prod max(|lo_i|, |hi_i|)^{a_i}
};

SupNormBracket sup_norm_estimate(const Polynomial& p, const Box& box, unsigned grid_points_per_axis);

/// Parses an arithmetic expression such as "1 - (1 + x1)*(1 + x2)/2" over
/// variables x1..xn. Names u1, u2, ... denote variables u_offset+1, ...
/// (so F(x, u) can be written with n = u_offset). Division is by constants only.
Polynomial parse_polynomial(std::string_view text, std::size_t nvars, std::size_t u_offset);
inline Polynomial parse_polynomial(std::string_view text, std::size_t nvars) {
  return parse_polynomial(text, nvars, nvars);
}

}  // namespace posicert
