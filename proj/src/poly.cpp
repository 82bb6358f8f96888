#include "posicert/poly.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace posicert {

// ---------------------------------------------------------------- Monomial

Monomial Monomial::variable(std::size_t nvars, std::size_t i, unsigned power) {
  Monomial m(nvars);
  m.exps_.at(i) = power;
  return m;
}

unsigned Monomial::degree() const {
  unsigned d = 0;
  for (unsigned e : exps_) d += e;
  return d;
}

Monomial Monomial::operator*(const Monomial& other) const {
  if (other.nvars() != nvars()) throw std::invalid_argument("monomial arity mismatch");
  Monomial out = *this;
  for (std::size_t i = 0; i < exps_.size(); ++i) out.exps_[i] += other.exps_[i];
  return out;
}

bool GrlexLess::operator()(const Monomial& a, const Monomial& b) const {
  const unsigned da = a.degree();
  const unsigned db = b.degree();
  if (da != db) return da < db;
  // Equal degree: the monomial with the smaller leading exponent is smaller.
  return std::lexicographical_compare(a.exponents().begin(), a.exponents().end(),
                                      b.exponents().begin(), b.exponents().end());
}

// --------------------------------------------------------------------- Box

Box::Box(std::vector<Interval> axes) : axes_(std::move(axes)) {
  for (const auto& iv : axes_) {
    if (iv.lo > iv.hi) throw std::invalid_argument("box axis with lower > upper");
  }
}

Box Box::symmetric(std::size_t n) { return Box(std::vector<Interval>(n, Interval{-1, 1})); }

Box Box::unit(std::size_t n) { return Box(std::vector<Interval>(n, Interval{0, 1})); }

Box Box::lifted(std::size_t n, std::size_t m) {
  std::vector<Interval> axes(n, Interval{-1, 1});
  axes.resize(n + m, Interval{0, 1});
  return Box(std::move(axes));
}

std::vector<std::vector<Rational>> Box::grid(unsigned points_per_axis) const {
  if (points_per_axis < 2) throw std::invalid_argument("grid needs at least 2 points per axis");
  std::vector<std::vector<Rational>> out;
  out.reserve(axes_.size());
  for (const auto& iv : axes_) {
    std::vector<Rational> pts;
    pts.reserve(points_per_axis);
    const Rational width = iv.hi - iv.lo;
    for (unsigned k = 0; k < points_per_axis; ++k) {
      pts.emplace_back(iv.lo + width * make_rational(k, points_per_axis - 1));
    }
    out.push_back(std::move(pts));
  }
  return out;
}

// -------------------------------------------------------------- Polynomial

Polynomial Polynomial::constant(std::size_t nvars, const Rational& c) {
  Polynomial p(nvars);
  p.add_term(Monomial(nvars), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t i) {
  if (i >= nvars) throw std::invalid_argument("variable index out of range");
  Polynomial p(nvars);
  p.add_term(Monomial::variable(nvars, i), 1);
  return p;
}

Polynomial Polynomial::term(const Monomial& m, const Rational& c) {
  Polynomial p(m.nvars());
  p.add_term(m, c);
  return p;
}

unsigned Polynomial::degree() const {
  // Terms are graded, so the last key carries the maximal total degree.
  return terms_.empty() ? 0 : terms_.rbegin()->first.degree();
}

Rational Polynomial::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational Polynomial::constant_term() const { return coeff(Monomial(nvars_)); }

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (m.nvars() != nvars_) throw std::invalid_argument("monomial arity does not match polynomial");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void Polynomial::require_same_arity(const Polynomial& other, const char* op) const {
  if (other.nvars_ != nvars_) {
    throw std::invalid_argument(std::string(op) + ": variable-count mismatch (" +
                                std::to_string(nvars_) + " vs " + std::to_string(other.nvars_) + ")");
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  require_same_arity(other, "add");
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  require_same_arity(other, "sub");
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.require_same_arity(b, "mul");
  Polynomial out(a.nvars_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
  }
  return out;
}

Polynomial& Polynomial::operator*=(const Polynomial& other) { return *this = *this * other; }

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, coef] : terms_) coef *= c;
  return *this;
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial result = constant(nvars_, 1);
  Polynomial base = *this;
  while (e > 0) {
    if (e & 1U) result *= base;
    e >>= 1U;
    if (e > 0) base *= base;
  }
  return result;
}

bool Polynomial::operator==(const Polynomial& other) const {
  return nvars_ == other.nvars_ && terms_ == other.terms_;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational mag = posicert::abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    const bool unit = mag == 1 && !m.is_constant();
    if (!unit) os << posicert::to_string(mag);
    bool need_star = !unit;
    for (std::size_t i = 0; i < m.nvars(); ++i) {
      if (m[i] == 0) continue;
      if (need_star) os << "*";
      os << "x" << (i + 1);
      if (m[i] > 1) os << "^" << m[i];
      need_star = true;
    }
  }
  return os.str();
}

Polynomial add(const Polynomial& a, const Polynomial& b) { return a + b; }
Polynomial mul(const Polynomial& a, const Polynomial& b) { return a * b; }

Polynomial substitute(const Polynomial& p, std::span<const Polynomial> images) {
  if (images.size() != p.nvars()) {
    throw std::invalid_argument("substitute: expected " + std::to_string(p.nvars()) + " images, got " +
                                std::to_string(images.size()));
  }
  const std::size_t target = images.empty() ? 0 : images.front().nvars();
  for (const auto& img : images) {
    if (img.nvars() != target) throw std::invalid_argument("substitute: images differ in arity");
  }
  // powers[i][k] = images[i]^k, filled lazily
  std::vector<std::vector<Polynomial>> powers(images.size());
  auto power_of = [&](std::size_t i, unsigned k) -> const Polynomial& {
    auto& cache = powers[i];
    if (cache.empty()) cache.push_back(Polynomial::constant(target, 1));
    while (cache.size() <= k) cache.push_back(cache.back() * images[i]);
    return cache[k];
  };
  Polynomial out(target);
  for (const auto& [m, c] : p.terms()) {
    Polynomial termval = Polynomial::constant(target, c);
    for (std::size_t i = 0; i < m.nvars(); ++i) {
      if (m[i] != 0) termval *= power_of(i, m[i]);
    }
    out += termval;
  }
  return out;
}

Polynomial compose(const Polynomial& F, std::span<const Polynomial> subs) {
  if (subs.size() > F.nvars()) throw std::invalid_argument("compose: more substituents than variables");
  const std::size_t n = F.nvars() - subs.size();
  for (const auto& s : subs) {
    if (s.nvars() != n) {
      throw std::invalid_argument("compose: substituent arity " + std::to_string(s.nvars()) + " != " +
                                  std::to_string(n));
    }
  }
  std::vector<Polynomial> images;
  images.reserve(F.nvars());
  for (std::size_t i = 0; i < n; ++i) images.push_back(Polynomial::variable(n, i));
  images.insert(images.end(), subs.begin(), subs.end());
  return substitute(F, images);
}

Polynomial extend_vars(const Polynomial& p, std::size_t nvars) {
  if (nvars < p.nvars()) throw std::invalid_argument("extend_vars: cannot drop variables");
  Polynomial out(nvars);
  for (const auto& [m, c] : p.terms()) {
    std::vector<unsigned> e = m.exponents();
    e.resize(nvars, 0);
    out.add_term(Monomial(std::move(e)), c);
  }
  return out;
}

Polynomial partial_derivative(const Polynomial& p, std::size_t i) {
  if (i >= p.nvars()) throw std::invalid_argument("partial_derivative: variable index out of range");
  Polynomial out(p.nvars());
  for (const auto& [m, c] : p.terms()) {
    if (m[i] == 0) continue;
    auto e = m.exponents();
    const unsigned k = e[i]--;
    out.add_term(Monomial(std::move(e)), c * k);
  }
  return out;
}

Rational eval(const Polynomial& p, std::span<const Rational> point) {
  if (point.size() != p.nvars()) {
    throw std::invalid_argument("eval: point has " + std::to_string(point.size()) + " coordinates, expected " +
                                std::to_string(p.nvars()));
  }
  const unsigned d = p.degree();
  std::vector<std::vector<Rational>> powers(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) {
    powers[i].reserve(d + 1);
    powers[i].emplace_back(1);
    for (unsigned k = 1; k <= d; ++k) powers[i].emplace_back(powers[i].back() * point[i]);
  }
  Rational acc = 0;
  Rational t;
  for (const auto& [m, c] : p.terms()) {
    t = c;
    for (std::size_t i = 0; i < m.nvars(); ++i) {
      if (m[i] != 0) t *= powers[i][m[i]];
    }
    acc += t;
  }
  return acc;
}

double eval_double(const Polynomial& p, std::span<const double> point) {
  if (point.size() != p.nvars()) throw std::invalid_argument("eval_double: point length mismatch");
  double acc = 0.0;
  for (const auto& [m, c] : p.terms()) {
    double t = to_double(c);
    for (std::size_t i = 0; i < m.nvars(); ++i) {
      if (m[i] != 0) t *= std::pow(point[i], static_cast<int>(m[i]));
    }
    acc += t;
  }
  return acc;
}

Rational norm_l1_coef(const Polynomial& p) {
  Rational s = 0;
  for (const auto& [m, c] : p.terms()) s += posicert::abs(c);
  return s;
}

Rational norm_linf_coef(const Polynomial& p) {
  Rational s = 0;
  for (const auto& [m, c] : p.terms()) s = std::max(s, posicert::abs(c));
  return s;
}

namespace {

Integer factorial(unsigned k) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), k);
  return r;
}

}  // namespace

Rational norm_weighted_L(const Polynomial& p) {
  Rational best = 0;
  for (const auto& [m, c] : p.terms()) {
    Integer num = 1;
    for (unsigned e : m.exponents()) num *= factorial(e);
    Rational w(num, factorial(m.degree()));
    w.canonicalize();
    const Rational weighted = posicert::abs(c) * w;
    best = std::max(best, weighted);
  }
  return best;
}

SupNormBracket sup_norm_estimate(const Polynomial& p, const Box& box, unsigned grid_points_per_axis) {
  if (box.dims() != p.nvars()) throw std::invalid_argument("sup_norm_estimate: box dimension mismatch");
  SupNormBracket out;
  const auto axes = box.grid(grid_points_per_axis);
  const std::size_t n = p.nvars();
  std::vector<std::size_t> idx(n, 0);
  std::vector<Rational> point(n);
  out.lower = 0;
  while (true) {
    for (std::size_t i = 0; i < n; ++i) point[i] = axes[i][idx[i]];
    out.lower = std::max(out.lower, posicert::abs(eval(p, point)));
    std::size_t k = 0;
    while (k < n && ++idx[k] == grid_points_per_axis) idx[k++] = 0;
    if (k == n) break;
  }
  std::vector<Rational> radius(n);
  for (std::size_t i = 0; i < n; ++i) radius[i] = std::max(posicert::abs(box[i].lo), posicert::abs(box[i].hi));
  out.upper = 0;
  for (const auto& [m, c] : p.terms()) {
    Rational t = posicert::abs(c);
    for (std::size_t i = 0; i < n; ++i) t *= posicert::pow(radius[i], m[i]);
    out.upper += t;
  }
  return out;
}

}  // namespace posicert

namespace posicert {

namespace {

class ExprParser {
 public:
  ExprParser(std::string_view text, std::size_t nvars, std::size_t u_offset)
      : text_(text), nvars_(nvars), u_offset_(u_offset) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("polynomial expression: " + what + " at offset " + std::to_string(pos_) + " in \"" +
                     std::string(text_) + "\"");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }

  Polynomial expr() {
    Polynomial acc = term();
    while (true) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  bool starts_factor() {
    skip_ws();
    if (pos_ >= text_.size()) return false;
    const char c = text_[pos_];
    return c == '(' || c == 'x' || c == 'u' || std::isdigit(static_cast<unsigned char>(c));
  }

  Polynomial term() {
    Polynomial acc = unary();
    while (true) {
      if (accept('*')) {
        acc *= unary();
      } else if (accept('/')) {
        Polynomial d = unary();
        if (d.degree() != 0 || d.is_zero()) fail("division by a non-constant or zero");
        acc *= Rational(1) / d.constant_term();
      } else if (starts_factor()) {
        acc *= unary();
      } else {
        return acc;
      }
    }
  }

  Polynomial unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    Polynomial base = primary();
    if (accept('^')) {
      skip_ws();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected integer exponent");
      base = base.pow(static_cast<unsigned>(std::stoul(std::string(text_.substr(start, pos_ - start)))));
    }
    return base;
  }

  std::size_t index_digits() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected variable index");
    return std::stoul(std::string(text_.substr(start, pos_ - start)));
  }

  Polynomial primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial p = expr();
      if (!accept(')')) fail("expected ')'");
      return p;
    }
    if (c == 'x' || c == 'u') {
      ++pos_;
      const std::size_t k = index_digits();
      const std::size_t idx = (c == 'x' ? 0 : u_offset_) + k - 1;
      if (k == 0 || idx >= nvars_) fail("variable out of range");
      return Polynomial::variable(nvars_, idx);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return Polynomial::constant(nvars_, parse_rational(text_.substr(start, pos_ - start)));
    }
    fail("unexpected character");
  }

  std::string_view text_;
  std::size_t nvars_;
  std::size_t u_offset_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, std::size_t nvars, std::size_t u_offset) {
  return ExprParser(text, nvars, u_offset).parse();
}

}  // namespace posicert
