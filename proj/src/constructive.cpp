#include "posicert/constructive.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace posicert {

namespace {

using Terms = RCert::Terms;

// Slots of 1 - x_i and 1 + x_i in GeneratorSystem::box.
std::size_t minus_slot(std::size_t i) { return 2 * i; }
std::size_t plus_slot(std::size_t i) { return 2 * i + 1; }

void accumulate(Terms& into, const Terms& from, const Rational& scale, std::size_t extra_slot) {
  for (const auto& [alpha, s] : from) {
    GenExponent e = alpha;
    ++e[extra_slot];
    into[e] += s * scale;
  }
}

class MonomialRecursion {
 public:
  const Terms& terms(const std::vector<unsigned>& alpha, int sign) {
    const auto key = std::make_pair(alpha, sign);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Terms out;
    const auto first = std::find_if(alpha.begin(), alpha.end(), [](unsigned e) { return e > 0; });
    if (first == alpha.end()) {
      if (sign > 0) out[GenExponent{}] = 2;
    } else {
      const auto i = static_cast<std::size_t>(first - alpha.begin());
      std::vector<unsigned> rest = alpha;
      --rest[i];
      const Terms& plus = terms(rest, +1);
      const Terms& minus = terms(rest, -1);
      const Rational half(1, 2);
      if (sign > 0) {
        accumulate(out, plus, half, plus_slot(i));
        accumulate(out, minus, half, minus_slot(i));
      } else {
        accumulate(out, plus, half, minus_slot(i));
        accumulate(out, minus, half, plus_slot(i));
      }
    }
    return memo_.emplace(key, std::move(out)).first->second;
  }

 private:
  std::map<std::pair<std::vector<unsigned>, int>, Terms> memo_;
};

// Multiplier slots of a QCert over box(n): index 0 is sigma_0.
std::vector<SosList> even_monomial_multipliers(const Monomial& alpha) {
  const std::size_t n = alpha.nvars();
  std::vector<SosList> mult(2 * n + 1, SosList(n));
  const auto& e = alpha.exponents();
  const auto first = std::find_if(e.begin(), e.end(), [](unsigned k) { return k > 0; });
  if (first == e.end()) return mult;
  const auto i = static_cast<std::size_t>(first - e.begin());
  const Polynomial one = Polynomial::constant(n, 1);
  const Polynomial xi = Polynomial::variable(n, i);
  const Rational half(1, 2);
  mult[1 + minus_slot(i)].add_square(one + xi, half);
  mult[1 + plus_slot(i)].add_square(one - xi, half);
  std::vector<unsigned> rest = e;
  --rest[i];
  const auto tail = even_monomial_multipliers(Monomial(std::move(rest)));
  for (std::size_t j = 0; j < mult.size(); ++j) mult[j].append(tail[j].times_square(xi));
  return mult;
}

}  // namespace

RCert one_pm_monomial_R(const Monomial& alpha, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
  MonomialRecursion rec;
  return RCert(GeneratorSystem::box(alpha.nvars()), rec.terms(alpha.exponents(), sign), alpha.degree());
}

QCert one_minus_even_monomial_Q(const Monomial& alpha) {
  return QCert(GeneratorSystem::box(alpha.nvars()), even_monomial_multipliers(alpha), 2 * alpha.degree() + 1);
}

Certificate norm1_minus_f(const Polynomial& f, Cone cone) {
  if (f.is_zero()) throw std::invalid_argument("norm1_minus_f: f must be nonzero");
  const std::size_t n = f.nvars();
  const unsigned d = f.degree();
  if (cone == Cone::R || cone == Cone::T) {
    MonomialRecursion rec;
    Terms acc;
    for (const auto& [alpha, c] : f.terms()) {
      const Rational weight = abs(c);
      for (const auto& [e, s] : rec.terms(alpha.exponents(), -sign(c))) acc[e] += s * weight;
    }
    RCert r(GeneratorSystem::box(n), std::move(acc), d);
    if (cone == Cone::R) return r;
    return to_preorder(r);
  }
  std::vector<SosList> mult(2 * n + 1, SosList(n));
  const Polynomial one = Polynomial::constant(n, 1);
  for (const auto& [alpha, c] : f.terms()) {
    const Rational half_weight = abs(c) / 2;
    // 1 - s x^a = 1/2 (1 - s x^a)^2 + 1/2 (1 - x^{2a})
    mult[0].add_square(one - Polynomial::term(alpha, sign(c)), half_weight);
    const auto even = even_monomial_multipliers(alpha);
    for (std::size_t j = 0; j < mult.size(); ++j) mult[j].append(even[j].scaled(half_weight));
  }
  return QCert(GeneratorSystem::box(n), std::move(mult), 2 * d + 1);
}

ScaledSystem scale_generators(const GeneratorSystem& sys) {
  ScaledSystem out;
  std::vector<Polynomial> gens;
  for (std::size_t j = 0; j < sys.size(); ++j) {
    if (sys[j].is_zero()) throw std::invalid_argument("scale_generators: zero generator " + sys.label(j));
    const Rational c = norm_l1_coef(sys[j]);
    gens.push_back(sys[j] * (Rational(1) / c));
    out.factors.push_back(c);
  }
  out.scaled = GeneratorSystem(sys.nvars(), std::move(gens), sys.labels());
  return out;
}

Certificate rescale_generators(const Certificate& cert, const GeneratorSystem& target,
                               std::span<const Rational> factors) {
  const GeneratorSystem& from = system_of(cert);
  if (from.size() != target.size() || factors.size() != target.size()) {
    throw std::invalid_argument("rescale_generators: size mismatch");
  }
  for (std::size_t j = 0; j < target.size(); ++j) {
    if (factors[j] <= 0 || !(from[j] == target[j] * factors[j])) {
      throw std::invalid_argument("rescale_generators: generator " + std::to_string(j) +
                                  " is not the stated positive multiple");
    }
  }
  if (const auto* r = std::get_if<RCert>(&cert)) {
    Terms terms;
    for (const auto& [alpha, s] : r->terms()) {
      Rational t = s;
      for (const auto& [j, e] : alpha) t *= pow(factors[j], e);
      terms.emplace(alpha, t);
    }
    return RCert(target, std::move(terms), r->budget());
  }
  if (const auto* q = std::get_if<QCert>(&cert)) {
    auto mult = q->multipliers();
    for (std::size_t j = 1; j < mult.size(); ++j) mult[j] = mult[j].scaled(factors[j - 1]);
    return QCert(target, std::move(mult), q->budget());
  }
  const auto& t = std::get<TCert>(cert);
  TCert::Multipliers mult;
  for (const auto& [alpha, s] : t.multipliers()) {
    Rational c = 1;
    for (std::size_t j : alpha) c *= factors[j];
    mult.emplace(alpha, s.scaled(c));
  }
  return TCert(target, std::move(mult), t.budget());
}

std::vector<QCert> box_from_ball(const QCert& ball_cert) {
  const std::size_t n = ball_cert.system().nvars();
  const Polynomial one = Polynomial::constant(n, 1);
  Polynomial ball = one;
  for (std::size_t i = 0; i < n; ++i) ball -= Polynomial::variable(n, i).pow(2);
  if (!verify(ball_cert, ball).identity) {
    throw std::invalid_argument("box_from_ball: certificate does not verify against 1 - ||x||^2");
  }
  const QCert half = scale(ball_cert, Rational(1, 2));
  const unsigned budget = std::max(ball_cert.budget(), 2U);
  std::vector<QCert> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (int s : {-1, 1}) {
      auto mult = half.multipliers();
      mult[0].add_square(one + Polynomial::variable(n, i) * Rational(s), Rational(1, 2));
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) mult[0].add_square(Polynomial::variable(n, j), Rational(1, 2));
      }
      out.emplace_back(ball_cert.system(), std::move(mult), budget);
    }
  }
  return out;
}

// ------------------------------------------------------------ composition

namespace {

Terms mul_terms(const Terms& a, const Terms& b) {
  Terms out;
  for (const auto& [ea, sa] : a) {
    for (const auto& [eb, sb] : b) {
      GenExponent e = ea;
      for (const auto& [j, k] : eb) e[j] += k;
      out[e] += sa * sb;
    }
  }
  return out;
}

RCert compose_r(const RCert& outer, const GeneratorSystem& base, std::span<const Certificate> h_certs,
                unsigned budget) {
  const std::size_t mg = base.size();
  std::vector<std::vector<Terms>> powers(h_certs.size());
  auto power_of = [&](std::size_t k, unsigned e) -> const Terms& {
    auto& cache = powers[k];
    if (cache.empty()) cache.push_back(Terms{{GenExponent{}, Rational(1)}});
    while (cache.size() <= e) cache.push_back(mul_terms(cache.back(), std::get<RCert>(h_certs[k]).terms()));
    return cache[e];
  };
  Terms out;
  for (const auto& [alpha, s] : outer.terms()) {
    GenExponent gpart;
    Terms acc;
    std::vector<std::pair<std::size_t, unsigned>> hpart;
    for (const auto& [j, e] : alpha) {
      if (j < mg) {
        gpart[j] = e;
      } else {
        hpart.emplace_back(j - mg, e);
      }
    }
    acc[gpart] = s;
    for (const auto& [k, e] : hpart) acc = mul_terms(acc, power_of(k, e));
    for (const auto& [e, c] : acc) out[e] += c;
  }
  return RCert(base, std::move(out), budget, BudgetCheck::Defer);
}

QCert compose_q(const QCert& outer, const GeneratorSystem& base, std::span<const Certificate> h_certs,
                unsigned budget) {
  const std::size_t mg = base.size();
  std::vector<SosList> mult(outer.multipliers().begin(), outer.multipliers().begin() + static_cast<long>(mg + 1));
  for (std::size_t k = 0; k < h_certs.size(); ++k) {
    const SosList& tau = outer.multipliers()[mg + 1 + k];
    if (tau.is_zero()) continue;
    const auto& inner = std::get<QCert>(h_certs[k]).multipliers();
    for (std::size_t j = 0; j <= mg; ++j) mult[j].append(tau.times(inner[j]));
  }
  return QCert(base, std::move(mult), budget, BudgetCheck::Defer);
}

// Adds S * g^gamma to a preorder map, folding even powers into the squares.
void add_preorder_term(TCert::Multipliers& into, const GeneratorSystem& base, const SosList& s,
                       const GenExponent& gamma) {
  GenExponent half;
  GenSubset parity;
  for (const auto& [j, e] : gamma) {
    if (e / 2 > 0) half[j] = e / 2;
    if (e % 2 == 1) parity.push_back(j);
  }
  const SosList folded = half.empty() ? s : s.times_square(generator_product(base, half));
  auto [it, inserted] = into.try_emplace(parity, SosList(base.nvars()));
  it->second.append(folded);
}

TCert compose_t(const TCert& outer, const GeneratorSystem& base, std::span<const Certificate> h_certs,
                unsigned budget) {
  const std::size_t mg = base.size();
  TCert::Multipliers out;
  for (const auto& [alpha, sigma] : outer.multipliers()) {
    if (sigma.is_zero()) continue;
    GenExponent gpart;
    std::vector<std::pair<SosList, GenExponent>> acc;
    std::vector<std::size_t> hpart;
    for (std::size_t j : alpha) {
      if (j < mg) {
        gpart[j] = 1;
      } else {
        hpart.push_back(j - mg);
      }
    }
    acc.emplace_back(sigma, gpart);
    for (std::size_t k : hpart) {
      std::vector<std::pair<SosList, GenExponent>> next;
      for (const auto& [s, gamma] : acc) {
        for (const auto& [eps, rho] : std::get<TCert>(h_certs[k]).multipliers()) {
          if (rho.is_zero()) continue;
          GenExponent g2 = gamma;
          for (std::size_t j : eps) ++g2[j];
          next.emplace_back(s.times(rho), std::move(g2));
        }
      }
      acc = std::move(next);
    }
    for (const auto& [s, gamma] : acc) add_preorder_term(out, base, s, gamma);
  }
  return TCert(base, std::move(out), budget, BudgetCheck::Defer);
}

Certificate with_budget(const Certificate& cert, unsigned budget) {
  if (const auto* r = std::get_if<RCert>(&cert)) return RCert(r->system(), r->terms(), budget);
  if (const auto* q = std::get_if<QCert>(&cert)) return QCert(q->system(), q->multipliers(), budget);
  const auto& t = std::get<TCert>(cert);
  return TCert(t.system(), t.multipliers(), budget);
}

}  // namespace

ComposeResult cert_compose(const Certificate& outer, const GeneratorSystem& base,
                           std::span<const Certificate> h_certs) {
  const GeneratorSystem& full = system_of(outer);
  const std::size_t mg = base.size();
  if (full.size() != mg + h_certs.size() || full.nvars() != base.nvars()) {
    throw std::invalid_argument("cert_compose: outer system is not (base, h)");
  }
  for (std::size_t j = 0; j < mg; ++j) {
    if (!(full[j] == base[j])) throw std::invalid_argument("cert_compose: outer system does not start with base");
  }
  unsigned r0 = 0;
  for (std::size_t k = 0; k < h_certs.size(); ++k) {
    if (h_certs[k].index() != outer.index()) throw std::invalid_argument("cert_compose: certificate kind mismatch");
    if (!(system_of(h_certs[k]) == base)) {
      throw std::invalid_argument("cert_compose: h certificate is not over the base system");
    }
    if (!verify(h_certs[k], full[mg + k]).identity) {
      throw std::invalid_argument("cert_compose: certificate for " + full.label(mg + k) + " does not verify");
    }
    r0 = std::max(r0, budget_of(h_certs[k]));
  }
  const unsigned r = budget_of(outer);
  ComposeResult res;
  res.lemma_budget = kind(outer) == 'Q' ? r0 + r : std::max(r0, 1U) * r;
  Certificate composed;
  if (const auto* rc = std::get_if<RCert>(&outer)) {
    composed = compose_r(*rc, base, h_certs, res.lemma_budget);
  } else if (const auto* qc = std::get_if<QCert>(&outer)) {
    composed = compose_q(*qc, base, h_certs, res.lemma_budget);
  } else {
    composed = compose_t(std::get<TCert>(outer), base, h_certs, res.lemma_budget);
  }
  res.realized_degree = cert_degree(composed);
  res.within_lemma_budget = res.realized_degree <= res.lemma_budget;
  if (!res.within_lemma_budget) {
    // Constant h generators admit unbounded powers at zero degree; record the
    // realized degree as the budget rather than reject a valid identity.
    composed = with_budget(composed, res.realized_degree);
  }
  res.cert = std::move(composed);
  return res;
}

// ------------------------------------------------------------- affine maps

namespace {

// Gauss-Jordan inverse; throws if singular.
std::vector<std::vector<Rational>> invert(std::vector<std::vector<Rational>> a) {
  const std::size_t n = a.size();
  std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) throw std::invalid_argument("affine map is not invertible");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const Rational scale = Rational(1) / a[col][col];
    for (std::size_t k = 0; k < n; ++k) {
      a[col][k] *= scale;
      inv[col][k] *= scale;
    }
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || a[row][col] == 0) continue;
      const Rational factor = a[row][col];
      for (std::size_t k = 0; k < n; ++k) {
        a[row][k] -= factor * a[col][k];
        inv[row][k] -= factor * inv[col][k];
      }
    }
  }
  return inv;
}

}  // namespace

AffineMap::AffineMap(std::vector<std::vector<Rational>> matrix, std::vector<Rational> offset)
    : matrix_(std::move(matrix)), offset_(std::move(offset)) {
  if (matrix_.size() != offset_.size()) throw std::invalid_argument("affine map: shape mismatch");
  for (const auto& row : matrix_) {
    if (row.size() != offset_.size()) throw std::invalid_argument("affine map: matrix must be square");
  }
  invert(matrix_);
}

AffineMap AffineMap::from_images(std::span<const Polynomial> images) {
  const std::size_t n = images.size();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n, Rational(0)));
  std::vector<Rational> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (images[i].nvars() != n) throw std::invalid_argument("affine map: image arity mismatch");
    if (images[i].degree() > 1) throw std::invalid_argument("affine map: non-affine image rejected");
    b[i] = images[i].constant_term();
    for (std::size_t k = 0; k < n; ++k) a[i][k] = images[i].coeff(Monomial::variable(n, k));
  }
  return AffineMap(std::move(a), std::move(b));
}

AffineMap AffineMap::identity(std::size_t n) {
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) a[i][i] = 1;
  return AffineMap(std::move(a), std::vector<Rational>(n, Rational(0)));
}

std::vector<Polynomial> AffineMap::images() const {
  const std::size_t n = dims();
  std::vector<Polynomial> out;
  for (std::size_t i = 0; i < n; ++i) {
    Polynomial p = Polynomial::constant(n, offset_[i]);
    for (std::size_t k = 0; k < n; ++k) p.add_term(Monomial::variable(n, k), matrix_[i][k]);
    out.push_back(std::move(p));
  }
  return out;
}

AffineMap AffineMap::inverse() const {
  auto inv = invert(matrix_);
  std::vector<Rational> off(dims(), Rational(0));
  for (std::size_t i = 0; i < dims(); ++i) {
    for (std::size_t k = 0; k < dims(); ++k) off[i] -= inv[i][k] * offset_[k];
  }
  return AffineMap(std::move(inv), std::move(off));
}

Certificate affine_transform_cert(const Certificate& cert, const AffineMap& map) {
  const GeneratorSystem& sys = system_of(cert);
  if (map.dims() != sys.nvars()) throw std::invalid_argument("affine_transform_cert: dimension mismatch");
  const auto images = map.images();
  std::vector<Polynomial> gens;
  for (const auto& g : sys.gens()) gens.push_back(substitute(g, images));
  GeneratorSystem moved(sys.nvars(), std::move(gens), sys.labels());
  if (const auto* r = std::get_if<RCert>(&cert)) return RCert(moved, r->terms(), r->budget());
  if (const auto* q = std::get_if<QCert>(&cert)) {
    std::vector<SosList> mult;
    for (const auto& s : q->multipliers()) mult.push_back(s.substituted(images, sys.nvars()));
    return QCert(moved, std::move(mult), q->budget());
  }
  const auto& t = std::get<TCert>(cert);
  TCert::Multipliers mult;
  for (const auto& [alpha, s] : t.multipliers()) mult.emplace(alpha, s.substituted(images, sys.nvars()));
  return TCert(moved, std::move(mult), t.budget());
}

Certificate reindex_generators(const Certificate& cert, const GeneratorSystem& target,
                               std::span<const std::size_t> slot) {
  const GeneratorSystem& from = system_of(cert);
  if (slot.size() != from.size()) throw std::invalid_argument("reindex_generators: slot map size mismatch");
  for (std::size_t j = 0; j < slot.size(); ++j) {
    if (slot[j] >= target.size() || !(target[slot[j]] == from[j])) {
      throw std::invalid_argument("reindex_generators: generator " + std::to_string(j) + " does not match its slot");
    }
  }
  if (const auto* r = std::get_if<RCert>(&cert)) {
    Terms terms;
    for (const auto& [alpha, s] : r->terms()) {
      GenExponent e;
      for (const auto& [j, k] : alpha) e[slot[j]] += k;
      terms[e] += s;
    }
    return RCert(target, std::move(terms), r->budget());
  }
  if (const auto* q = std::get_if<QCert>(&cert)) {
    std::vector<SosList> mult(target.size() + 1, SosList(target.nvars()));
    mult[0] = q->multipliers()[0];
    for (std::size_t j = 0; j < from.size(); ++j) mult[slot[j] + 1].append(q->multipliers()[j + 1]);
    return QCert(target, std::move(mult), q->budget());
  }
  const auto& t = std::get<TCert>(cert);
  TCert::Multipliers mult;
  for (const auto& [alpha, s] : t.multipliers()) {
    GenSubset e;
    for (std::size_t j : alpha) e.push_back(slot[j]);
    std::sort(e.begin(), e.end());
    if (std::adjacent_find(e.begin(), e.end()) != e.end()) {
      throw std::invalid_argument("reindex_generators: slot map merges preorder factors");
    }
    auto [it, inserted] = mult.try_emplace(e, SosList(target.nvars()));
    it->second.append(s);
  }
  return TCert(target, std::move(mult), t.budget());
}

}  // namespace posicert
