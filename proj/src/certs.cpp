#include "posicert/certs.hpp"

#include <algorithm>
#include <stdexcept>

namespace posicert {

// --------------------------------------------------------- GeneratorSystem

GeneratorSystem::GeneratorSystem(std::size_t nvars, std::vector<Polynomial> gens, std::vector<std::string> labels)
    : nvars_(nvars), gens_(std::move(gens)), labels_(std::move(labels)) {
  if (!labels_.empty() && labels_.size() != gens_.size()) {
    throw std::invalid_argument("generator labels do not match generator count");
  }
  if (labels_.empty()) {
    for (std::size_t j = 0; j < gens_.size(); ++j) labels_.push_back("g" + std::to_string(j + 1));
  }
  for (const auto& g : gens_) {
    if (g.nvars() != nvars_) throw std::invalid_argument("generator arity does not match system arity");
    degrees_.push_back(g.degree());
    max_degree_ = std::max(max_degree_, g.degree());
  }
}

GeneratorSystem GeneratorSystem::box(std::size_t n) {
  std::vector<Polynomial> gens;
  std::vector<std::string> labels;
  const Polynomial one = Polynomial::constant(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    const Polynomial x = Polynomial::variable(n, i);
    gens.push_back(one - x);
    gens.push_back(one + x);
    labels.push_back("1-x" + std::to_string(i + 1));
    labels.push_back("1+x" + std::to_string(i + 1));
  }
  return GeneratorSystem(n, std::move(gens), std::move(labels));
}

GeneratorSystem GeneratorSystem::concat(const GeneratorSystem& tail) const {
  if (tail.nvars_ != nvars_) throw std::invalid_argument("concat: generator systems differ in arity");
  auto gens = gens_;
  auto labels = labels_;
  gens.insert(gens.end(), tail.gens_.begin(), tail.gens_.end());
  labels.insert(labels.end(), tail.labels_.begin(), tail.labels_.end());
  return GeneratorSystem(nvars_, std::move(gens), std::move(labels));
}

// ----------------------------------------------------------------- helpers

unsigned product_degree(const GeneratorSystem& sys, const GenExponent& alpha) {
  unsigned d = 0;
  for (const auto& [j, e] : alpha) {
    if (sys[j].is_zero()) return 0;
    d += e * sys.degree(j);
  }
  return d;
}

unsigned product_degree(const GeneratorSystem& sys, const GenSubset& alpha) {
  unsigned d = 0;
  for (std::size_t j : alpha) {
    if (sys[j].is_zero()) return 0;
    d += sys.degree(j);
  }
  return d;
}

Polynomial generator_product(const GeneratorSystem& sys, const GenExponent& alpha) {
  Polynomial p = Polynomial::constant(sys.nvars(), 1);
  for (const auto& [j, e] : alpha) p *= sys[j].pow(e);
  return p;
}

std::string exponent_label(const GeneratorSystem& sys, const GenExponent& alpha) {
  if (alpha.empty()) return "1";
  std::string s;
  for (const auto& [j, e] : alpha) {
    if (!s.empty()) s += "*";
    s += "(" + sys.label(j) + ")";
    if (e > 1) s += "^" + std::to_string(e);
  }
  return s;
}

namespace {

std::string subset_label(const GeneratorSystem& sys, const GenSubset& alpha) {
  GenExponent e;
  for (std::size_t j : alpha) e[j] = 1;
  return exponent_label(sys, e);
}

void check_index(const GeneratorSystem& sys, std::size_t j) {
  if (j >= sys.size()) {
    throw std::invalid_argument("generator index " + std::to_string(j) + " out of range (m = " +
                                std::to_string(sys.size()) + ")");
  }
}

// Caches g_j^k for repeated expansion.
class PowerCache {
 public:
  explicit PowerCache(const GeneratorSystem& sys) : sys_(sys), powers_(sys.size()) {}

  const Polynomial& get(std::size_t j, unsigned k) {
    auto& cache = powers_[j];
    if (cache.empty()) cache.push_back(Polynomial::constant(sys_.nvars(), 1));
    while (cache.size() <= k) cache.push_back(cache.back() * sys_[j]);
    return cache[k];
  }

  Polynomial product(const GenExponent& alpha) {
    Polynomial p = Polynomial::constant(sys_.nvars(), 1);
    for (const auto& [j, e] : alpha) p *= get(j, e);
    return p;
  }

 private:
  const GeneratorSystem& sys_;
  std::vector<std::vector<Polynomial>> powers_;
};

void enforce_budget(unsigned degree, unsigned budget, const char* what) {
  if (degree > budget) {
    throw std::domain_error(std::string(what) + ": realized degree " + std::to_string(degree) +
                            " exceeds budget " + std::to_string(budget));
  }
}

}  // namespace

// ------------------------------------------------------------------ SosList

SosList SosList::constant(std::size_t nvars, const Rational& c) {
  SosList s(nvars);
  if (c < 0) throw std::invalid_argument("SOS constant must be nonnegative");
  s.add_square(Polynomial::constant(nvars, 1), c);
  return s;
}

void SosList::add_square(const Polynomial& q, const Rational& weight) {
  if (q.nvars() != nvars_) throw std::invalid_argument("square arity does not match multiplier arity");
  if (weight < 0) throw std::invalid_argument("square weight must be positive");
  if (weight == 0 || q.is_zero()) return;
  if (auto r = exact_sqrt(weight)) {
    squares_.push_back({Rational(1), q * *r});
  } else {
    squares_.push_back({weight, q});
  }
}

unsigned SosList::degree() const {
  unsigned d = 0;
  for (const auto& s : squares_) d = std::max(d, 2 * s.poly.degree());
  return d;
}

Polynomial SosList::expand() const {
  Polynomial out(nvars_);
  for (const auto& s : squares_) out += (s.poly * s.poly) * s.weight;
  return out;
}

SosList SosList::scaled(const Rational& c) const {
  if (c < 0) throw std::invalid_argument("SOS scale must be nonnegative");
  SosList out(nvars_);
  for (const auto& s : squares_) out.add_square(s.poly, s.weight * c);
  return out;
}

SosList SosList::times(const SosList& other) const {
  if (other.nvars_ != nvars_) throw std::invalid_argument("SOS product arity mismatch");
  SosList out(nvars_);
  for (const auto& a : squares_) {
    for (const auto& b : other.squares_) out.add_square(a.poly * b.poly, a.weight * b.weight);
  }
  return out;
}

SosList SosList::times_square(const Polynomial& h) const {
  SosList out(nvars_);
  for (const auto& s : squares_) out.add_square(s.poly * h, s.weight);
  return out;
}

void SosList::append(const SosList& other) {
  if (other.nvars_ != nvars_) throw std::invalid_argument("SOS append arity mismatch");
  squares_.insert(squares_.end(), other.squares_.begin(), other.squares_.end());
}

SosList SosList::substituted(std::span<const Polynomial> images, std::size_t target_nvars) const {
  SosList out(target_nvars);
  for (const auto& s : squares_) out.add_square(substitute(s.poly, images), s.weight);
  return out;
}

bool SosList::operator==(const SosList& other) const {
  if (nvars_ != other.nvars_ || squares_.size() != other.squares_.size()) return false;
  for (std::size_t i = 0; i < squares_.size(); ++i) {
    if (squares_[i].weight != other.squares_[i].weight || !(squares_[i].poly == other.squares_[i].poly)) {
      return false;
    }
  }
  return true;
}

// -------------------------------------------------------------- certificates

RCert::RCert(GeneratorSystem system, Terms terms, unsigned budget, BudgetCheck check)
    : system_(std::move(system)), terms_(std::move(terms)), budget_(budget) {
  for (auto it = terms_.begin(); it != terms_.end(); ++it) {
    if (it->second <= 0) throw std::invalid_argument("preprime coefficients must be positive");
    for (const auto& [j, e] : it->first) {
      check_index(system_, j);
      if (e == 0) throw std::invalid_argument("sparse exponent with zero power");
    }
  }
  if (check == BudgetCheck::Enforce) enforce_budget(cert_degree(*this), budget_, "RCert");
}

QCert::QCert(GeneratorSystem system, std::vector<SosList> multipliers, unsigned budget, BudgetCheck check)
    : system_(std::move(system)), multipliers_(std::move(multipliers)), budget_(budget) {
  if (multipliers_.empty()) multipliers_.assign(system_.size() + 1, SosList(system_.nvars()));
  if (multipliers_.size() != system_.size() + 1) {
    throw std::invalid_argument("QCert needs one multiplier per generator plus sigma_0");
  }
  for (const auto& s : multipliers_) {
    if (s.nvars() != system_.nvars()) throw std::invalid_argument("QCert multiplier arity mismatch");
  }
  if (check == BudgetCheck::Enforce) enforce_budget(cert_degree(*this), budget_, "QCert");
}

TCert::TCert(GeneratorSystem system, Multipliers multipliers, unsigned budget, BudgetCheck check)
    : system_(std::move(system)), multipliers_(std::move(multipliers)), budget_(budget) {
  for (const auto& [alpha, sos] : multipliers_) {
    for (std::size_t k = 0; k < alpha.size(); ++k) {
      check_index(system_, alpha[k]);
      if (k > 0 && alpha[k] <= alpha[k - 1]) throw std::invalid_argument("TCert subset not sorted/distinct");
    }
    if (sos.nvars() != system_.nvars()) throw std::invalid_argument("TCert multiplier arity mismatch");
  }
  if (check == BudgetCheck::Enforce) enforce_budget(cert_degree(*this), budget_, "TCert");
}

char kind(const Certificate& cert) { return "RQT"[cert.index()]; }

const GeneratorSystem& system_of(const Certificate& cert) {
  return std::visit([](const auto& c) -> const GeneratorSystem& { return c.system(); }, cert);
}

unsigned budget_of(const Certificate& cert) {
  return std::visit([](const auto& c) { return c.budget(); }, cert);
}

namespace {

unsigned q_term_degree(const QCert& cert, std::size_t j) {
  const SosList& s = cert.multipliers()[j];
  if (s.is_zero()) return 0;
  if (j == 0) return s.degree();
  const Polynomial& g = cert.system()[j - 1];
  return g.is_zero() ? 0 : s.degree() + g.degree();
}

unsigned t_term_degree(const TCert& cert, const GenSubset& alpha, const SosList& s) {
  if (s.is_zero()) return 0;
  for (std::size_t j : alpha) {
    if (cert.system()[j].is_zero()) return 0;
  }
  return s.degree() + product_degree(cert.system(), alpha);
}

std::vector<TermAudit> audit_terms(const RCert& cert) {
  std::vector<TermAudit> out;
  for (const auto& [alpha, s] : cert.terms()) {
    const unsigned d = product_degree(cert.system(), alpha);
    out.push_back({exponent_label(cert.system(), alpha), d, d <= cert.budget()});
  }
  return out;
}

std::vector<TermAudit> audit_terms(const QCert& cert) {
  std::vector<TermAudit> out;
  for (std::size_t j = 0; j < cert.multipliers().size(); ++j) {
    if (cert.multipliers()[j].is_zero()) continue;
    const unsigned d = q_term_degree(cert, j);
    const std::string slot = j == 0 ? std::string("1") : cert.system().label(j - 1);
    out.push_back({"sigma[" + slot + "]", d, d <= cert.budget()});
  }
  return out;
}

std::vector<TermAudit> audit_terms(const TCert& cert) {
  std::vector<TermAudit> out;
  for (const auto& [alpha, s] : cert.multipliers()) {
    if (s.is_zero()) continue;
    const unsigned d = t_term_degree(cert, alpha, s);
    out.push_back({"sigma[" + subset_label(cert.system(), alpha) + "]", d, d <= cert.budget()});
  }
  return out;
}

Polynomial expand_unchecked(const RCert& cert) {
  PowerCache cache(cert.system());
  Polynomial out(cert.system().nvars());
  for (const auto& [alpha, s] : cert.terms()) out += cache.product(alpha) * s;
  return out;
}

Polynomial expand_unchecked(const QCert& cert) {
  Polynomial out(cert.system().nvars());
  for (std::size_t j = 0; j < cert.multipliers().size(); ++j) {
    const SosList& s = cert.multipliers()[j];
    if (s.is_zero()) continue;
    Polynomial sigma = s.expand();
    out += j == 0 ? sigma : sigma * cert.system()[j - 1];
  }
  return out;
}

Polynomial expand_unchecked(const TCert& cert) {
  PowerCache cache(cert.system());
  Polynomial out(cert.system().nvars());
  for (const auto& [alpha, s] : cert.multipliers()) {
    if (s.is_zero()) continue;
    GenExponent e;
    for (std::size_t j : alpha) e[j] = 1;
    out += s.expand() * cache.product(e);
  }
  return out;
}

}  // namespace

unsigned cert_degree(const RCert& cert) {
  unsigned d = 0;
  for (const auto& [alpha, s] : cert.terms()) d = std::max(d, product_degree(cert.system(), alpha));
  return d;
}

unsigned cert_degree(const QCert& cert) {
  unsigned d = 0;
  for (std::size_t j = 0; j < cert.multipliers().size(); ++j) d = std::max(d, q_term_degree(cert, j));
  return d;
}

unsigned cert_degree(const TCert& cert) {
  unsigned d = 0;
  for (const auto& [alpha, s] : cert.multipliers()) d = std::max(d, t_term_degree(cert, alpha, s));
  return d;
}

unsigned cert_degree(const Certificate& cert) {
  return std::visit([](const auto& c) { return cert_degree(c); }, cert);
}

Polynomial expand(const RCert& cert) {
  enforce_budget(cert_degree(cert), cert.budget(), "expand");
  return expand_unchecked(cert);
}

Polynomial expand(const QCert& cert) {
  enforce_budget(cert_degree(cert), cert.budget(), "expand");
  return expand_unchecked(cert);
}

Polynomial expand(const TCert& cert) {
  enforce_budget(cert_degree(cert), cert.budget(), "expand");
  return expand_unchecked(cert);
}

Polynomial expand(const Certificate& cert) {
  return std::visit([](const auto& c) { return expand(c); }, cert);
}

VerifyReport verify(const Certificate& cert, const Polynomial& target) {
  VerifyReport report;
  std::visit(
      [&](const auto& c) {
        report.budget = c.budget();
        report.degree = cert_degree(c);
        report.audit = audit_terms(c);
        if (c.system().nvars() != target.nvars()) {
          report.identity = false;
          report.residual = Polynomial(target.nvars());
          return;
        }
        report.residual = expand_unchecked(c) - target;
        report.identity = report.residual.is_zero();
      },
      cert);
  report.within_budget = report.degree <= report.budget;
  return report;
}

// ------------------------------------------------------------ combinators

namespace {

void require_same_system(const GeneratorSystem& a, const GeneratorSystem& b) {
  if (!(a == b)) throw std::invalid_argument("certificates are over different generator systems");
}

}  // namespace

RCert combine(const RCert& a, const RCert& b) {
  require_same_system(a.system(), b.system());
  RCert::Terms terms = a.terms();
  for (const auto& [alpha, s] : b.terms()) terms[alpha] += s;
  return RCert(a.system(), std::move(terms), std::max(a.budget(), b.budget()));
}

QCert combine(const QCert& a, const QCert& b) {
  require_same_system(a.system(), b.system());
  auto mult = a.multipliers();
  for (std::size_t j = 0; j < mult.size(); ++j) mult[j].append(b.multipliers()[j]);
  return QCert(a.system(), std::move(mult), std::max(a.budget(), b.budget()));
}

TCert combine(const TCert& a, const TCert& b) {
  require_same_system(a.system(), b.system());
  auto mult = a.multipliers();
  for (const auto& [alpha, s] : b.multipliers()) {
    auto [it, inserted] = mult.try_emplace(alpha, s);
    if (!inserted) it->second.append(s);
  }
  return TCert(a.system(), std::move(mult), std::max(a.budget(), b.budget()));
}

RCert scale(const RCert& cert, const Rational& c) {
  if (c < 0) throw std::invalid_argument("certificate scale must be nonnegative");
  RCert::Terms terms;
  if (c != 0) {
    for (const auto& [alpha, s] : cert.terms()) terms.emplace(alpha, s * c);
  }
  return RCert(cert.system(), std::move(terms), cert.budget());
}

QCert scale(const QCert& cert, const Rational& c) {
  auto mult = cert.multipliers();
  for (auto& s : mult) s = s.scaled(c);
  return QCert(cert.system(), std::move(mult), cert.budget());
}

TCert scale(const TCert& cert, const Rational& c) {
  TCert::Multipliers mult;
  for (const auto& [alpha, s] : cert.multipliers()) mult.emplace(alpha, s.scaled(c));
  return TCert(cert.system(), std::move(mult), cert.budget());
}

TCert to_preorder(const RCert& cert) {
  const GeneratorSystem& sys = cert.system();
  PowerCache cache(sys);
  TCert::Multipliers mult;
  for (const auto& [alpha, s] : cert.terms()) {
    GenExponent half;
    GenSubset parity;
    for (const auto& [j, e] : alpha) {
      if (e / 2 > 0) half[j] = e / 2;
      if (e % 2 == 1) parity.push_back(j);
    }
    auto [it, inserted] = mult.try_emplace(parity, SosList(sys.nvars()));
    it->second.add_square(cache.product(half), s);
  }
  return TCert(sys, std::move(mult), cert.budget());
}

TCert to_preorder(const QCert& cert) {
  TCert::Multipliers mult;
  for (std::size_t j = 0; j < cert.multipliers().size(); ++j) {
    const SosList& s = cert.multipliers()[j];
    if (s.is_zero()) continue;
    GenSubset key;
    if (j > 0) key.push_back(j - 1);
    mult.emplace(key, s);
  }
  return TCert(cert.system(), std::move(mult), cert.budget());
}

}  // namespace posicert
