#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "posicert/poly.hpp"

namespace posicert {

/// Ordered constraint list g = [g_1, ..., g_m] describing S_g = {x : g_j(x) >= 0}.
class GeneratorSystem {
 public:
  GeneratorSystem() = default;
  GeneratorSystem(std::size_t nvars, std::vector<Polynomial> gens, std::vector<std::string> labels = {});

  /// (1 - x_1, 1 + x_1, ..., 1 - x_n, 1 + x_n); slot 2i is 1 - x_{i+1}.
  static GeneratorSystem box(std::size_t n);

  std::size_t nvars() const { return nvars_; }
  std::size_t size() const { return gens_.size(); }
  bool empty() const { return gens_.empty(); }
  const std::vector<Polynomial>& gens() const { return gens_; }
  const Polynomial& operator[](std::size_t j) const { return gens_.at(j); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t j) const { return labels_.at(j); }
  unsigned degree(std::size_t j) const { return degrees_.at(j); }
  /// d_g
  unsigned max_degree() const { return max_degree_; }

  /// This system followed by `tail` (same arity).
  GeneratorSystem concat(const GeneratorSystem& tail) const;

  bool operator==(const GeneratorSystem& other) const { return nvars_ == other.nvars_ && gens_ == other.gens_; }

 private:
  std::size_t nvars_ = 0;
  std::vector<Polynomial> gens_;
  std::vector<std::string> labels_;
  std::vector<unsigned> degrees_;
  unsigned max_degree_ = 0;
};

/// Sparse generator exponent: generator index -> positive power.
using GenExponent = std::map<std::size_t, unsigned>;
/// Sorted distinct generator indices (an element of {0,1}^m).
using GenSubset = std::vector<std::size_t>;

/// Realized degree of g^alpha (0 when a factor is the zero polynomial).
unsigned product_degree(const GeneratorSystem& sys, const GenExponent& alpha);
unsigned product_degree(const GeneratorSystem& sys, const GenSubset& alpha);
Polynomial generator_product(const GeneratorSystem& sys, const GenExponent& alpha);

/// One entry w * q^2 of a sum of squares, w > 0. Rational square weights are
/// folded into q, so a plain square list stores w = 1 throughout.
struct WeightedSquare {
  Rational weight;
  Polynomial poly;
};

/// An SOS multiplier sum_i w_i q_i^2.
class SosList {
 public:
  SosList() = default;
  explicit SosList(std::size_t nvars) : nvars_(nvars) {}

  static SosList constant(std::size_t nvars, const Rational& c);

  void add_square(const Polynomial& q, const Rational& weight = 1);

  std::size_t nvars() const { return nvars_; }
  bool is_zero() const { return squares_.empty(); }
  const std::vector<WeightedSquare>& squares() const { return squares_; }
  /// 2 * max deg q_i (0 if empty); exact since leading forms of squares cannot cancel.
  unsigned degree() const;
  Polynomial expand() const;

  SosList scaled(const Rational& c) const;
  /// Product of two SOS polynomials, as pairwise products of the squares.
  SosList times(const SosList& other) const;
  /// h^2 * this, by multiplying every q_i by h.
  SosList times_square(const Polynomial& h) const;
  void append(const SosList& other);
  SosList substituted(std::span<const Polynomial> images, std::size_t target_nvars) const;

  bool operator==(const SosList&) const;

 private:
  std::size_t nvars_ = 0;
  std::vector<WeightedSquare> squares_;
};

/// Whether constructors reject a certificate whose realized degree exceeds its
/// budget. Deferred checking lets `verify` audit over-budget input.
enum class BudgetCheck { Enforce, Defer };

/// Member of the truncated preprime R(g)_r: sum_alpha s_alpha g^alpha, s_alpha > 0.
class RCert {
 public:
  using Terms = std::map<GenExponent, Rational>;

  RCert() = default;
  RCert(GeneratorSystem system, Terms terms, unsigned budget, BudgetCheck check = BudgetCheck::Enforce);

  const GeneratorSystem& system() const { return system_; }
  const Terms& terms() const { return terms_; }
  unsigned budget() const { return budget_; }

 private:
  GeneratorSystem system_;
  Terms terms_;
  unsigned budget_ = 0;
};

/// Member of the truncated quadratic module Q(g)_r: sigma_0 + sum_j sigma_j g_j.
/// multipliers()[0] belongs to the implicit generator g_0 = 1.
class QCert {
 public:
  QCert() = default;
  QCert(GeneratorSystem system, std::vector<SosList> multipliers, unsigned budget,
        BudgetCheck check = BudgetCheck::Enforce);

  const GeneratorSystem& system() const { return system_; }
  const std::vector<SosList>& multipliers() const { return multipliers_; }
  unsigned budget() const { return budget_; }

 private:
  GeneratorSystem system_;
  std::vector<SosList> multipliers_;
  unsigned budget_ = 0;
};

/// Member of the truncated preorder T(g)_r: sum over alpha in {0,1}^m of sigma_alpha g^alpha.
class TCert {
 public:
  using Multipliers = std::map<GenSubset, SosList>;

  TCert() = default;
  TCert(GeneratorSystem system, Multipliers multipliers, unsigned budget, BudgetCheck check = BudgetCheck::Enforce);

  const GeneratorSystem& system() const { return system_; }
  const Multipliers& multipliers() const { return multipliers_; }
  unsigned budget() const { return budget_; }

 private:
  GeneratorSystem system_;
  Multipliers multipliers_;
  unsigned budget_ = 0;
};

using Certificate = std::variant<RCert, QCert, TCert>;

/// 'R', 'Q' or 'T'.
char kind(const Certificate& cert);
const GeneratorSystem& system_of(const Certificate& cert);
unsigned budget_of(const Certificate& cert);

unsigned cert_degree(const RCert& cert);
unsigned cert_degree(const QCert& cert);
unsigned cert_degree(const TCert& cert);
unsigned cert_degree(const Certificate& cert);

/// The polynomial the certificate represents. Throws std::domain_error when a
/// term exceeds the degree budget.
Polynomial expand(const RCert& cert);
Polynomial expand(const QCert& cert);
Polynomial expand(const TCert& cert);
Polynomial expand(const Certificate& cert);

struct TermAudit {
  std::string term;  // e.g. "g1^2*g3" or "sigma[g2]"
  unsigned degree = 0;
  bool within_budget = true;
};

struct VerifyReport {
  bool identity = false;       // expand(cert) == target
  bool within_budget = false;  // every term respects the budget
  unsigned degree = 0;         // realized certificate degree
  unsigned budget = 0;
  std::vector<TermAudit> audit;
  Polynomial residual;  // expand(cert) - target

  bool ok() const { return identity && within_budget; }
};

VerifyReport verify(const Certificate& cert, const Polynomial& target);

/// Term-wise union over a shared system; budgets combine by max.
RCert combine(const RCert& a, const RCert& b);
QCert combine(const QCert& a, const QCert& b);
TCert combine(const TCert& a, const TCert& b);

RCert scale(const RCert& cert, const Rational& c);
QCert scale(const QCert& cert, const Rational& c);
TCert scale(const TCert& cert, const Rational& c);

/// R(g)_r -> T(g)_r: g^alpha = (g^beta)^2 g^eps with alpha = 2 beta + eps.
TCert to_preorder(const RCert& cert);
/// Q(g)_r -> T(g)_r: sigma_j g_j lands on the singleton subset {j}.
TCert to_preorder(const QCert& cert);

/// Human-readable label for g^alpha over `sys`.
std::string exponent_label(const GeneratorSystem& sys, const GenExponent& alpha);

}  // namespace posicert
