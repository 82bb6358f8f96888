#pragma once

#include <span>
#include <utility>
#include <vector>

#include "posicert/certs.hpp"

namespace posicert {

/// 1 + sign * x^alpha in R(1 +- x)_{|alpha|}, built by peeling the
/// lowest-index variable:
///   1 + x_i x^b = 1/2 [(1 + x_i)(1 + x^b) + (1 - x_i)(1 - x^b)]
///   1 - x_i x^b = 1/2 [(1 - x_i)(1 + x^b) + (1 + x_i)(1 - x^b)]
/// The generator system is GeneratorSystem::box(alpha.nvars()).
RCert one_pm_monomial_R(const Monomial& alpha, int sign);

/// 1 - x^{2 alpha} in Q(1 +- x)_{2|alpha|+1}, from
///   1 - x_i^2 = 1/2 [(1 - x_i)(1 + x_i)^2 + (1 + x_i)(1 - x_i)^2]
///   1 - x_i^2 x^{2b} = (1 - x_i^2) + x_i^2 (1 - x^{2b}).
QCert one_minus_even_monomial_Q(const Monomial& alpha);

enum class Cone { R, Q, T };

/// Certificate over GeneratorSystem::box(n) for ||f||_1 - f, assembled
/// term by term from |f_a| (1 - sign(f_a) x^a). Budgets: deg f for R and T,
/// 2 deg f + 1 for Q.
Certificate norm1_minus_f(const Polynomial& f, Cone cone);

struct ScaledSystem {
  GeneratorSystem scaled;      // g_j / ||g_j||_1
  std::vector<Rational> factors;  // ||g_j||_1
};

ScaledSystem scale_generators(const GeneratorSystem& sys);

/// Re-expresses a certificate over generators c_j * g_j (c_j > 0) as one over
/// `target` = (g_j): every product picks up the matching power of the c_j.
/// Requires cert.system()[j] == factors[j] * target[j].
Certificate rescale_generators(const Certificate& cert, const GeneratorSystem& target,
                               std::span<const Rational> factors);

/// From a certificate of 1 - ||x||^2 over g, certificates of 1 - x_1, 1 + x_1,
/// ..., 1 + x_n over g via 1 +- x_i = 1/2 (1 - ||x||^2 + (1 +- x_i)^2 + sum_{j!=i} x_j^2).
std::vector<QCert> box_from_ball(const QCert& ball_cert);

struct ComposeResult {
  Certificate cert;
  unsigned lemma_budget = 0;  // r0 + r for Q, r0 * r for R and T
  unsigned realized_degree = 0;
  bool within_lemma_budget = true;
};

/// Eliminates the trailing generators h of outer's system (g, h), given
/// certificates of each h_k over `base` = g. Kinds must agree.
ComposeResult cert_compose(const Certificate& outer, const GeneratorSystem& base,
                           std::span<const Certificate> h_certs);

/// x -> A x + b with A invertible.
class AffineMap {
 public:
  AffineMap(std::vector<std::vector<Rational>> matrix, std::vector<Rational> offset);
  /// Builds the map from polynomial images of degree <= 1.
  static AffineMap from_images(std::span<const Polynomial> images);
  static AffineMap identity(std::size_t n);

  std::size_t dims() const { return offset_.size(); }
  std::vector<Polynomial> images() const;
  AffineMap inverse() const;

 private:
  std::vector<std::vector<Rational>> matrix_;
  std::vector<Rational> offset_;
};

/// Composes every constituent polynomial (generators and multipliers) with Z.
/// expand(result) == expand(cert) o Z, with an unchanged budget.
Certificate affine_transform_cert(const Certificate& cert, const AffineMap& map);

/// Same certificate over a generator system with the same polynomials in a
/// different order or with extra generators appended; `slot[j]` gives the
/// new index of old generator j.
Certificate reindex_generators(const Certificate& cert, const GeneratorSystem& target,
                               std::span<const std::size_t> slot);

}  // namespace posicert
