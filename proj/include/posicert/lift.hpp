#pragma once

#include <optional>
#include <span>
#include <vector>

#include "posicert/bound_inputs.hpp"
#include "posicert/certs.hpp"

namespace posicert {

/// A lifting (F, T) of f over S_gbar with T = [-1,1]^n x [0,1]^m: F has n + m
/// variables (x, u) and compose(F, gbar) == f.
struct LiftedProblem {
  Polynomial f;
  GeneratorSystem scaled_system;  // gbar, each with unit l1 coefficient norm
  /// c in F = f + c * sum_j (u_j - gbar_j)^2; absent for an explicit lifting.
  std::optional<Rational> penalty;
  Polynomial F;

  std::size_t n() const { return f.nvars(); }
  std::size_t m() const { return scaled_system.size(); }
  Box box() const { return Box::lifted(n(), m()); }
};

bool is_normalized(const GeneratorSystem& sys);

/// F = f + penalty * sum_j (u_j - gbar_j(x))^2.
LiftedProblem build_lifted(const Polynomial& f, const GeneratorSystem& scaled, const Rational& penalty);

/// Wraps a caller-supplied F(x, u) whose u_j stand for the unscaled g_j.
/// It is rewritten over gbar_j = g_j / factors[j] as F(x, factors * u); the
/// round trip compose(F, gbar) == f is checked.
LiftedProblem explicit_lifting(const Polynomial& f, const GeneratorSystem& scaled, std::span<const Rational> factors,
                               const Polynomial& F_over_g);

/// 1/2 c_g^2 (4 d^2 kappa)^{2 L_g} f_min, rounded upward when 2 L_g is not an integer.
Rational default_penalty(const BoundInputs& inputs);

struct RangeReport {
  Rational grid_min;
  Rational grid_max;
  /// 1/2 f_min and (1 + 2 m c_g^2)(4 d^2 kappa)^{2 L_g} f_min, when inputs were given.
  std::optional<Rational> predicted_min;
  std::optional<Rational> predicted_max;
  /// Set when constants were user-supplied and the grid leaves the predicted bracket.
  bool violates_prediction = false;
};

RangeReport lifted_range_bounds(const LiftedProblem& lp, unsigned grid,
                                const std::optional<BoundInputs>& inputs = std::nullopt);

/// (1 - x_1, 1 + x_1, ..., 1 + x_n, u_1, ..., u_m, 1 - u_1, ..., 1 - u_m) over n + m variables.
GeneratorSystem lifted_box_system(std::size_t n, std::size_t m);

/// (1 +- x, gbar, 1 - gbar) over n variables: the image of lifted_box_system under u <- gbar.
GeneratorSystem projected_system(const LiftedProblem& lp);

/// Substitutes u <- gbar(x) in every constituent of a certificate of F over
/// lifted_box_system. The result is over projected_system(lp) with budget
/// max(d_g, 1) times the input budget and verifies against f.
Certificate project_cert(const Certificate& cert, const LiftedProblem& lp);

}  // namespace posicert
