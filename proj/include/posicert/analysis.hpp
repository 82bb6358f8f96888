#pragma once
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "posicert/bound_inputs.hpp"
#include "posicert/certs.hpp"
#include "posicert/poly.hpp"

namespace posicert {

using Point = std::vector<Rational>;

/// G(x) = max_j max{0, -g_j(x)}; 0 for an empty system.
Rational violation_G(const GeneratorSystem& sys, std::span<const Rational> point);
/// H(x) = sum_j max{0, -g_j(x)}^2.
Rational violation_H(const GeneratorSystem& sys, std::span<const Rational> point);

/// Uniform grid points of [-1,1]^n at which every generator is nonnegative.
std::vector<Point> feasible_grid(const GeneratorSystem& sys, unsigned points_per_axis);
/// `count` seeded uniform points of [-1,1]^n with dyadic coordinates (2^-20 resolution).
std::vector<Point> sample_box(std::size_t n, std::size_t count, std::uint64_t seed);
/// Euclidean distance from `x` to the nearest point of `cloud` (in double).
double nearest_distance(std::span<const Rational> x, const std::vector<Point>& cloud);
/// Largest distance from a point of [-1,1]^n to the nearest node of a uniform
/// grid with `points_per_axis` nodes: the dist approximation slack.
double grid_slack(std::size_t n, unsigned points_per_axis);

struct KappaEstimate {
  SupNormBracket sup_norm;  // over [-1,1]^n
  Rational f_min_upper;     // minimum over sampled feasible points
  std::optional<Rational> f_min_lower;
  Provenance f_min_lower_source = Provenance::User;
  Rational kappa_lower;                  // max(1, sup lower / f_min upper)
  std::optional<Rational> kappa_upper;   // sup upper / f_min lower
  std::size_t feasible_samples = 0;
  Point argmin;
};

/// Brackets kappa = ||f||_sup / f_min from a grid of `points_per_axis` nodes.
/// f_min has a lower bound only when supplied or when f is constant.
/// Throws std::domain_error if no grid point is feasible or f is not positive there.
KappaEstimate kappa_estimate(const Polynomial& f, const GeneratorSystem& sys, unsigned points_per_axis,
                             std::optional<Rational> f_min_lower = std::nullopt);

struct LojaEstimate {
  double exponent_fit = 0;  // L_g
  double constant_fit = 0;  // c_g
  std::size_t sample_count = 0;
  double residual = 0;  // RMS of the log-log fit
  double min_distance = 0;  // distance cutoff applied to the samples
};

inline constexpr std::size_t kMinLojaSamples = 30;

/// Fits dist(x,S)^L = c G(x) by least squares of log dist against log G over
/// the samples with G > 0; dist is the nearest-neighbour distance to `feasible`.
/// Samples nearer than `min_distance` are dropped: there the grid resolution,
/// not the geometry, dominates the distance (pass a multiple of grid_slack).
/// Throws std::invalid_argument on fewer than 30 usable samples or an empty
/// feasible set, std::domain_error when the fitted slope is not positive.
LojaEstimate loja_estimate(const GeneratorSystem& sys, const std::vector<Point>& samples,
                           const std::vector<Point>& feasible, double min_distance = 0);

/// 1/2 c_g^2 (4 d^2 kappa)^{2 L_g} f_min H + 1/2 f_min, rounded up when 2 L_g is not integral.
Rational prop_bound_rhs(const BoundInputs& inputs, const Rational& Hx);

struct PropBoundCheck {
  std::size_t points = 0;
  std::size_t violations = 0;
  Rational worst_margin;  // min over points of rhs - lhs
};
/// Evaluates max{0, f_min - f(x)} <= prop_bound_rhs(inputs, H(x)) on a uniform grid of [-1,1]^n.
PropBoundCheck prop_bound_check(const Polynomial& f, const GeneratorSystem& sys, const BoundInputs& inputs,
                                unsigned points_per_axis);

struct SchmudgenConstant {
  double first = 0;   // pi n^{1/2} (sqrt2 (d+1))^{n/2+1}
  double second = 0;  // 2 pi (sqrt2 (n+1))^{(d+1)/2}
  double value() const { return first < second ? first : second; }
};
/// Upper bounds for C(n, d), rounded up.
SchmudgenConstant schmudgen_constant(unsigned n, unsigned d);

struct BoundConstants {
  std::optional<double> c;    // Putinar box constant
  std::optional<double> C_g;  // system-dependent constant
};

struct DegreeBound {
  std::string name;     // "PutBox", "SchBox", ...
  std::string formula;  // dominant term
  std::string remainder;  // big-O term, symbolic; empty if none
  double value = 0;       // dominant term, rounded up
  std::optional<Rational> exact;  // when the dominant term is rational
  bool constant_free = false;     // an unknown constant was defaulted to 1
};

struct DegreeBoundReport {
  std::vector<DegreeBound> bounds;
  const DegreeBound& at(const std::string& name) const;
};

/// Dominant terms of PutBox, SchBox, HandBox, ourputi, ourschmu, genHand and degbdKS.
DegreeBoundReport degree_bounds(const BoundInputs& inputs, const BoundConstants& constants = {});

struct GapCheck {
  std::size_t points = 0;
  std::size_t violations = 0;  // lhs > rhs + slack
  double worst_excess = 0;     // max lhs - rhs (can be negative)
  double slack = 0;
  Rational f_min;              // grid estimate on the feasible set
  Rational sup_norm;           // sup-norm upper bound used on the right side
};
/// Evaluates max{0, f_min - f(x)} <= d(2d-1) dist(x,S) ||f||_sup on a uniform grid.
/// Throws std::domain_error when no grid point is feasible.
GapCheck lgx_gap_check(const Polynomial& f, const GeneratorSystem& sys, unsigned points_per_axis);

struct LfToSupCheck {
  bool witnessed = false;
  unsigned points_per_axis = 0;
  Rational weighted_L;
  Rational sup_lower;
};
/// Refines a grid of [0,1]^n (3, 5, 9, ... nodes per axis, up to `max_points`)
/// until L(f) <= 60^d * grid sup is witnessed.
LfToSupCheck lftosup_check(const Polynomial& f, unsigned max_points = 33);

/// Upper bound on |grad f| over [-1,1]^n: sqrt(sum_i ||d f / d x_i||_1^2), rounded up.
double gradient_bound(const Polynomial& f);

/// BoundInputs for f over sys with every constant estimated from samples:
/// f_min = grid minimum on the feasible grid minus gradient_bound * grid_slack, kappa = sup upper bound / f_min, and L_g, c_g from
/// loja_estimate (rounded up to 1/1024; defaults 1 when no fit is possible).
/// Throws std::domain_error when no grid point is feasible or the f_min estimate is not positive.
BoundInputs estimate_bound_inputs(const Polynomial& f, const GeneratorSystem& sys, unsigned points_per_axis,
                                  std::size_t samples, std::uint64_t seed, std::vector<std::string>* notes = nullptr);

/// Worker count: POSICERT_THREADS when set and positive, otherwise hardware concurrency.
unsigned worker_threads();

}  // namespace posicert
