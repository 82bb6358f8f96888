#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "posicert/certs.hpp"
#include "posicert/lift.hpp"
#include "posicert/lpsolve.hpp"

namespace posicert {

struct SearchConfig {
  unsigned r_min = 0;
  unsigned r_max = 8;
  unsigned ladder_step = 1;
  /// Auto-penalty schedule: initial_penalty * penalty_ratio^k for k < penalty_steps.
  Rational initial_penalty = 1;
  Rational penalty_ratio = 4;
  unsigned penalty_steps = 4;
  /// Wall-clock cap in seconds for a whole search; checked between LP solves.
  std::optional<double> time_budget;
  /// Receives the initial and final tableau of every LP solved.
  std::ostream* dump_lp = nullptr;

  void validate() const;
};

struct RungReport {
  unsigned r = 0;
  std::optional<Rational> penalty;  // lift searches only
  char status = '?';                // 'F'ound or 'I'nfeasible
  std::size_t columns = 0;
  std::size_t rows = 0;
  std::size_t pivots = 0;
  double seconds = 0;
  std::vector<Rational> farkas;  // for 'I'
};

struct Found {
  RCert cert;
  unsigned r = 0;
};

/// Every rung tried was infeasible (or the time budget ran out).
struct ExhaustedLadder {
  unsigned last_r = 0;
  std::optional<Rational> last_penalty;
  bool timed_out = false;
};

/// A single rung with a Farkas witness against cone membership.
struct NotInCone {
  std::vector<Rational> farkas;
  unsigned r = 0;
};

struct SearchOutcome {
  std::variant<Found, ExhaustedLadder, NotInCone> status;
  std::vector<RungReport> rungs;
  std::vector<std::string> warnings;

  bool found() const { return std::holds_alternative<Found>(status); }
  const Found& result() const { return std::get<Found>(status); }
  std::string status_name() const;  // "found", "exhausted" or "infeasible"
};


/// Membership of f in R(sys)_r by exact LP: one column per g^alpha with
/// deg(g^alpha) <= r, one row per monomial of the span. Found certificates are verified.
SearchOutcome r_cone_search(const Polynomial& f, const GeneratorSystem& sys, unsigned r,
                            std::ostream* dump_lp = nullptr);

/// r_cone_search at r_min, r_min + step, ... up to r_max; stops at the first Found.
SearchOutcome ladder(const Polynomial& f, const GeneratorSystem& sys, const SearchConfig& cfg);

/// (g_1, ..., g_m, 1 - g_1, ..., 1 - g_m)
GeneratorSystem doubled_system(const GeneratorSystem& sys);
/// (1 - x_1, 1 + x_1, ..., 1 + x_n, g_1, ..., g_m)
GeneratorSystem extended_system(const GeneratorSystem& sys);

SearchOutcome handelman_box(const Polynomial& f, unsigned r);
/// Warns (in the outcome) when sampling finds a point of S_g with 1 - g_j < 0.
SearchOutcome krivine_stengle(const Polynomial& f, const GeneratorSystem& sys, unsigned r);
SearchOutcome extended_handelman(const Polynomial& f, const GeneratorSystem& sys, unsigned r);

enum class Method { Handelman, Krivine, ExtHandelman, Lift };

Method parse_method(const std::string& name);
std::string to_string(Method m);

/// The generator system a method searches over (box(n) for Handelman).
GeneratorSystem method_system(Method method, std::size_t nvars, const GeneratorSystem& sys);

/// Ladder search with the given method; Lift delegates to certify_via_lift.
SearchOutcome certify(Method method, const Polynomial& f, const GeneratorSystem& sys, const SearchConfig& cfg);

struct LiftingSummary {
  std::optional<Rational> penalty;  // absent for an explicit lifting
  Rational grid_min;                // min of F over a grid of T; negative means no certificate exists
};

struct LiftTrace {
  std::vector<Rational> scale_factors;
  std::vector<LiftingSummary> liftings;  // every lifting tried, in schedule order
  std::optional<LiftedProblem> lifted;      // the lifting that was certified
  std::optional<RCert> hypercube_cert;      // F over (1 +- x, u, 1 - u)
  std::optional<Certificate> projected;     // f over (1 +- x, gbar, 1 - gbar)
  std::optional<Certificate> composed;      // f over (1 +- x, gbar)
  unsigned rung = 0;
  unsigned hypercube_degree = 0;
  unsigned projected_degree = 0;
  unsigned composed_degree = 0;
  unsigned compose_lemma_budget = 0;
  unsigned final_degree = 0;
  std::vector<RungReport> attempts;  // the (penalty, r) frontier in search order
};

struct LiftResult {
  SearchOutcome outcome;  // Found: RCert over (1 +- x, g) for f
  LiftTrace trace;
};

/// Lift to [-1,1]^n x [0,1]^m, search a Handelman certificate of F there,
/// substitute u <- gbar, eliminate 1 - gbar via norm1_minus_f and undo the
/// scaling. With `lifting` (an F over (x, u) with u standing for the unscaled
/// g) that F is certified instead of the penalty liftings.
LiftResult certify_via_lift(const Polynomial& f, const GeneratorSystem& sys, const SearchConfig& cfg,
                            const std::optional<Polynomial>& lifting = std::nullopt);

/// Largest lambda (within tol, by bisection over [-||p||_1, ||p||_1]) with
/// p - lambda in R(method system)_r. The returned value is itself certified.
/// Throws std::runtime_error when even -||p||_1 is not certified.
Rational lp_lower_bound(const Polynomial& p, const GeneratorSystem& sys, Method method, unsigned r,
                        const Rational& tol);

}  // namespace posicert
