#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <variant>
#include <vector>

#include "posicert/rational.hpp"

namespace posicert {

/// Sparse equality row sum_j coefs[j] * x_j = rhs.
struct LinearRow {
  std::map<std::size_t, Rational> coefs;
  Rational rhs;
};

/// { x >= 0 : A x = b } with sparse rows.
class LinearSystem {
 public:
  LinearSystem() = default;
  explicit LinearSystem(std::size_t ncols) : ncols_(ncols) {}

  std::size_t ncols() const { return ncols_; }
  std::size_t nrows() const { return rows_.size(); }
  const std::vector<LinearRow>& rows() const { return rows_; }

  /// Appends a row; zero coefficients are dropped. Returns its index.
  std::size_t add_row(std::map<std::size_t, Rational> coefs, Rational rhs);
  void set_rhs(std::size_t row, Rational rhs) { rows_.at(row).rhs = std::move(rhs); }

 private:
  std::size_t ncols_ = 0;
  std::vector<LinearRow> rows_;
};

struct Feasible {
  std::vector<Rational> point;
};

/// y with y^T A <= 0 componentwise and y^T b > 0, which rules out any x >= 0
/// with A x = b.
struct Infeasible {
  std::vector<Rational> farkas;
};

using FeasibilityResult = std::variant<Feasible, Infeasible>;

struct SimplexStats {
  std::size_t pivots = 0;
  std::size_t rounds = 0;           // pricing rounds
  std::size_t working_columns = 0;  // structural columns that entered the tableau
};

/// Phase-1 primal simplex over exact rationals (Dantzig pricing, lexicographic
/// ratio test, so no cycling and no tolerances). Columns are
/// priced in lazily: the tableau starts with the artificials only, and each
/// round appends the outside columns with the most negative reduced cost under
/// the current phase-1 duals. It stops when the phase-1 objective reaches zero
/// or no column prices out, so the duals are then a Farkas witness for the
/// whole system. `dump` (optional) receives the initial and final tableau.
FeasibilityResult feasible(const LinearSystem& sys, SimplexStats* stats = nullptr, std::ostream* dump = nullptr);

/// Exact check that `point` is nonnegative and satisfies every row.
bool satisfies(const LinearSystem& sys, const std::vector<Rational>& point);

/// Exact check of a Farkas witness.
bool is_farkas_witness(const LinearSystem& sys, const std::vector<Rational>& y);

}  // namespace posicert
