#include "posicert/lpsolve.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace posicert {

std::size_t LinearSystem::add_row(std::map<std::size_t, Rational> coefs, Rational rhs) {
  for (auto it = coefs.begin(); it != coefs.end();) {
    if (it->first >= ncols_) throw std::invalid_argument("linear row column index out of range");
    it = it->second == 0 ? coefs.erase(it) : std::next(it);
  }
  rows_.push_back({std::move(coefs), std::move(rhs)});
  return rows_.size() - 1;
}

namespace {

// Phase-1 tableau over a growing working set of columns. Tableau column k < m
// is the artificial of row k (so those columns always hold B^{-1} in the
// flipped row space); column m + t is structural column struct_[t].
class Tableau {
 public:
  explicit Tableau(const LinearSystem& sys) : m_(sys.nrows()), flip_(m_, 1), basis_(m_), rows_(m_) {
    rhs_.resize(m_);
    cost_.assign(m_, Rational(0));
    objective_ = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      const LinearRow& row = sys.rows()[i];
      flip_[i] = row.rhs < 0 ? -1 : 1;
      rhs_[i] = flip_[i] < 0 ? Rational(-row.rhs) : row.rhs;
      rows_[i].assign(m_, Rational(0));
      rows_[i][i] = 1;
      basis_[i] = i;
      order_.push_back(i);
      objective_ += rhs_[i];
    }
  }

  std::size_t width() const { return cost_.size(); }

  // Phase-1 duals in the original row orientation: y_i = flip_i (1 - d_{a_i}).
  std::vector<Rational> duals() const {
    std::vector<Rational> y(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      y[i] = Rational(1) - cost_[i];
      if (flip_[i] < 0) y[i] = -y[i];
    }
    return y;
  }

  // Appends structural column j with sparse entries (row, a) and reduced cost d.
  void add_column(std::size_t j, const std::vector<std::pair<std::size_t, Rational>>& entries, Rational d) {
    std::vector<Rational> col(m_, Rational(0));
    // B^{-1} (flip . A_j): artificial block times the flipped column.
    for (const auto& [k, a] : entries) {
      const Rational fa = flip_[k] < 0 ? Rational(-a) : a;
      for (std::size_t i = 0; i < m_; ++i) {
        if (sgn(rows_[i][k]) != 0) col[i] += rows_[i][k] * fa;
      }
    }
    for (std::size_t i = 0; i < m_; ++i) rows_[i].push_back(std::move(col[i]));
    cost_.push_back(std::move(d));
    struct_.push_back(j);
    order_.resize(width());
    std::iota(order_.begin(), order_.end(), 0);
    std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) { return rank(a) < rank(b); });
  }

  // Runs to optimality over the current columns. Returns the pivot count.
  // Entering column: most negative reduced cost. Leaving row: minimum ratio
  // with ties broken lexicographically on the rows of B^{-1}, which amounts to
  // a symbolic perturbation of the right-hand side; no basis repeats, so the
  // loop terminates even on the highly degenerate matching systems.
  std::size_t solve() {
    std::size_t pivots = 0;
    while (true) {
      std::size_t enter = width();
      for (std::size_t c : order_) {
        if (sgn(cost_[c]) < 0 && (enter == width() || cost_[c] < cost_[enter])) enter = c;
      }
      if (enter == width()) return pivots;
      std::size_t leave = m_;
      Rational best_ratio;
      for (std::size_t i = 0; i < m_; ++i) {
        const Rational& a = rows_[i][enter];
        if (sgn(a) <= 0) continue;
        Rational ratio = rhs_[i] / a;
        if (leave == m_ || ratio < best_ratio || (ratio == best_ratio && lex_less(i, leave, enter))) {
          leave = i;
          best_ratio = std::move(ratio);
        }
      }
      // Phase 1 is bounded below by zero, so a ratio-test row always exists.
      if (leave == m_) throw std::logic_error("phase-1 simplex: unbounded direction");
      pivot(leave, enter);
      ++pivots;
    }
  }

  bool feasible() const { return sgn(objective_) == 0; }

  std::vector<Rational> point(std::size_t n) const {
    std::vector<Rational> x(n, Rational(0));
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] >= m_) x[struct_[basis_[i] - m_]] = rhs_[i];
    }
    return x;
  }

  void dump(std::ostream& os, const char* title) const {
    os << "# " << title << ": " << m_ << " rows x " << struct_.size()
       << " working structural columns, phase-1 objective " << objective_.get_str() << "\n";
    for (std::size_t i = 0; i < m_; ++i) {
      os << "row " << i << " basis=" << label(basis_[i]) << " rhs=" << rhs_[i].get_str() << " :";
      for (std::size_t c = 0; c < width(); ++c) {
        if (sgn(rows_[i][c]) != 0) os << " " << label(c) << ":" << rows_[i][c].get_str();
      }
      os << "\n";
    }
    os << "cost :";
    for (std::size_t c = 0; c < width(); ++c) {
      if (sgn(cost_[c]) != 0) os << " " << label(c) << ":" << cost_[c].get_str();
    }
    os << "\n";
  }

 private:
  // Scan order: structural columns by original index, then artificials.
  std::size_t rank(std::size_t c) const { return c < m_ ? struct_limit + c : struct_[c - m_]; }
  static constexpr std::size_t struct_limit = static_cast<std::size_t>(1) << 62;

  // Row i of B^{-1} over a_ie against row k over a_ke.
  bool lex_less(std::size_t i, std::size_t k, std::size_t e) const {
    const Rational& ai = rows_[i][e];
    const Rational& ak = rows_[k][e];
    for (std::size_t c = 0; c < m_; ++c) {
      if (sgn(rows_[i][c]) == 0 && sgn(rows_[k][c]) == 0) continue;
      const Rational lhs = rows_[i][c] * ak;
      const Rational rhs = rows_[k][c] * ai;
      if (lhs != rhs) return lhs < rhs;
    }
    return false;
  }

  std::string label(std::size_t c) const {
    return c < m_ ? "a" + std::to_string(c) : std::to_string(struct_[c - m_]);
  }

  void pivot(std::size_t r, std::size_t e) {
    const Rational inv = Rational(1) / rows_[r][e];
    nz_.clear();
    auto& prow = rows_[r];
    for (std::size_t c = 0; c < width(); ++c) {
      if (sgn(prow[c]) != 0) {
        prow[c] *= inv;
        nz_.push_back(c);
      }
    }
    rhs_[r] *= inv;
    Rational factor;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || sgn(rows_[i][e]) == 0) continue;
      factor = rows_[i][e];
      auto& row = rows_[i];
      for (std::size_t c : nz_) row[c] -= factor * prow[c];
      rhs_[i] -= factor * rhs_[r];
    }
    if (sgn(cost_[e]) != 0) {
      factor = cost_[e];
      for (std::size_t c : nz_) cost_[c] -= factor * prow[c];
      objective_ += factor * rhs_[r];
    }
    basis_[r] = e;
  }

  std::size_t m_;
  std::vector<int> flip_;
  std::vector<std::size_t> basis_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<Rational> rhs_;
  std::vector<Rational> cost_;
  std::vector<std::size_t> struct_;
  std::vector<std::size_t> order_;  // columns in scan order
  Rational objective_;
  std::vector<std::size_t> nz_;
};

}  // namespace

FeasibilityResult feasible(const LinearSystem& sys, SimplexStats* stats, std::ostream* dump) {
  const std::size_t m = sys.nrows();
  const std::size_t n = sys.ncols();
  std::vector<std::vector<std::pair<std::size_t, Rational>>> columns(n);
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& [j, a] : sys.rows()[i].coefs) columns[j].emplace_back(i, a);
  }
  // Columns enter in batches priced by the current phase-1 duals; the loop
  // ends when no outside column has a negative reduced cost -y^T A_j.
  const std::size_t batch = std::max<std::size_t>(m, 16);
  std::vector<bool> in(n, false);
  Tableau tab(sys);
  if (dump != nullptr) tab.dump(*dump, "initial tableau");
  SimplexStats local;
  while (true) {
    const auto y = tab.duals();
    std::vector<std::pair<Rational, std::size_t>> priced;
    for (std::size_t j = 0; j < n; ++j) {
      if (in[j]) continue;
      Rational d = 0;
      for (const auto& [i, a] : columns[j]) d -= y[i] * a;
      if (sgn(d) < 0) priced.emplace_back(std::move(d), j);
    }
    if (priced.empty()) break;
    const std::size_t take = std::min(batch, priced.size());
    std::partial_sort(priced.begin(), priced.begin() + static_cast<long>(take), priced.end());
    std::sort(priced.begin(), priced.begin() + static_cast<long>(take),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    for (std::size_t k = 0; k < take; ++k) {
      const std::size_t j = priced[k].second;
      in[j] = true;
      tab.add_column(j, columns[j], std::move(priced[k].first));
    }
    local.pivots += tab.solve();
    ++local.rounds;
    if (tab.feasible()) break;
  }
  if (dump != nullptr) tab.dump(*dump, "final tableau");
  local.working_columns = tab.width() - m;
  if (stats != nullptr) *stats = local;
  if (tab.feasible()) return Feasible{tab.point(n)};
  return Infeasible{tab.duals()};
}

bool satisfies(const LinearSystem& sys, const std::vector<Rational>& point) {
  if (point.size() != sys.ncols()) return false;
  for (const auto& x : point) {
    if (x < 0) return false;
  }
  for (const auto& row : sys.rows()) {
    Rational lhs = 0;
    for (const auto& [j, a] : row.coefs) lhs += a * point[j];
    if (lhs != row.rhs) return false;
  }
  return true;
}

bool is_farkas_witness(const LinearSystem& sys, const std::vector<Rational>& y) {
  if (y.size() != sys.nrows()) return false;
  std::vector<Rational> combo(sys.ncols(), Rational(0));
  Rational rhs = 0;
  for (std::size_t i = 0; i < sys.nrows(); ++i) {
    if (y[i] == 0) continue;
    for (const auto& [j, a] : sys.rows()[i].coefs) combo[j] += y[i] * a;
    rhs += y[i] * sys.rows()[i].rhs;
  }
  for (const auto& c : combo) {
    if (c > 0) return false;
  }
  return rhs > 0;
}

}  // namespace posicert
