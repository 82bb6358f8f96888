#include "posicert/search.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "posicert/constructive.hpp"

namespace posicert {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Columns g^alpha with realized degree <= r, alpha = 0 first. Zero generators
// are skipped and constant ones used at most once (higher powers only rescale
// an existing column).
struct Columns {
  std::vector<GenExponent> alphas;
  std::vector<Polynomial> products;
};

void enumerate(const GeneratorSystem& sys, unsigned r, std::size_t j, unsigned used, GenExponent& alpha,
               const Polynomial& prod, Columns& out) {
  if (j == sys.size()) {
    out.alphas.push_back(alpha);
    out.products.push_back(prod);
    return;
  }
  enumerate(sys, r, j + 1, used, alpha, prod, out);
  const Polynomial& g = sys[j];
  if (g.is_zero()) return;
  const unsigned dg = sys.degree(j);
  const unsigned cap = dg == 0 ? 1 : (r - used) / dg;
  Polynomial p = prod;
  for (unsigned e = 1; e <= cap; ++e) {
    p *= g;
    alpha[j] = e;
    enumerate(sys, r, j + 1, used + e * dg, alpha, p, out);
  }
  alpha.erase(j);
}

struct MatchingLP {
  LinearSystem lp;
  std::vector<GenExponent> alphas;
  std::size_t constant_row = 0;
};

MatchingLP build_matching(const Polynomial& f, const GeneratorSystem& sys, unsigned r) {
  if (f.nvars() != sys.nvars()) throw std::invalid_argument("target and generators differ in arity");
  Columns cols;
  GenExponent alpha;
  enumerate(sys, r, 0, 0, alpha, Polynomial::constant(sys.nvars(), 1), cols);
  std::map<Monomial, std::map<std::size_t, Rational>, GrlexLess> rows;
  rows[Monomial(sys.nvars())];
  for (const auto& [m, c] : f.terms()) rows[m];
  for (std::size_t k = 0; k < cols.products.size(); ++k) {
    for (const auto& [m, c] : cols.products[k].terms()) rows[m].emplace(k, c);
  }
  MatchingLP out{LinearSystem(cols.alphas.size()), std::move(cols.alphas), 0};
  for (auto& [m, coefs] : rows) {
    const std::size_t i = out.lp.add_row(std::move(coefs), f.coeff(m));
    if (m.is_constant()) out.constant_row = i;
  }
  return out;
}

RungReport solve_rung(const MatchingLP& m, const Polynomial& f, const GeneratorSystem& sys, unsigned r,
                      std::ostream* dump, std::optional<RCert>& cert) {
  RungReport rep;
  rep.r = r;
  rep.columns = m.lp.ncols();
  rep.rows = m.lp.nrows();
  const auto t0 = Clock::now();
  SimplexStats stats;
  const auto res = feasible(m.lp, &stats, dump);
  rep.pivots = stats.pivots;
  rep.seconds = seconds_since(t0);
  if (const auto* ok = std::get_if<Feasible>(&res)) {
    RCert::Terms terms;
    for (std::size_t k = 0; k < ok->point.size(); ++k) {
      if (sgn(ok->point[k]) > 0) terms.emplace(m.alphas[k], ok->point[k]);
    }
    cert = RCert(sys, std::move(terms), r);
    if (!verify(*cert, f).ok()) throw std::logic_error("LP solution does not verify as a certificate");
    rep.status = 'F';
  } else {
    rep.status = 'I';
    rep.farkas = std::get<Infeasible>(res).farkas;
    if (!is_farkas_witness(m.lp, rep.farkas)) throw std::logic_error("LP infeasibility witness does not verify");
  }
  return rep;
}

bool feasible_at(MatchingLP& m, const Polynomial& p, const Rational& lambda) {
  m.lp.set_rhs(m.constant_row, p.constant_term() - lambda);
  return std::holds_alternative<Feasible>(feasible(m.lp));
}

// Grid over [-1,1]^n with at most ~20000 points.
std::vector<std::vector<double>> sample_grid(std::size_t n) {
  unsigned per_axis = 2;
  while (std::pow(per_axis + 1, static_cast<double>(n)) <= 20000 && per_axis < 41) ++per_axis;
  std::vector<std::vector<double>> pts;
  std::vector<unsigned> idx(n, 0);
  while (true) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = -1 + 2.0 * idx[i] / (per_axis - 1);
    pts.push_back(std::move(x));
    std::size_t k = 0;
    while (k < n && ++idx[k] == per_axis) idx[k++] = 0;
    if (k == n) break;
  }
  return pts;
}

unsigned lifted_grid(std::size_t dims) {
  unsigned g = 2;
  while (std::pow(g + 1, static_cast<double>(dims)) <= 20000 && g < 33) ++g;
  return g;
}

}  // namespace

void SearchConfig::validate() const {
  if (ladder_step < 1) throw std::invalid_argument("ladder_step must be >= 1");
  if (r_min > r_max) throw std::invalid_argument("r_min exceeds r_max");
  if (initial_penalty <= 0 || penalty_ratio < 1) throw std::invalid_argument("invalid penalty schedule");
  if (penalty_steps < 1) throw std::invalid_argument("penalty_steps must be >= 1");
  if (time_budget && *time_budget <= 0) throw std::invalid_argument("time budget must be positive");
}

std::string SearchOutcome::status_name() const {
  switch (status.index()) {
    case 0:
      return "found";
    case 1:
      return "exhausted";
    default:
      return "infeasible";
  }
}

SearchOutcome r_cone_search(const Polynomial& f, const GeneratorSystem& sys, unsigned r, std::ostream* dump_lp) {
  const MatchingLP m = build_matching(f, sys, r);
  std::optional<RCert> cert;
  SearchOutcome out{ExhaustedLadder{}, {}, {}};
  out.rungs.push_back(solve_rung(m, f, sys, r, dump_lp, cert));
  if (cert) {
    out.status = Found{std::move(*cert), r};
  } else {
    out.status = NotInCone{out.rungs.back().farkas, r};
  }
  return out;
}

SearchOutcome ladder(const Polynomial& f, const GeneratorSystem& sys, const SearchConfig& cfg) {
  cfg.validate();
  const auto t0 = Clock::now();
  SearchOutcome out{ExhaustedLadder{}, {}, {}};
  ExhaustedLadder ex;
  for (unsigned r = cfg.r_min; r <= cfg.r_max; r += cfg.ladder_step) {
    if (cfg.time_budget && seconds_since(t0) > *cfg.time_budget) {
      ex.timed_out = true;
      break;
    }
    auto step = r_cone_search(f, sys, r, cfg.dump_lp);
    out.rungs.push_back(step.rungs.front());
    ex.last_r = r;
    if (step.found()) {
      out.status = std::move(step.status);
      return out;
    }
  }
  out.status = ex;
  return out;
}

GeneratorSystem doubled_system(const GeneratorSystem& sys) {
  std::vector<Polynomial> gens;
  std::vector<std::string> labels;
  const Polynomial one = Polynomial::constant(sys.nvars(), 1);
  for (std::size_t j = 0; j < sys.size(); ++j) {
    gens.push_back(one - sys[j]);
    labels.push_back("1-" + sys.label(j));
  }
  return sys.concat(GeneratorSystem(sys.nvars(), std::move(gens), std::move(labels)));
}

GeneratorSystem extended_system(const GeneratorSystem& sys) { return GeneratorSystem::box(sys.nvars()).concat(sys); }

SearchOutcome handelman_box(const Polynomial& f, unsigned r) {
  return r_cone_search(f, GeneratorSystem::box(f.nvars()), r);
}

namespace {

std::vector<std::string> krivine_warnings(const GeneratorSystem& sys) {
  std::vector<std::string> warnings;
  std::vector<bool> flagged(sys.size(), false);
  for (const auto& x : sample_grid(sys.nvars())) {
    bool inside = true;
    for (const auto& g : sys.gens()) inside = inside && eval_double(g, x) >= 0;
    if (!inside) continue;
    for (std::size_t j = 0; j < sys.size(); ++j) {
      if (!flagged[j] && eval_double(sys[j], x) > 1 + 1e-12) {
        flagged[j] = true;
        warnings.push_back("1 - " + sys.label(j) + " is negative at a sampled point of S_g");
      }
    }
  }
  return warnings;
}

}  // namespace

SearchOutcome krivine_stengle(const Polynomial& f, const GeneratorSystem& sys, unsigned r) {
  auto out = r_cone_search(f, doubled_system(sys), r);
  out.warnings = krivine_warnings(sys);
  return out;
}

SearchOutcome extended_handelman(const Polynomial& f, const GeneratorSystem& sys, unsigned r) {
  return r_cone_search(f, extended_system(sys), r);
}

Method parse_method(const std::string& name) {
  if (name == "handelman") return Method::Handelman;
  if (name == "krivine") return Method::Krivine;
  if (name == "ext-handelman") return Method::ExtHandelman;
  if (name == "lift") return Method::Lift;
  throw std::invalid_argument("unknown method '" + name + "'");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::Handelman:
      return "handelman";
    case Method::Krivine:
      return "krivine";
    case Method::ExtHandelman:
      return "ext-handelman";
    case Method::Lift:
      return "lift";
  }
  return "handelman";
}

GeneratorSystem method_system(Method method, std::size_t nvars, const GeneratorSystem& sys) {
  switch (method) {
    case Method::Handelman:
      return GeneratorSystem::box(nvars);
    case Method::Krivine:
      return doubled_system(sys);
    case Method::ExtHandelman:
      return extended_system(sys);
    case Method::Lift:
      break;
  }
  throw std::invalid_argument("the lift method has no single search system");
}

SearchOutcome certify(Method method, const Polynomial& f, const GeneratorSystem& sys, const SearchConfig& cfg) {
  if (method == Method::Lift) return certify_via_lift(f, sys, cfg).outcome;
  if (method != Method::Handelman && sys.nvars() != f.nvars()) {
    throw std::invalid_argument("target and generators differ in arity");
  }
  auto out = ladder(f, method_system(method, f.nvars(), sys), cfg);
  if (method == Method::Krivine) out.warnings = krivine_warnings(sys);
  return out;
}

LiftResult certify_via_lift(const Polynomial& f, const GeneratorSystem& sys, const SearchConfig& cfg,
                            const std::optional<Polynomial>& lifting) {
  cfg.validate();
  if (f.nvars() != sys.nvars()) throw std::invalid_argument("target and generators differ in arity");
  const auto t0 = Clock::now();
  const std::size_t n = f.nvars();
  const std::size_t m = sys.size();
  const ScaledSystem scaled = scale_generators(sys);
  LiftResult res{SearchOutcome{ExhaustedLadder{}, {}, {}}, {}};
  res.trace.scale_factors = scaled.factors;

  std::vector<LiftedProblem> candidates;
  if (lifting) {
    candidates.push_back(explicit_lifting(f, scaled.scaled, scaled.factors, *lifting));
  } else {
    Rational penalty = cfg.initial_penalty;
    for (unsigned k = 0; k < cfg.penalty_steps; ++k, penalty *= cfg.penalty_ratio) {
      candidates.push_back(build_lifted(f, scaled.scaled, penalty));
    }
  }
  for (const auto& lp : candidates) {
    res.trace.liftings.push_back({lp.penalty, lifted_range_bounds(lp, lifted_grid(n + m)).grid_min});
  }

  const GeneratorSystem lifted_sys = lifted_box_system(n, m);
  ExhaustedLadder ex;
  for (unsigned r = cfg.r_min; r <= cfg.r_max && !ex.timed_out; r += cfg.ladder_step) {
    for (const auto& cand : candidates) {
      if (cfg.time_budget && seconds_since(t0) > *cfg.time_budget) {
        ex.timed_out = true;
        break;
      }
      ex.last_r = r;
      ex.last_penalty = cand.penalty;
      const MatchingLP lp = build_matching(cand.F, lifted_sys, r);
      std::optional<RCert> hyper;
      RungReport rep = solve_rung(lp, cand.F, lifted_sys, r, cfg.dump_lp, hyper);
      rep.penalty = cand.penalty;
      res.trace.attempts.push_back(rep);
      res.outcome.rungs.push_back(std::move(rep));
      if (!hyper) continue;

      auto& tr = res.trace;
      tr.lifted = cand;
      tr.rung = r;
      tr.hypercube_cert = *hyper;
      tr.hypercube_degree = cert_degree(*hyper);
      tr.projected = project_cert(*hyper, cand);
      tr.projected_degree = cert_degree(*tr.projected);

      const GeneratorSystem box = GeneratorSystem::box(n);
      const GeneratorSystem base = box.concat(scaled.scaled);
      std::vector<std::size_t> slot(2 * n);
      for (std::size_t i = 0; i < 2 * n; ++i) slot[i] = i;
      std::vector<Certificate> h;
      for (std::size_t j = 0; j < m; ++j) {
        h.push_back(reindex_generators(norm1_minus_f(scaled.scaled[j], Cone::R), base, slot));
      }
      const auto composed = cert_compose(*tr.projected, base, h);
      tr.composed = composed.cert;
      tr.composed_degree = composed.realized_degree;
      tr.compose_lemma_budget = composed.lemma_budget;

      std::vector<Rational> factors(2 * n, Rational(1));
      for (const auto& c : scaled.factors) factors.push_back(Rational(1) / c);
      const Certificate final_cert = rescale_generators(composed.cert, box.concat(sys), factors);
      if (!verify(final_cert, f).ok()) throw std::logic_error("lifted certificate does not verify against f");
      tr.final_degree = cert_degree(final_cert);
      res.outcome.status = Found{std::get<RCert>(final_cert), r};
      return res;
    }
  }
  res.outcome.status = ex;
  return res;
}

Rational lp_lower_bound(const Polynomial& p, const GeneratorSystem& sys, Method method, unsigned r,
                        const Rational& tol) {
  if (tol <= 0) throw std::invalid_argument("bisection tolerance must be positive");
  const GeneratorSystem search = method_system(method, p.nvars(), sys);
  MatchingLP m = build_matching(p, search, r);
  const Rational width = norm_l1_coef(p);
  Rational lo = -width;
  Rational hi = width;
  if (!feasible_at(m, p, lo)) {
    throw std::runtime_error("no feasible lambda in [-||p||_1, ||p||_1] at r = " + std::to_string(r));
  }
  if (feasible_at(m, p, hi)) return hi;
  while (hi - lo > tol) {
    Rational mid = (lo + hi) / 2;
    if (feasible_at(m, p, mid)) {
      lo = std::move(mid);
    } else {
      hi = std::move(mid);
    }
  }
  return lo;
}

}  // namespace posicert
