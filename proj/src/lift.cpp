#include "posicert/lift.hpp"

#include <stdexcept>
#include <string>

namespace posicert {

namespace {

// x_i -> x_i, u_j -> gbar_j(x)
std::vector<Polynomial> graph_images(const LiftedProblem& lp) {
  std::vector<Polynomial> images;
  for (std::size_t i = 0; i < lp.n(); ++i) images.push_back(Polynomial::variable(lp.n(), i));
  for (const auto& g : lp.scaled_system.gens()) images.push_back(g);
  return images;
}

void check_round_trip(const LiftedProblem& lp) {
  if (!(compose(lp.F, lp.scaled_system.gens()) == lp.f)) {
    throw std::invalid_argument("lifting does not reproduce f under u <- gbar(x)");
  }
}

void check_shapes(const Polynomial& f, const GeneratorSystem& scaled) {
  if (scaled.nvars() != f.nvars()) throw std::invalid_argument("generator arity differs from f");
  if (!is_normalized(scaled)) throw std::invalid_argument("generator system is not l1-normalized");
}

}  // namespace

bool is_normalized(const GeneratorSystem& sys) {
  for (const auto& g : sys.gens()) {
    if (norm_l1_coef(g) != 1) return false;
  }
  return true;
}

LiftedProblem build_lifted(const Polynomial& f, const GeneratorSystem& scaled, const Rational& penalty) {
  check_shapes(f, scaled);
  if (penalty <= 0) throw std::invalid_argument("penalty must be positive");
  const std::size_t n = f.nvars();
  const std::size_t m = scaled.size();
  LiftedProblem lp{f, scaled, penalty, extend_vars(f, n + m)};
  for (std::size_t j = 0; j < m; ++j) {
    const Polynomial diff = Polynomial::variable(n + m, n + j) - extend_vars(scaled[j], n + m);
    lp.F += penalty * (diff * diff);
  }
  check_round_trip(lp);
  return lp;
}

LiftedProblem explicit_lifting(const Polynomial& f, const GeneratorSystem& scaled, std::span<const Rational> factors,
                               const Polynomial& F_over_g) {
  check_shapes(f, scaled);
  const std::size_t n = f.nvars();
  const std::size_t m = scaled.size();
  if (factors.size() != m) throw std::invalid_argument("one scale factor per generator expected");
  if (F_over_g.nvars() != n + m) throw std::invalid_argument("explicit lifting must have n + m variables");
  std::vector<Polynomial> images;
  for (std::size_t i = 0; i < n + m; ++i) {
    Polynomial v = Polynomial::variable(n + m, i);
    if (i >= n) v *= factors[i - n];
    images.push_back(std::move(v));
  }
  LiftedProblem lp{f, scaled, std::nullopt, substitute(F_over_g, images)};
  check_round_trip(lp);
  return lp;
}

Rational default_penalty(const BoundInputs& in) {
  in.validate();
  const Rational base = 4 * Rational(in.d) * Rational(in.d) * in.kappa;
  return Rational(1, 2) * in.c_g * in.c_g * power_upper(base, 2 * in.L_g) * in.f_min;
}

RangeReport lifted_range_bounds(const LiftedProblem& lp, unsigned grid, const std::optional<BoundInputs>& inputs) {
  if (grid < 2) throw std::invalid_argument("grid needs at least 2 points per axis");
  const auto axes = lp.box().grid(grid);
  const std::size_t dims = axes.size();
  std::vector<std::size_t> idx(dims, 0);
  std::vector<Rational> point(dims);
  RangeReport rep;
  bool first = true;
  while (true) {
    for (std::size_t k = 0; k < dims; ++k) point[k] = axes[k][idx[k]];
    const Rational v = eval(lp.F, point);
    if (first || v < rep.grid_min) rep.grid_min = v;
    if (first || v > rep.grid_max) rep.grid_max = v;
    first = false;
    std::size_t k = 0;
    while (k < dims && ++idx[k] == axes[k].size()) idx[k++] = 0;
    if (k == dims) break;
  }
  if (inputs) {
    inputs->validate();
    const Rational base = 4 * Rational(inputs->d) * Rational(inputs->d) * inputs->kappa;
    rep.predicted_min = inputs->f_min / 2;
    rep.predicted_max = (1 + 2 * Rational(lp.m()) * inputs->c_g * inputs->c_g) *
                        power_upper(base, 2 * inputs->L_g) * inputs->f_min;
    bool user = true;
    for (const char* field : {"kappa", "L_g", "c_g", "f_min"}) user = user && inputs->source(field) == Provenance::User;
    rep.violates_prediction = user && (rep.grid_min < *rep.predicted_min || rep.grid_max > *rep.predicted_max);
  }
  return rep;
}

GeneratorSystem lifted_box_system(std::size_t n, std::size_t m) {
  const std::size_t nv = n + m;
  std::vector<Polynomial> gens;
  std::vector<std::string> labels;
  const Polynomial one = Polynomial::constant(nv, 1);
  for (std::size_t i = 0; i < n; ++i) {
    gens.push_back(one - Polynomial::variable(nv, i));
    gens.push_back(one + Polynomial::variable(nv, i));
    labels.push_back("1-x" + std::to_string(i + 1));
    labels.push_back("1+x" + std::to_string(i + 1));
  }
  for (std::size_t j = 0; j < m; ++j) {
    gens.push_back(Polynomial::variable(nv, n + j));
    labels.push_back("u" + std::to_string(j + 1));
  }
  for (std::size_t j = 0; j < m; ++j) {
    gens.push_back(one - Polynomial::variable(nv, n + j));
    labels.push_back("1-u" + std::to_string(j + 1));
  }
  return GeneratorSystem(nv, std::move(gens), std::move(labels));
}

GeneratorSystem projected_system(const LiftedProblem& lp) {
  const GeneratorSystem lifted = lifted_box_system(lp.n(), lp.m());
  const auto images = graph_images(lp);
  std::vector<Polynomial> gens;
  std::vector<std::string> labels;
  const auto& gl = lp.scaled_system.labels();
  for (std::size_t j = 0; j < lifted.size(); ++j) {
    gens.push_back(substitute(lifted[j], images));
    const std::size_t k = j - 2 * lp.n();
    if (j < 2 * lp.n()) {
      labels.push_back(lifted.label(j));
    } else if (k < lp.m()) {
      labels.push_back(gl[k] + "'");
    } else {
      labels.push_back("1-" + gl[k - lp.m()] + "'");
    }
  }
  return GeneratorSystem(lp.n(), std::move(gens), std::move(labels));
}

Certificate project_cert(const Certificate& cert, const LiftedProblem& lp) {
  if (!(system_of(cert) == lifted_box_system(lp.n(), lp.m()))) {
    throw std::invalid_argument("project_cert: certificate is not over the lifted box generators");
  }
  if (!verify(cert, lp.F).ok()) throw std::invalid_argument("project_cert: certificate does not verify against F");
  const auto images = graph_images(lp);
  const GeneratorSystem target = projected_system(lp);
  const unsigned budget = std::max(lp.scaled_system.max_degree(), 1U) * budget_of(cert);
  Certificate out;
  if (const auto* r = std::get_if<RCert>(&cert)) {
    out = RCert(target, r->terms(), budget);
  } else if (const auto* q = std::get_if<QCert>(&cert)) {
    std::vector<SosList> mult;
    for (const auto& s : q->multipliers()) mult.push_back(s.substituted(images, lp.n()));
    out = QCert(target, std::move(mult), budget);
  } else {
    const auto& t = std::get<TCert>(cert);
    TCert::Multipliers mult;
    for (const auto& [alpha, s] : t.multipliers()) mult.emplace(alpha, s.substituted(images, lp.n()));
    out = TCert(target, std::move(mult), budget);
  }
  if (!verify(out, lp.f).ok()) throw std::logic_error("project_cert: projected certificate does not verify against f");
  return out;
}

}  // namespace posicert
