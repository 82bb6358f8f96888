#include "posicert/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

#include "posicert/lift.hpp"

namespace posicert {

namespace {

// Calls body(i) for i in [0, count) across worker threads; each index is
// written by exactly one thread, so results do not depend on scheduling.
template <class Body>
void parallel_for(std::size_t count, Body body) {
  const std::size_t workers = std::min<std::size_t>(worker_threads(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) body(i);
    });
  for (auto& t : pool) t.join();
}

// Every point of the uniform grid of `box`.
std::vector<Point> grid_points(const Box& box, unsigned points_per_axis) {
  const auto axes = box.grid(points_per_axis);
  const std::size_t n = axes.size();
  std::vector<Point> out;
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    Point p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = axes[i][idx[i]];
    out.push_back(std::move(p));
    std::size_t k = 0;
    while (k < n && ++idx[k] == points_per_axis) idx[k++] = 0;
    if (k == n) break;
  }
  return out;
}

// Rounds a nonnegative double up by a relative margin covering a few ulps of libm error.
double up(double v) { return v == 0 ? 0.0 : std::nextafter(v * (v > 0 ? 1 + 1e-12 : 1 - 1e-12), HUGE_VAL); }

double log_up(unsigned n) { return n <= 1 ? 0.0 : up(std::log(static_cast<double>(n))); }

// base^exponent with an exactness flag; base >= 0, exponent >= 0.
struct Power {
  Rational value;
  bool exact;
};
Power rpow(const Rational& base, const Rational& exponent) {
  if (exponent.get_den() == 1) return {pow(base, static_cast<unsigned>(exponent.get_num().get_ui())), true};
  if (base == 0 || base == 1) return {base, true};
  if (base >= 1) return {power_upper(base, exponent), false};
  // base in (0,1): a power below 1, bounded by the upward-rounded float value
  return {from_double(up(std::pow(to_double(base), to_double(exponent)))), false};
}

unsigned checked_grid(unsigned points_per_axis) {
  if (points_per_axis < 2) throw std::invalid_argument("grid needs at least 2 points per axis");
  return points_per_axis;
}

using DoubleCloud = std::vector<std::vector<double>>;

DoubleCloud to_doubles(const std::vector<Point>& cloud) {
  DoubleCloud out(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i)
    for (const auto& c : cloud[i]) out[i].push_back(to_double(c));
  return out;
}

double nearest_in(std::span<const Rational> x, const DoubleCloud& cloud) {
  std::vector<double> xd(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) xd[i] = to_double(x[i]);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : cloud) {
    double s = 0;
    for (std::size_t i = 0; i < xd.size(); ++i) {
      const double t = xd[i] - p[i];
      s += t * t;
    }
    best = std::min(best, s);
  }
  return std::sqrt(best);
}

}  // namespace

unsigned worker_threads() {
  if (const char* env = std::getenv("POSICERT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Rational violation_G(const GeneratorSystem& sys, std::span<const Rational> point) {
  Rational worst = 0;
  for (const auto& g : sys.gens()) worst = std::max(worst, Rational(-eval(g, point)));
  return worst;
}

Rational violation_H(const GeneratorSystem& sys, std::span<const Rational> point) {
  Rational sum = 0;
  for (const auto& g : sys.gens()) {
    const Rational v = eval(g, point);
    if (v < 0) sum += v * v;
  }
  return sum;
}

std::vector<Point> feasible_grid(const GeneratorSystem& sys, unsigned points_per_axis) {
  auto all = grid_points(Box::symmetric(sys.nvars()), checked_grid(points_per_axis));
  std::vector<char> keep(all.size());
  parallel_for(all.size(), [&](std::size_t i) { keep[i] = violation_G(sys, all[i]) == 0; });
  std::vector<Point> out;
  for (std::size_t i = 0; i < all.size(); ++i)
    if (keep[i]) out.push_back(std::move(all[i]));
  return out;
}

std::vector<Point> sample_box(std::size_t n, std::size_t count, std::uint64_t seed) {
  constexpr long kScale = 1L << 20;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> coord(-kScale, kScale);
  std::vector<Point> out(count, Point(n));
  for (auto& p : out)
    for (auto& c : p) c = make_rational(coord(rng), kScale);
  return out;
}

double nearest_distance(std::span<const Rational> x, const std::vector<Point>& cloud) {
  return nearest_in(x, to_doubles(cloud));
}

double grid_slack(std::size_t n, unsigned points_per_axis) {
  const double h = 2.0 / (checked_grid(points_per_axis) - 1);
  return up(std::sqrt(static_cast<double>(n)) * h / 2);
}

KappaEstimate kappa_estimate(const Polynomial& f, const GeneratorSystem& sys, unsigned points_per_axis,
                             std::optional<Rational> f_min_lower) {
  if (f.nvars() != sys.nvars()) throw std::invalid_argument("kappa_estimate: arity mismatch");
  const auto feasible = feasible_grid(sys, points_per_axis);
  if (feasible.empty()) throw std::domain_error("kappa_estimate: no feasible sample found");
  KappaEstimate out;
  out.feasible_samples = feasible.size();
  out.sup_norm = sup_norm_estimate(f, Box::symmetric(f.nvars()), points_per_axis);
  std::vector<Rational> values(feasible.size());
  parallel_for(feasible.size(), [&](std::size_t i) { values[i] = eval(f, feasible[i]); });
  const auto best = std::min_element(values.begin(), values.end()) - values.begin();
  out.f_min_upper = values[best];
  out.argmin = feasible[best];
  if (out.f_min_upper <= 0) throw std::domain_error("kappa_estimate: f is not positive on the sampled feasible set");
  if (f_min_lower) {
    if (*f_min_lower <= 0 || *f_min_lower > out.f_min_upper)
      throw std::invalid_argument("kappa_estimate: f_min lower bound must lie in (0, sampled minimum]");
    out.f_min_lower = f_min_lower;
    out.f_min_lower_source = Provenance::User;
  } else if (f.degree() == 0) {
    out.f_min_lower = out.f_min_upper;
    out.f_min_lower_source = Provenance::Estimated;
  }
  out.kappa_lower = std::max(Rational(1), Rational(out.sup_norm.lower / out.f_min_upper));
  if (out.f_min_lower) out.kappa_upper = std::max(Rational(1), Rational(out.sup_norm.upper / *out.f_min_lower));
  return out;
}

LojaEstimate loja_estimate(const GeneratorSystem& sys, const std::vector<Point>& samples,
                           const std::vector<Point>& feasible, double min_distance) {
  if (feasible.empty()) throw std::invalid_argument("loja_estimate: empty feasible grid");
  std::vector<double> logG(samples.size()), logDist(samples.size());
  std::vector<char> usable(samples.size(), 0);
  const auto cloud = to_doubles(feasible);
  parallel_for(samples.size(), [&](std::size_t i) {
    const Rational G = violation_G(sys, samples[i]);
    if (G <= 0) return;
    const double dist = nearest_in(samples[i], cloud);
    if (!(dist > 0) || dist < min_distance) return;
    logG[i] = std::log(to_double(G));
    logDist[i] = std::log(dist);
    usable[i] = 1;
  });
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (usable[i]) {
      xs.push_back(logG[i]);
      ys.push_back(logDist[i]);
    }
  if (xs.size() < kMinLojaSamples)
    throw std::invalid_argument("loja_estimate: need at least 30 samples with G > 0, got " +
                                std::to_string(xs.size()));
  const double k = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0) throw std::domain_error("loja_estimate: violation values do not vary");
  // log dist = slope log G + intercept, i.e. dist^{1/slope} = e^{intercept/slope} G
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  if (!(slope > 0)) throw std::domain_error("loja_estimate: fitted slope is not positive");
  double rss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (slope * xs[i] + intercept);
    rss += r * r;
  }
  LojaEstimate out;
  out.exponent_fit = 1 / slope;
  out.constant_fit = std::exp(intercept / slope);
  out.sample_count = xs.size();
  out.residual = std::sqrt(rss / k);
  out.min_distance = min_distance;
  return out;
}

Rational prop_bound_rhs(const BoundInputs& inputs, const Rational& Hx) {
  if (Hx < 0) throw std::invalid_argument("prop_bound_rhs: H(x) must be nonnegative");
  return default_penalty(inputs) * Hx + inputs.f_min / 2;
}

PropBoundCheck prop_bound_check(const Polynomial& f, const GeneratorSystem& sys, const BoundInputs& inputs,
                                unsigned points_per_axis) {
  inputs.validate();
  if (f.nvars() != sys.nvars()) throw std::invalid_argument("prop_bound_check: arity mismatch");
  const auto points = grid_points(Box::symmetric(f.nvars()), checked_grid(points_per_axis));
  std::vector<Rational> margin(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const Rational lhs = std::max(Rational(0), Rational(inputs.f_min - eval(f, points[i])));
    margin[i] = prop_bound_rhs(inputs, violation_H(sys, points[i])) - lhs;
  });
  PropBoundCheck out;
  out.points = points.size();
  out.worst_margin = *std::min_element(margin.begin(), margin.end());
  out.violations = std::count_if(margin.begin(), margin.end(), [](const Rational& m) { return m < 0; });
  return out;
}

SchmudgenConstant schmudgen_constant(unsigned n, unsigned d) {
  const double pi = std::numbers::pi;
  const double s2 = std::numbers::sqrt2;
  SchmudgenConstant out;
  out.first = up(pi * std::sqrt(static_cast<double>(n)) * std::pow(s2 * (d + 1), n / 2.0 + 1));
  out.second = up(2 * pi * std::pow(s2 * (n + 1), (d + 1) / 2.0));
  return out;
}

const DegreeBound& DegreeBoundReport::at(const std::string& name) const {
  for (const auto& b : bounds)
    if (b.name == name) return b;
  throw std::out_of_range("no degree bound named " + name);
}

DegreeBoundReport degree_bounds(const BoundInputs& inputs, const BoundConstants& constants) {
  inputs.validate();
  const double c = constants.c.value_or(1);
  const double Cg = constants.C_g.value_or(1);
  if (!(c > 0) || !(Cg > 0)) throw std::invalid_argument("degree_bounds: constants must be positive");
  const Rational n(inputs.n), d(inputs.d), dg(inputs.d_g);
  const Rational& kappa = inputs.kappa;
  const Rational& L = inputs.L_g;
  const double kd = to_double(kappa);
  DegreeBoundReport rep;

  auto add = [&](std::string name, std::string formula, std::string remainder, double value,
                 std::optional<Rational> exact, bool constant_free) {
    rep.bounds.push_back({std::move(name), std::move(formula), std::move(remainder), value, std::move(exact),
                          constant_free});
  };
  // value and optional exact form of factor * product of powers
  auto product = [](const Rational& factor, std::initializer_list<Power> powers) {
    Rational v = factor;
    bool exact = true;
    for (const auto& p : powers) {
      v *= p.value;
      exact = exact && p.exact;
    }
    return std::pair<double, std::optional<Rational>>{up(to_double(v)),
                                                        exact ? std::optional<Rational>(v) : std::nullopt};
  };

  add("PutBox", "c log(n) d^2 kappa", "O(kappa^{1/2})", up(c * log_up(inputs.n) * to_double(d * d) * kd),
      std::nullopt, !constants.c);

  add("SchBox", "C(n,d) kappa^{1/2}", "", up(schmudgen_constant(inputs.n, inputs.d).value() * up(std::sqrt(kd))),
      std::nullopt, false);

  {
    const auto [v, ex] = product(kappa, {rpow(60, d), rpow(d, 3), rpow(n, d)});
    add("HandBox", "60^d d^3 n^d kappa", "", v, ex, false);
  }
  {
    const auto [v, ex] = product(1, {rpow(d, 4 * L + 2), rpow(kappa, 2 * L)});
    add("ourputi", "C_g log(n) d^{4L_g+2} kappa^{2L_g}", "", up(Cg * log_up(inputs.n) * v), std::nullopt,
        !constants.C_g);
  }
  {
    const auto [v, ex] = product(1, {rpow(d * d * kappa, L)});
    const double C = schmudgen_constant(inputs.n + inputs.m, inputs.d + 2 * inputs.d_g).value();
    add("ourschmu", "C_g C(n+m, d+2d_g) (d^2 kappa)^{L_g}", "O_g(d n^{1/2})", up(Cg * C * v), std::nullopt,
        !constants.C_g);
  }
  {
    const auto [v, ex] = product(1, {rpow(60, d), rpow(d, 4 * L + 3), rpow(n, 2 * dg * d), rpow(kappa, 2 * L)});
    std::optional<Rational> exact;
    if (ex && !constants.C_g) exact = *ex;
    add("genHand", "C_g 60^d d^{4L_g+3} n^{2d_g d} kappa^{2L_g}", "", up(Cg * v), exact, !constants.C_g);
  }
  {
    const auto [v, ex] = product(1, {rpow(2, d), rpow(d, 4 * L + 3), rpow(n, 2 * dg * d), rpow(kappa, 2 * L)});
    std::optional<Rational> exact;
    if (ex && !constants.C_g) exact = *ex;
    add("degbdKS", "C_g 2^d d^{4L_g+3} n^{2d_g d} kappa^{2L_g}", "", up(Cg * v), exact, !constants.C_g);
  }
  return rep;
}

GapCheck lgx_gap_check(const Polynomial& f, const GeneratorSystem& sys, unsigned points_per_axis) {
  if (f.nvars() != sys.nvars()) throw std::invalid_argument("lgx_gap_check: arity mismatch");
  const std::size_t n = f.nvars();
  const auto feasible = feasible_grid(sys, points_per_axis);
  if (feasible.empty()) throw std::domain_error("lgx_gap_check: no feasible grid point");
  const auto points = grid_points(Box::symmetric(n), points_per_axis);
  GapCheck out;
  out.points = points.size();
  out.f_min = eval(f, feasible.front());
  for (const auto& p : feasible) out.f_min = std::min(out.f_min, eval(f, p));
  out.sup_norm = sup_norm_estimate(f, Box::symmetric(n), points_per_axis).upper;
  const double d = f.degree();
  const double factor = d * (2 * d - 1) * to_double(out.sup_norm);
  // dist is overestimated by at most the grid slack, and the grid minimum
  // exceeds f_min by at most the gradient bound times that slack
  const double delta = grid_slack(n, points_per_axis);
  out.slack = up((factor + gradient_bound(f)) * delta);
  const auto cloud = to_doubles(feasible);
  std::vector<double> excess(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const double lhs = to_double(std::max(Rational(0), Rational(out.f_min - eval(f, points[i]))));
    const double dist = violation_G(sys, points[i]) == 0 ? 0.0 : nearest_in(points[i], cloud);
    excess[i] = lhs - factor * dist;
  });
  out.worst_excess = *std::max_element(excess.begin(), excess.end());
  out.violations = std::count_if(excess.begin(), excess.end(), [&](double e) { return e > out.slack; });
  return out;
}

LfToSupCheck lftosup_check(const Polynomial& f, unsigned max_points) {
  LfToSupCheck out;
  out.weighted_L = norm_weighted_L(f);
  const Rational scale = pow(Rational(60), f.degree());
  for (unsigned k = 3; k <= std::max(3u, max_points); k = 2 * k - 1) {
    out.points_per_axis = k;
    out.sup_lower = sup_norm_estimate(f, Box::unit(f.nvars()), k).lower;
    if (out.weighted_L <= scale * out.sup_lower) {
      out.witnessed = true;
      break;
    }
  }
  return out;
}

double gradient_bound(const Polynomial& f) {
  double sum = 0;
  for (std::size_t i = 0; i < f.nvars(); ++i) {
    const double g = up(to_double(norm_l1_coef(partial_derivative(f, i))));
    sum += g * g;
  }
  return up(std::sqrt(sum));
}

BoundInputs estimate_bound_inputs(const Polynomial& f, const GeneratorSystem& sys, unsigned points_per_axis,
                                  std::size_t samples, std::uint64_t seed, std::vector<std::string>* notes) {
  const std::size_t n = f.nvars();
  const auto kappa = kappa_estimate(f, sys, points_per_axis);
  BoundInputs in;
  in.n = static_cast<unsigned>(n);
  in.m = static_cast<unsigned>(sys.size());
  in.d = f.degree();
  in.d_g = sys.max_degree();
  const double slack = grid_slack(n, points_per_axis);
  // short dyadic values, rounded in the conservative direction
  auto round_up = [](double v) { return make_rational(static_cast<long>(std::ceil(v * 1024)), 1024); };
  const Rational width = make_rational(static_cast<long>(std::ceil(gradient_bound(f) * slack * 1048576)), 1048576);
  in.f_min = kappa.f_min_upper - width;
  if (in.f_min <= 0) throw std::domain_error("f_min estimate is not positive at this grid resolution");
  in.kappa = std::max(Rational(1), round_up(std::nextafter(to_double(kappa.sup_norm.upper / in.f_min), HUGE_VAL)));
  try {
    const auto loja = loja_estimate(sys, sample_box(n, samples, seed), feasible_grid(sys, points_per_axis), 4 * slack);
    in.L_g = std::max(Rational(1), round_up(loja.exponent_fit));
    in.c_g = std::max(make_rational(1, 1024), round_up(loja.constant_fit));
    in.provenance["L_g"] = in.provenance["c_g"] = Provenance::Estimated;
  } catch (const std::exception& e) {
    in.provenance["L_g"] = in.provenance["c_g"] = Provenance::Default;
    if (notes) notes->push_back(std::string("L_g and c_g defaulted to 1: ") + e.what());
  }
  in.provenance["kappa"] = in.provenance["f_min"] = Provenance::Estimated;
  return in;
}

}  // namespace posicert
