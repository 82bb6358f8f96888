// Acceptance suite: one PASS/FAIL line per criterion, with runtime against its budget.

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "posicert/analysis.hpp"
#include "posicert/constructive.hpp"
#include "posicert/io.hpp"
#include "posicert/lift.hpp"
#include "posicert/search.hpp"
#include "support.hpp"

using namespace posicert;
using testing::ratio;

namespace {

const std::filesystem::path kFixtures = POSICERT_FIXTURES_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = s <= budget_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::cout << (pass ? "PASS" : "FAIL") << "  [" << std::setw(2) << id << "] " << name << "  (" << std::fixed
            << std::setprecision(2) << s << " s / " << budget_s << " s";
  if (!in_time) std::cout << ", over budget";
  std::cout << ")  " << o.detail << std::endl;
}

void info(const std::string& text) { std::cout << "INFO  " << text << std::endl; }

Polynomial load(const char* name) { return polynomial_from_json(read_json_file(kFixtures / name)); }

// ---------------------------------------------------------------- univariate helpers

using Coeffs = std::vector<Rational>;  // c[k] multiplies x^k

Coeffs coeffs_of(const Polynomial& p) {
  Coeffs c(p.degree() + 1, Rational(0));
  for (const auto& [m, v] : p.terms()) c[m[0]] = v;
  return c;
}

void trim(Coeffs& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

Rational horner(const Coeffs& c, const Rational& x) {
  Rational v = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
  return v;
}

Coeffs remainder(Coeffs a, const Coeffs& b) {
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    const Rational q = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t k = 0; k < b.size(); ++k) a[shift + k] -= q * b[k];
    trim(a);
  }
  return a;
}

int sign_changes(const std::vector<Coeffs>& seq, const Rational& x) {
  int changes = 0, last = 0;
  for (const auto& p : seq) {
    const int s = sign(horner(p, x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

// Exact positivity on [-1,1]: positive at -1 and no real root in (-1, 1] by Sturm's theorem.
bool positive_on_box(const Polynomial& f) {
  Coeffs p = coeffs_of(f);
  trim(p);
  if (p.empty()) return false;
  if (horner(p, -1) <= 0 || horner(p, 1) <= 0) return false;
  if (p.size() == 1) return true;
  std::vector<Coeffs> seq{p};
  Coeffs d(p.size() - 1);
  for (std::size_t k = 1; k < p.size(); ++k) d[k - 1] = p[k] * static_cast<long>(k);
  seq.push_back(d);
  while (seq.back().size() > 1) {
    Coeffs r = remainder(seq[seq.size() - 2], seq.back());
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    seq.push_back(r);
  }
  return sign_changes(seq, -1) - sign_changes(seq, 1) == 0;
}

// Smallest r with f in the degree-r Handelman cone of [-1,1], found exactly: with x = 2t - 1,
// f is in the cone at degree r iff its degree-r Bernstein coefficients on [0,1] are nonnegative.
std::optional<unsigned> min_handelman_degree(const Polynomial& f, unsigned cap) {
  const Coeffs c = coeffs_of(f);
  Coeffs t(c.size(), Rational(0));  // coefficients of f(2t - 1)
  for (std::size_t k = 0; k < c.size(); ++k) {
    mpz_class bin = 1;
    for (std::size_t i = 0; i <= k; ++i) {  // (2t - 1)^k = sum_i C(k,i) (2t)^i (-1)^(k-i)
      Rational term = c[k] * Rational(bin) * Rational(mpz_class(1) << static_cast<mp_bitcnt_t>(i));
      t[i] += (k - i) % 2 ? -term : term;
      bin = bin * static_cast<unsigned long>(k - i) / static_cast<unsigned long>(i + 1);
    }
  }
  auto binom = [](unsigned a, unsigned b) {
    mpz_class v;
    mpz_bin_uiui(v.get_mpz_t(), a, b);
    return Rational(v);
  };
  for (unsigned r = static_cast<unsigned>(t.size()) - 1; r <= cap; ++r) {
    bool ok = true;
    for (unsigned j = 0; j <= r && ok; ++j) {
      Rational b = 0;
      for (unsigned k = 0; k <= j && k < t.size(); ++k) b += binom(j, k) / binom(r, k) * t[k];
      ok = b >= 0;
    }
    if (ok) return r;
  }
  return std::nullopt;
}

// Re-checks a Farkas vector against the matching system rebuilt from scratch:
// rows are the grlex-sorted monomials of 1, f and every (1-x)^a (1+x)^b with a + b <= r.
bool farkas_refutes(const Polynomial& f, unsigned r, const std::vector<Rational>& y) {
  std::vector<Polynomial> products;
  const auto minus = parse_polynomial("1 - x1", 1), plus = parse_polynomial("1 + x1", 1);
  for (unsigned a = 0; a <= r; ++a)
    for (unsigned b = 0; a + b <= r; ++b) products.push_back(minus.pow(a) * plus.pow(b));
  std::set<Monomial, GrlexLess> rows{Monomial(1)};
  for (const auto& [m, c] : f.terms()) rows.insert(m);
  for (const auto& p : products)
    for (const auto& [m, c] : p.terms()) rows.insert(m);
  if (rows.size() != y.size()) return false;
  auto functional = [&](const Polynomial& p) {
    Rational v = 0;
    std::size_t i = 0;
    for (const auto& m : rows) v += y[i++] * p.coeff(m);
    return v;
  };
  if (functional(f) <= 0) return false;
  for (const auto& p : products)
    if (functional(p) > 0) return false;
  return true;
}

}  // namespace

int main() {
  std::cout << "posicert acceptance suite" << std::endl;

  criterion(1, "golden identity: compose(F, g) == f", 1.0, [] {
    const Polynomial f = load("f.json");
    const Polynomial F = load("F.json");
    const GeneratorSystem g = system_from_json(read_json_file(kFixtures / "gens.json"));
    const bool from_files = compose(F, g.gens()) == f;
    const Polynomial f_text = parse_polynomial("3/4 - (1/2 - x1)^2 - (1/2 - x2)^2", 2);
    const Polynomial F_text = parse_polynomial("1/4 + 2*(u1*u2 + u1*u3 + u2*u3) + x2^2*u1 + x1^2*u2", 5, 2);
    const bool from_text = F_text == F && f_text == f;
    return Outcome{from_files && from_text, "exact rational equality, fixtures match the printed formulas"};
  });

  criterion(2, "golden certificates: exNA (T, degree 3) and the r = 3 Q certificate of F", 1.0, [] {
    const auto t = certificate_from_json(read_json_file(kFixtures / "exNA.json"), kFixtures);
    const auto q = certificate_from_json(read_json_file(kFixtures / "F_q_r3.json"), kFixtures);
    const auto rt = verify(t, load("f.json"));
    const auto rq = verify(q, load("F.json"));
    const bool ok = kind(t) == 'T' && kind(q) == 'Q' && rt.ok() && rt.budget == 3 && rt.degree <= 3 && rq.ok() &&
                    rq.budget == 3;
    std::ostringstream d;
    d << "T degree " << rt.degree << "/" << rt.budget << ", Q degree " << rq.degree << "/" << rq.budget;
    return Outcome{ok, d.str()};
  });

  criterion(3, "||f||_1 - f constructions: 200 random f, cones R, Q, T", 30.0, [] {
    std::mt19937_64 rng(20240601);
    int bad = 0;
    for (int i = 0; i < 200; ++i) {
      const std::size_t n = 1 + i % 3;
      const unsigned d = 1 + (i / 3) % 4;
      const Polynomial f = testing::random_polynomial_exact(rng, n, d);
      const Polynomial target = Polynomial::constant(n, norm_l1_coef(f)) - f;
      for (Cone c : {Cone::R, Cone::Q, Cone::T}) {
        const auto cert = norm1_minus_f(f, c);
        const auto rep = verify(cert, target);
        const unsigned cap = c == Cone::Q ? 2 * d + 1 : d;
        if (!rep.ok() || rep.degree > cap || rep.budget > cap) ++bad;
      }
    }
    return Outcome{bad == 0, std::to_string(600 - bad) + "/600 certificates verified within degree caps"};
  });

  criterion(4, "Handelman oracle: 50 positive f certified (r <= 20), 20 negative f refuted (r <= 6)", 120.0, [] {
    std::mt19937_64 rng(4242);
    const std::vector<Rational> grid = Box::symmetric(1).grid(65)[0];
    int certified = 0, positives = 0, max_r = 0, agree = 0;
    std::ostringstream uncertified;
    while (positives < 50) {
      Polynomial f = testing::random_polynomial(rng, 1, 1 + positives % 3, 4);
      // shift by a random margin above the grid minimum, then confirm exactly
      Rational lo = eval(f, std::vector<Rational>{Rational(-1)});
      for (const auto& x : grid) lo = std::min(lo, eval(f, std::vector<Rational>{x}));
      f += Polynomial::constant(1, -lo + ratio(1 + static_cast<long>(rng() % 8), 8));
      if (!positive_on_box(f)) continue;
      ++positives;
      SearchConfig cfg;
      cfg.r_max = 20;
      const auto out = ladder(f, GeneratorSystem::box(1), cfg);
      if (out.found() && verify(Certificate(out.result().cert), f).ok()) {
        ++certified;
        agree += min_handelman_degree(f, 20) == out.result().r;
        max_r = std::max(max_r, static_cast<int>(out.result().r));
      } else {
        const auto exact = min_handelman_degree(f, 100);
        uncertified << "; not certified: " << to_json(f).dump() << ", exact minimal degree "
                    << (exact ? std::to_string(*exact) : std::string("> 100"));
      }
    }
    int refuted = 0, negatives = 0;
    while (negatives < 20) {
      const Polynomial f = testing::random_polynomial(rng, 1, 1 + negatives % 3, 4);
      bool negative = false;
      for (const auto& x : grid) negative = negative || eval(f, std::vector<Rational>{x}) < 0;
      if (!negative) continue;
      ++negatives;
      bool all = true;
      for (unsigned r = 0; r <= 6; ++r) {
        const auto out = handelman_box(f, r);
        all = all && !out.found() && farkas_refutes(f, r, out.rungs.front().farkas);
      }
      refuted += all;
    }
    std::ostringstream d;
    d << certified << "/50 certified (max r " << max_r << "), rung equals the exact minimal degree in " << agree << ", "
      << refuted
      << "/20 refuted at every r <= 6 with independently re-checked Farkas witnesses" << uncertified.str();
    return Outcome{certified == 50 && agree == certified && refuted == 20, d.str()};
  });

  criterion(5, "end-to-end lift pipeline on the golden lifting example", 300.0, [] {
    const Polynomial f = load("f.json");
    const GeneratorSystem g = system_from_json(read_json_file(kFixtures / "gens.json"));
    const Polynomial F = load("F.json");
    SearchConfig cfg;
    cfg.r_max = 8;
    const auto a = certify_via_lift(f, g, cfg, F);
    const auto b = certify_via_lift(f, g, cfg, F);
    if (!a.outcome.found() || !b.outcome.found()) return Outcome{false, "no certificate up to r = 8"};
    const auto& cert = a.outcome.result().cert;
    const bool final_ok = verify(Certificate(cert), f).ok() && cert.system() == GeneratorSystem::box(2).concat(g);
    const bool hyper_ok = a.trace.hypercube_cert && a.trace.lifted &&
                          verify(Certificate(*a.trace.hypercube_cert), a.trace.lifted->F).ok();
    const bool stable = a.trace.rung == b.trace.rung &&
                        dump_json(to_json(Certificate(cert))) == dump_json(to_json(Certificate(b.outcome.result().cert)));
    std::ostringstream d;
    d << "hypercube rung " << a.trace.rung << ", final R certificate over (1 +- x, g): " << cert.terms().size()
      << " terms, degree " << cert_degree(cert) << "; hypercube certificate verifies against F: "
      << (hyper_ok ? "yes" : "no") << "; stable across runs: " << (stable ? "yes" : "no");
    return Outcome{final_ok && hyper_ok && stable, d.str()};
  });
  {
    // The automatic penalty route, reported for reference.
    const auto t0 = std::chrono::steady_clock::now();
    SearchConfig cfg;
    cfg.r_max = 5;
    const auto res = certify_via_lift(load("f.json"), system_from_json(read_json_file(kFixtures / "gens.json")), cfg);
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream d;
    d << "penalty route (penalties 1, 4, 16, 64; r <= 5): " << res.outcome.status_name();
    if (res.outcome.found()) d << " at rung " << res.trace.rung;
    d << " (" << std::fixed << std::setprecision(1) << s << " s)";
    info(d.str());
  }

  criterion(6, "LP lower bounds: x on (1 - x, 1 + x) at r = 1; monotone in r", 60.0, [] {
    const Rational tol = ratio(1, 1 << 20);
    const Rational lam = lp_lower_bound(parse_polynomial("x1", 1), GeneratorSystem(1, {}), Method::Handelman, 1, tol);
    const bool first = abs(lam + 1) <= tol;
    std::mt19937_64 rng(606);
    int monotone = 0;
    for (int i = 0; i < 20; ++i) {
      const std::size_t n = 1 + i % 2;
      const Polynomial p = testing::random_polynomial_exact(rng, n, 2, 4);
      Rational prev;
      bool ok = true;
      for (unsigned r = 2; r <= 4; ++r) {
        const Rational v = lp_lower_bound(p, GeneratorSystem(n, {}), Method::Handelman, r, tol);
        if (r > 2 && v < prev) ok = false;
        prev = v;
      }
      monotone += ok;
    }
    std::ostringstream d;
    d << "r = 1 bound " << to_string(lam) << "; " << monotone << "/20 instances nondecreasing over r = 2, 3, 4";
    return Outcome{first && monotone == 20, d.str()};
  });

  criterion(7, "G/H sandwich G^2 <= H <= m G^2 and zero on feasible points", 30.0, [] {
    std::mt19937_64 rng(77);
    int checked = 0, bad = 0, zero_checked = 0;
    for (int s = 0; s < 10; ++s) {
      const std::size_t n = 1 + s % 3, m = 1 + s % 4;
      std::vector<Polynomial> gens;
      for (std::size_t j = 0; j < m; ++j) {
        Polynomial g = testing::random_polynomial(rng, n, 2, 4);
        g.add_term(Monomial(n), -g.constant_term() + ratio(1, 2));
        gens.push_back(g);
      }
      const GeneratorSystem sys(n, gens);
      for (int k = 0; k < 100; ++k) {
        const auto x = testing::random_point(rng, n);
        const Rational G = violation_G(sys, x), H = violation_H(sys, x);
        ++checked;
        if (G * G > H || H > Rational(m) * G * G || (G == 0) != (H == 0)) ++bad;
      }
      for (const auto& x : feasible_grid(sys, 7)) {
        ++zero_checked;
        if (violation_G(sys, x) != 0 || violation_H(sys, x) != 0) ++bad;
      }
    }
    std::ostringstream d;
    d << checked << " sampled points, " << zero_checked << " feasible grid points, " << bad << " violations";
    return Outcome{bad == 0 && checked == 1000 && zero_checked > 0, d.str()};
  });

  criterion(8, "Lojasiewicz fit on sys = [x] and under rescaling by 10", 60.0, [] {
    const GeneratorSystem sys(1, {parse_polynomial("x1", 1)});
    const GeneratorSystem scaled(1, {parse_polynomial("10*x1", 1)});
    const auto samples = sample_box(1, 200, 8);
    const auto grid = feasible_grid(sys, 201);
    const auto a = loja_estimate(sys, samples, grid);
    const auto b = loja_estimate(scaled, samples, grid);
    const bool fit = a.exponent_fit >= 0.9 && a.exponent_fit <= 1.1 && a.constant_fit >= 0.8 && a.constant_fit <= 1.25;
    const bool shift = std::abs(a.exponent_fit - b.exponent_fit) <= 0.15;
    const double ratio_c = b.constant_fit / a.constant_fit;
    const double slack = std::exp(a.residual + b.residual);
    const bool bracket = ratio_c >= 0.1 / slack - 1e-12 && ratio_c <= 0.1 * slack + 1e-12;
    std::ostringstream d;
    d << std::setprecision(4) << "L " << a.exponent_fit << ", c " << a.constant_fit << " from " << a.sample_count
      << " samples; scaled: L " << b.exponent_fit << ", c ratio " << ratio_c << " (predicted 1/10)";
    return Outcome{fit && shift && bracket, d.str()};
  });

  criterion(9, "degree-bound calculators", 1.0, [] {
    BoundInputs in;
    in.n = 2;
    in.d = 2;
    const auto rep = degree_bounds(in);
    const bool hand = rep.at("HandBox").exact && *rep.at("HandBox").exact == 115200;
    const double C = schmudgen_constant(2, 1).first;
    const bool sch = std::abs(C - 8 * std::sqrt(2.0) * M_PI) <= 1e-6;
    bool mono = true;
    for (unsigned n : {1u, 2u, 3u})
      for (unsigned d : {1u, 2u, 4u}) {
        std::vector<double> prev;
        for (int k : {1, 2, 10}) {
          BoundInputs b;
          b.n = n;
          b.m = 2;
          b.d = d;
          b.d_g = 2;
          b.kappa = k;
          const auto r = degree_bounds(b);
          for (std::size_t i = 0; i < r.bounds.size(); ++i)
            if (!prev.empty() && r.bounds[i].value < prev[i]) mono = false;
          prev.clear();
          for (const auto& x : r.bounds) prev.push_back(x.value);
        }
      }
    std::ostringstream d;
    d << "HandBox(2,2,1) = " << to_string(*rep.at("HandBox").exact) << ", C(2,1) <= " << std::setprecision(8) << C
      << ", monotone in kappa over all " << rep.bounds.size() << " formulas: " << (mono ? "yes" : "no");
    return Outcome{hand && sch && mono, d.str()};
  });

  criterion(10, "proposition bound on sys = [x], f = x + 1/2 (201 grid points)", 1.0, [] {
    BoundInputs in;
    in.n = 1;
    in.m = 1;
    in.d = 1;
    in.f_min = ratio(1, 2);
    in.kappa = 3;  // sup |x + 1/2| / f_min = (3/2) / (1/2)
    const auto check = prop_bound_check(parse_polynomial("x1 + 1/2", 1),
                                        GeneratorSystem(1, {parse_polynomial("x1", 1)}), in, 201);
    std::ostringstream d;
    d << check.points << " points, " << check.violations << " violations, smallest margin "
      << to_string(check.worst_margin);
    return Outcome{check.points == 201 && check.violations == 0, d.str()};
  });

  criterion(11, "L(f) <= 60^d grid sup on [0,1]^n for 100 random f", 60.0, [] {
    std::mt19937_64 rng(1111);
    int ok = 0;
    unsigned finest = 0;
    for (int i = 0; i < 100; ++i) {
      const std::size_t n = 1 + i % 3;
      const auto f = testing::random_polynomial(rng, n, 1 + (i / 3) % 4, 6);
      const auto rep = lftosup_check(f, 33);
      ok += rep.witnessed;
      finest = std::max(finest, rep.points_per_axis);
    }
    std::ostringstream d;
    d << ok << "/100 witnessed, finest grid " << finest << " points per axis";
    return Outcome{ok == 100, d.str()};
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
