#include <random>

#include "doctest.h"
#include "lift2.hpp"
#include "posicert/search.hpp"
#include "support.hpp"

using namespace posicert;
namespace lift2 = posicert::testing::lift2;

namespace {

Polynomial P(const char* text, std::size_t n = 1) { return parse_polynomial(text, n); }

SearchConfig upto(unsigned r_max) {
  SearchConfig cfg;
  cfg.r_max = r_max;
  return cfg;
}

// Points of [-1,1]^n where every generator is nonnegative.
std::vector<std::vector<Rational>> feasible_samples(std::mt19937_64& rng, const GeneratorSystem& sys, int count) {
  std::vector<std::vector<Rational>> out;
  for (int tries = 0; tries < 100 * count && static_cast<int>(out.size()) < count; ++tries) {
    auto x = testing::random_point(rng, sys.nvars());
    bool inside = true;
    for (const auto& g : sys.gens()) inside = inside && eval(g, x) >= 0;
    if (inside) out.push_back(std::move(x));
  }
  return out;
}

}  // namespace

TEST_CASE("r_cone_search examples") {
  const auto box = GeneratorSystem::box(1);
  auto out = r_cone_search(P("2 - x1^2"), box, 2);
  REQUIRE(out.found());
  CHECK(verify(out.result().cert, P("2 - x1^2")).ok());
  CHECK(out.rungs[0].columns == 6);

  out = r_cone_search(P("1 + x1"), box, 1);
  REQUIRE(out.found());
  CHECK(expand(out.result().cert) == P("1 + x1"));

  for (unsigned r = 0; r <= 4; ++r) {
    out = r_cone_search(P("x1"), box, r);
    REQUIRE(std::holds_alternative<NotInCone>(out.status));
    CHECK_FALSE(std::get<NotInCone>(out.status).farkas.empty());
  }
  CHECK(eval(P("x1"), std::vector<Rational>{-1}) < 0);
}

TEST_CASE("ladder examples") {
  const auto box = GeneratorSystem::box(1);
  auto out = ladder(P("2 - x1^2"), box, upto(6));
  REQUIRE(out.found());
  CHECK(out.result().r == 2);
  CHECK(out.rungs.size() == 3);
  CHECK(out.rungs[0].status == 'I');
  CHECK(out.rungs[1].status == 'I');

  out = ladder(P("1"), box, upto(6));
  REQUIRE(out.found());
  CHECK(out.result().r == 0);

  out = ladder(P("x1"), box, upto(4));
  REQUIRE(std::holds_alternative<ExhaustedLadder>(out.status));
  CHECK(out.rungs.size() == 5);
  for (const auto& rung : out.rungs) CHECK(rung.status == 'I');

  SearchConfig bad;
  bad.ladder_step = 0;
  CHECK_THROWS_AS(ladder(P("1"), box, bad), std::invalid_argument);
}

TEST_CASE("handelman_box matches r_cone_search over the box") {
  CHECK(handelman_box(P("2 - x1^2"), 2).found());
  CHECK_FALSE(handelman_box(P("x1"), 3).found());
}

TEST_CASE("krivine_stengle examples") {
  const GeneratorSystem x(1, {P("x1")});
  auto out = krivine_stengle(P("x1 + 1"), x, 1);
  REQUIRE(out.found());
  CHECK(out.warnings.empty());
  CHECK(krivine_stengle(P("2 - x1"), x, 1).found());
  out = krivine_stengle(P("x1*(1 - x1) + 1/4"), x, 2);
  REQUIRE(out.found());
  CHECK_FALSE(krivine_stengle(P("x1*(1 - x1) + 1/4"), x, 1).found());

  // 1 - 2x < 0 at x = 1, which lies in S_g
  out = krivine_stengle(P("1"), GeneratorSystem(1, {P("2*x1")}), 0);
  CHECK(out.warnings.size() == 1);
}

TEST_CASE("extended_handelman examples") {
  const auto g = lift2::gens();
  CHECK(extended_handelman(g[0], g, 1).found());
  CHECK(extended_handelman(g[2], g, 2).found());
  for (unsigned r = 0; r <= 3; ++r) CHECK_FALSE(extended_handelman(Polynomial::constant(2, -1), g, r).found());
}

TEST_CASE("certify_via_lift small cases") {
  const GeneratorSystem x(1, {P("x1")});
  auto res = certify_via_lift(P("1"), x, upto(4));
  REQUIRE(res.outcome.found());
  CHECK(verify(res.outcome.result().cert, P("1")).ok());
  CHECK(res.outcome.result().cert.system() == GeneratorSystem::box(1).concat(x));
  REQUIRE(res.trace.hypercube_cert.has_value());
  CHECK(verify(*res.trace.hypercube_cert, res.trace.lifted->F).ok());
  CHECK(res.trace.final_degree <= std::max(x.max_degree(), 1U) * res.trace.rung * 2);

  SearchConfig cfg = upto(3);
  cfg.penalty_steps = 2;
  res = certify_via_lift(P("-1"), x, cfg);
  REQUIRE(std::holds_alternative<ExhaustedLadder>(res.outcome.status));
  CHECK(res.trace.attempts.size() == 8);
  for (const auto& a : res.trace.attempts) {
    CHECK(a.status == 'I');
    CHECK_FALSE(a.farkas.empty());
  }
}

TEST_CASE("certify_via_lift honours the time budget") {
  SearchConfig cfg = upto(40);
  cfg.time_budget = 1e-9;
  const auto res = certify_via_lift(P("1"), GeneratorSystem(1, {P("x1")}), cfg);
  REQUIRE(std::holds_alternative<ExhaustedLadder>(res.outcome.status));
  CHECK(std::get<ExhaustedLadder>(res.outcome.status).timed_out);
}

TEST_CASE("lp_lower_bound examples") {
  const auto box = GeneratorSystem::box(1);
  const Rational tol(1, 1 << 20);
  CHECK(lp_lower_bound(P("x1"), box, Method::Handelman, 1, tol) == -1);
  CHECK(lp_lower_bound(P("7/3"), box, Method::Handelman, 0, tol) == Rational(7, 3));
  const Rational neg = lp_lower_bound(P("-2"), box, Method::Handelman, 0, tol);
  CHECK(neg <= -2);
  CHECK(neg >= -2 - tol);
  // x^2 - lambda needs an x^2 column, so r = 1 has no feasible lambda; at
  // r = 2 the bound is -1 (x^2 + 1 = 1/2 (1 - x)^2 + 1/2 (1 + x)^2).
  CHECK_THROWS_AS(lp_lower_bound(P("x1^2"), box, Method::Handelman, 1, tol), std::runtime_error);
  const Rational r2 = lp_lower_bound(P("x1^2"), box, Method::Handelman, 2, tol);
  CHECK(r2 == -1);
  const Rational r4 = lp_lower_bound(P("x1^2"), box, Method::Handelman, 4, tol);
  CHECK(r4 >= r2);
  CHECK(r4 <= 0);
}

TEST_CASE("property: found certificates are sound and ladders monotone") {
  std::mt19937_64 rng(61);
  const GeneratorSystem sys(2, {P("x1", 2), P("1 - x1 - x2^2", 2)});
  int found = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const auto f = testing::random_polynomial(rng, 2, 2, 4) + Polynomial::constant(2, 4);
    const auto out = ladder(f, extended_system(sys), upto(3));
    if (!out.found()) continue;
    ++found;
    const unsigned r = out.result().r;
    for (const auto& x : feasible_samples(rng, sys, 1000)) CHECK(eval(f, x) >= 0);
    CHECK(extended_handelman(f, sys, r + 1).found());
    CHECK(extended_handelman(f, sys, r + 2).found());
  }
  CHECK(found > 0);
}

TEST_CASE("property: lp_lower_bound is nondecreasing in r and below the sampled minimum") {
  std::mt19937_64 rng(62);
  const Rational tol(1, 1 << 10);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = testing::random_polynomial(rng, 1, 3, 4);
    Rational prev;
    bool have = false;
    Rational sampled_min;
    for (int k = 0; k <= 32; ++k) {
      const Rational v = eval(p, std::vector<Rational>{testing::ratio(k - 16, 16)});
      if (k == 0 || v < sampled_min) sampled_min = v;
    }
    for (unsigned r = 1; r <= 5; ++r) {
      Rational v;
      try {
        v = lp_lower_bound(p, GeneratorSystem::box(1), Method::Handelman, r, tol);
      } catch (const std::runtime_error&) {
        CHECK_FALSE(have);
        continue;
      }
      if (have) CHECK(v >= prev);
      CHECK(v <= sampled_min);
      prev = v;
      have = true;
    }
  }
}
