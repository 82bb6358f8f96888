#pragma once

// Golden lifting example built by hand, independent of the fixture files.

#include "posicert/certs.hpp"

namespace posicert::testing::lift2 {

inline const char* kF = "1/4 + 2*(u1*u2 + u1*u3 + u2*u3) + x2^2*u1 + x1^2*u2";
inline const char* kf = "3/4 - (1/2 - x1)^2 - (1/2 - x2)^2";

inline Polynomial f() { return parse_polynomial(kf, 2); }
inline Polynomial F() { return parse_polynomial(kF, 5, 2); }

inline GeneratorSystem gens() {
  return GeneratorSystem(2, {parse_polynomial("x1", 2), parse_polynomial("x2", 2),
                             parse_polynomial("1 - (1 + x1)*(1 + x2)/2", 2)});
}

/// f = 1/4 + 2 (g1 g2 + g1 g3 + g2 g3) + x2^2 g1 + x1^2 g2
inline TCert exna_cert() {
  const std::size_t n = 2;
  auto sq = [&](const char* q) {
    SosList s(n);
    s.add_square(parse_polynomial(q, n));
    return s;
  };
  SosList two(n);
  two.add_square(parse_polynomial("1", n));
  two.add_square(parse_polynomial("1", n));
  TCert::Multipliers m;
  m[{}] = sq("1/2");
  m[{0, 1}] = two;
  m[{0, 2}] = two;
  m[{1, 2}] = two;
  m[{0}] = sq("x2");
  m[{1}] = sq("x1");
  return TCert(gens(), std::move(m), 3);
}

/// (1 - x1, 1 + x1, 1 - x2, 1 + x2, u1, u2, u3, 1 - u1, 1 - u2, 1 - u3) over (x1, x2, u1, u2, u3).
inline GeneratorSystem lifted_system() {
  std::vector<Polynomial> g;
  for (const char* s : {"1 - x1", "1 + x1", "1 - x2", "1 + x2", "u1", "u2", "u3", "1 - u1", "1 - u2", "1 - u3"}) {
    g.push_back(parse_polynomial(s, 5, 2));
  }
  return GeneratorSystem(5, std::move(g));
}

/// F = (u1 + u2 + u3 - 1/2)^2 + sum_j [(1 - u_j)^2 u_j + u_j^2 (1 - u_j)] + x2^2 u1 + x1^2 u2
inline QCert q_cert_r3() {
  const std::size_t n = 5;
  auto p = [&](const char* s) { return parse_polynomial(s, 5, 2); };
  std::vector<SosList> m(11, SosList(n));
  m[0].add_square(p("u1 + u2 + u3 - 1/2"));
  m[5].add_square(p("1 - u1"));
  m[5].add_square(p("x2"));
  m[6].add_square(p("1 - u2"));
  m[6].add_square(p("x1"));
  m[7].add_square(p("1 - u3"));
  m[8].add_square(p("u1"));
  m[9].add_square(p("u2"));
  m[10].add_square(p("u3"));
  return QCert(lifted_system(), std::move(m), 3);
}

}  // namespace posicert::testing::lift2
