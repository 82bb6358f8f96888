#include "posicert/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "posicert/analysis.hpp"
#include "posicert/constructive.hpp"
#include "posicert/io.hpp"
#include "posicert/lift.hpp"
#include "posicert/search.hpp"

namespace posicert::cli {

namespace {

namespace fs = std::filesystem;

struct Context {
  std::ostream& out;
  std::ostream& err;
  bool json = false;
  int indent = 2;
  std::uint64_t seed = 0;
};

/// Prints the report (JSON mode) or the human summary, and writes `artifact` to `path` if set.
void emit(const Context& ctx, const Json& report, const std::string& summary) {
  if (ctx.json)
    ctx.out << dump_json(report, ctx.indent);
  else
    ctx.out << summary;
}

void write_artifact(const Context& ctx, const std::string& path, const Json& j) {
  if (!path.empty()) write_json_file(path, j, ctx.indent);
}

Polynomial load_polynomial(const std::string& path) { return polynomial_from_json(read_json_file(path)); }

GeneratorSystem load_system(const std::string& path, std::size_t nvars) {
  if (path.empty()) return GeneratorSystem(nvars, {});
  auto sys = system_from_json(read_json_file(path));
  if (sys.nvars() != nvars) throw ParseError("generator system arity does not match the polynomial");
  return sys;
}

Rational rational_option(const std::string& text) { return parse_rational(text); }

Cone parse_cone(const std::string& s) {
  if (s == "R") return Cone::R;
  if (s == "Q") return Cone::Q;
  if (s == "T") return Cone::T;
  throw ParseError("cone must be R, Q or T");
}

std::string yes(bool b) { return b ? "yes" : "no"; }

// ------------------------------------------------------------ lemma-norm1

struct Norm1Args {
  std::string f, out, cone = "R";
};

int lemma_norm1(const Context& ctx, const Norm1Args& a) {
  const Polynomial f = load_polynomial(a.f);
  const Cone cone = parse_cone(a.cone);
  const Certificate cert = norm1_minus_f(f, cone);
  const Rational norm = norm_l1_coef(f);
  const auto rep = verify(cert, Polynomial::constant(f.nvars(), norm) - f);
  write_artifact(ctx, a.out, to_json(cert));
  Json report = {{"command", "lemma-norm1"},
                 {"cone", a.cone},
                 {"norm1", to_string(norm)},
                 {"verify", to_json(rep)},
                 {"certificate", a.out.empty() ? to_json(cert) : Json(a.out)}};
  std::ostringstream s;
  s << "||f||_1 - f in " << a.cone << "(1 +- x)_" << rep.budget << " with ||f||_1 = " << to_string(norm)
    << "; degree " << rep.degree << ", verified " << yes(rep.ok()) << "\n";
  emit(ctx, report, s.str());
  return rep.ok() ? kOk : kIdentityFalse;
}

// ------------------------------------------------------------ lift

struct LiftArgs {
  std::string f, gens, out, penalty, lifting, bounds;
  bool auto_penalty = false;
  unsigned grid = 5;
  unsigned samples = 200;
};

int lift(const Context& ctx, const LiftArgs& a) {
  const Polynomial f = load_polynomial(a.f);
  const GeneratorSystem sys = load_system(a.gens, f.nvars());
  if (sys.empty()) throw ParseError("lift needs at least one generator");
  const auto scaled = scale_generators(sys);
  Json report = {{"command", "lift"}, {"scale_factors", Json::array()}};
  for (const auto& c : scaled.factors) report["scale_factors"].push_back(to_string(c));
  std::vector<std::string> notes;
  std::optional<BoundInputs> inputs;
  if (!a.bounds.empty()) inputs = bound_inputs_from_json(read_json_file(a.bounds));

  LiftedProblem lp;
  if (!a.lifting.empty()) {
    const Json j = read_json_file(a.lifting);
    const Polynomial F = j.contains("expr") ? parse_polynomial(j.at("expr").get<std::string>(), f.nvars() + sys.size(), f.nvars())
                                            : polynomial_from_json(j);
    lp = explicit_lifting(f, scaled.scaled, scaled.factors, F);
  } else {
    Rational penalty = 1;
    if (!a.penalty.empty()) {
      penalty = rational_option(a.penalty);
    } else if (a.auto_penalty) {
      const auto est = estimate_bound_inputs(f, scaled.scaled, 41, a.samples, ctx.seed, &notes);
      penalty = default_penalty(est);
      report["estimated_inputs"] = to_json(est);
      if (!inputs) inputs = est;
    } else {
      notes.push_back("no penalty given: using 1");
    }
    lp = build_lifted(f, scaled.scaled, penalty);
  }
  const auto range = lifted_range_bounds(lp, a.grid, inputs);
  report["lifted"] = to_json(lp);
  report["range"] = to_json(range);
  report["notes"] = notes;
  write_artifact(ctx, a.out, report);
  std::ostringstream s;
  s << "F = " << lp.F.to_string() << "\n";
  if (lp.penalty) s << "penalty " << to_string(*lp.penalty) << "\n";
  s << "grid range of F on T: [" << to_string(range.grid_min) << ", " << to_string(range.grid_max) << "]\n";
  for (const auto& n : notes) s << "note: " << n << "\n";
  emit(ctx, report, s.str());
  return kOk;
}

// ------------------------------------------------------------ certify

struct CertifyArgs {
  std::string method = "handelman", f, gens, out, trace, dump_lp, penalty, lifting;
  bool auto_penalty = false;
  unsigned rmin = 0, rmax = 8, step = 1;
  unsigned penalty_steps = 4;
  std::string penalty_ratio = "4";
  std::optional<double> time_budget;
  unsigned samples = 200;
};

int certify_cmd(const Context& ctx, const CertifyArgs& a) {
  const Method method = parse_method(a.method);
  const Polynomial f = load_polynomial(a.f);
  if (method != Method::Handelman && a.gens.empty()) throw ParseError("--gens is required for this method");
  const GeneratorSystem sys = load_system(a.gens, f.nvars());
  SearchConfig cfg;
  cfg.r_min = a.rmin;
  cfg.r_max = a.rmax;
  cfg.ladder_step = a.step;
  cfg.time_budget = a.time_budget;
  cfg.penalty_steps = a.penalty_steps;
  cfg.penalty_ratio = rational_option(a.penalty_ratio);
  std::ofstream dump;
  if (!a.dump_lp.empty()) {
    dump.open(a.dump_lp);
    if (!dump) throw std::runtime_error("cannot write " + a.dump_lp);
    cfg.dump_lp = &dump;
  }
  Json report = {{"command", "certify"}, {"method", to_string(method)}};
  std::vector<std::string> notes;
  std::optional<Polynomial> lifting;
  if (method == Method::Lift) {
    if (!a.penalty.empty()) {
      cfg.initial_penalty = rational_option(a.penalty);
      cfg.penalty_steps = 1;
    } else if (a.auto_penalty) {
      const auto scaled = scale_generators(sys);
      const auto est = estimate_bound_inputs(f, scaled.scaled, 41, a.samples, ctx.seed, &notes);
      cfg.initial_penalty = default_penalty(est);
      report["estimated_inputs"] = to_json(est);
    }
    if (!a.lifting.empty()) {
      const Json j = read_json_file(a.lifting);
      lifting = j.contains("expr") ? parse_polynomial(j.at("expr").get<std::string>(), f.nvars() + sys.size(), f.nvars())
                                   : polynomial_from_json(j);
    }
  } else if (!a.penalty.empty() || a.auto_penalty || !a.lifting.empty()) {
    throw ParseError("--penalty, --auto-penalty and --lifting apply to --method lift only");
  }
  cfg.validate();

  SearchOutcome outcome;
  if (method == Method::Lift) {
    const auto res = certify_via_lift(f, sys, cfg, lifting);
    outcome = res.outcome;
    const Json trace = to_json(res.trace);
    write_artifact(ctx, a.trace, trace);
    report["trace"] = a.trace.empty() ? trace : Json(a.trace);
  } else {
    outcome = certify(method, f, sys, cfg);
  }
  Json body = to_json(outcome);
  if (outcome.found()) {
    write_artifact(ctx, a.out, body["certificate"]);
    if (!a.out.empty()) body["certificate"] = a.out;
  }
  report.update(body);
  for (const auto& n : notes) report["warnings"].push_back(n);

  std::ostringstream s;
  s << "method " << to_string(method) << ": ";
  if (outcome.found()) {
    const auto& cert = outcome.result().cert;
    s << "certificate found at r = " << outcome.result().r << " (" << cert.terms().size() << " terms, degree "
      << cert_degree(cert) << ")\n";
  } else {
    s << "no certificate up to r = " << a.rmax << " (" << outcome.status_name() << ")\n";
  }
  for (const auto& w : report["warnings"]) s << "warning: " << w.get<std::string>() << "\n";
  emit(ctx, report, s.str());
  return outcome.found() ? kOk : kExhausted;
}

// ------------------------------------------------------------ verify

struct VerifyArgs {
  std::string cert, target;
};

int verify_cmd(const Context& ctx, const VerifyArgs& a) {
  const Certificate cert = certificate_from_json(read_json_file(a.cert), fs::path(a.cert).parent_path());
  const Polynomial target = load_polynomial(a.target);
  if (target.nvars() != system_of(cert).nvars()) throw ParseError("target arity does not match the certificate");
  const auto rep = verify(cert, target);
  Json report = to_json(rep);
  report["command"] = "verify";
  report["kind"] = std::string(1, kind(cert));
  std::ostringstream s;
  s << "identity " << (rep.identity ? "holds" : "fails") << "; degree " << rep.degree << " within budget "
    << rep.budget << ": " << yes(rep.within_budget) << "\n";
  if (!rep.identity) s << "residual: " << rep.residual.to_string() << "\n";
  for (const auto& t : rep.audit)
    if (!t.within_budget) s << "over budget: " << t.term << " (degree " << t.degree << ")\n";
  emit(ctx, report, s.str());
  return rep.ok() ? kOk : kIdentityFalse;
}

// ------------------------------------------------------------ bound

struct BoundArgs {
  std::string p, gens, method = "handelman", tol = "1/1048576";
  unsigned r = 2;
};

int bound_cmd(const Context& ctx, const BoundArgs& a) {
  const Method method = parse_method(a.method);
  if (method == Method::Lift) throw ParseError("bound supports handelman, krivine and ext-handelman");
  const Polynomial p = load_polynomial(a.p);
  if (method != Method::Handelman && a.gens.empty()) throw ParseError("--gens is required for this method");
  const GeneratorSystem sys = load_system(a.gens, p.nvars());
  const Rational tol = rational_option(a.tol);
  Json report = {{"command", "bound"}, {"method", to_string(method)}, {"r", a.r}, {"tol", to_string(tol)}};
  try {
    const Rational lambda = lp_lower_bound(p, sys, method, a.r, tol);
    report["lower_bound"] = to_string(lambda);
    report["lower_bound_float"] = to_double(lambda);
    emit(ctx, report, "p - lambda certified for lambda = " + to_string(lambda) + " (" +
                          std::to_string(to_double(lambda)) + ")\n");
    return kOk;
  } catch (const std::runtime_error& e) {
    report["lower_bound"] = nullptr;
    report["error"] = e.what();
    emit(ctx, report, std::string("no certified lower bound: ") + e.what() + "\n");
    return kExhausted;
  }
}

// ------------------------------------------------------------ analyze

struct AnalyzeArgs {
  std::string gens, f, out;
  unsigned grid = 21;
  unsigned samples = 200;
};

template <class F>
Json attempt(F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return Json{{"error", e.what()}};
  }
}

int analyze_cmd(const Context& ctx, const AnalyzeArgs& a) {
  const Json gj = read_json_file(a.gens);
  const GeneratorSystem sys = system_from_json(gj);
  std::optional<Polynomial> f;
  if (!a.f.empty()) {
    f = load_polynomial(a.f);
    if (f->nvars() != sys.nvars()) throw ParseError("f arity does not match the generator system");
  }
  if (a.grid < 2) throw ParseError("--grid needs at least 2 points per axis");
  const std::size_t n = sys.nvars();
  const auto feasible = feasible_grid(sys, a.grid);
  const auto samples = sample_box(n, a.samples, ctx.seed);
  const double slack = grid_slack(n, a.grid);

  Rational max_G = 0, max_H = 0;
  std::size_t sandwich_failures = 0;
  for (const auto& x : samples) {
    const Rational G = violation_G(sys, x), H = violation_H(sys, x);
    max_G = std::max(max_G, G);
    max_H = std::max(max_H, H);
    if (G * G > H || H > Rational(sys.size()) * G * G) ++sandwich_failures;
  }
  Json report = {{"command", "analyze"},
                 {"grid", a.grid},
                 {"samples", a.samples},
                 {"seed", ctx.seed},
                 {"feasible_grid_points", feasible.size()},
                 {"dist_slack", slack},
                 {"violation", {{"max_G", to_string(max_G)}, {"max_H", to_string(max_H)},
                                {"sandwich_failures", sandwich_failures}}}};
  report["loja"] = attempt([&] { return to_json(loja_estimate(sys, samples, feasible, 4 * slack)); });
  if (f) {
    report["kappa"] = attempt([&] { return to_json(kappa_estimate(*f, sys, a.grid)); });
    report["gap_check"] = attempt([&] { return to_json(lgx_gap_check(*f, sys, a.grid)); });
    report["estimated_inputs"] =
        attempt([&] { return to_json(estimate_bound_inputs(*f, sys, a.grid, a.samples, ctx.seed)); });
  }
  write_artifact(ctx, a.out, report);
  std::ostringstream s;
  s << feasible.size() << " feasible grid points; max G over samples " << to_string(max_G) << "\n";
  if (report["loja"].contains("error"))
    s << "Lojasiewicz fit: " << report["loja"]["error"].get<std::string>() << "\n";
  else
    s << "Lojasiewicz fit: L ~ " << report["loja"]["exponent_fit"].get<double>() << ", c ~ "
      << report["loja"]["constant_fit"].get<double>() << "\n";
  if (f) {
    if (report["kappa"].contains("error"))
      s << "kappa: " << report["kappa"]["error"].get<std::string>() << "\n";
    else
      s << "kappa >= " << report["kappa"]["kappa"]["lower"].get<std::string>() << "\n";
  }
  emit(ctx, report, s.str());
  return kOk;
}

// ------------------------------------------------------------ bounds-calc

struct BoundsCalcArgs {
  std::string inputs, kappa, L_g, c_g, f_min, H;
  std::optional<unsigned> n, m, d, d_g;
  std::optional<double> c, C_g;
};

int bounds_calc(const Context& ctx, const BoundsCalcArgs& a) {
  BoundInputs in;
  if (!a.inputs.empty()) {
    in = bound_inputs_from_json(read_json_file(a.inputs));
  } else {
    for (const char* k : {"n", "m", "d", "d_g", "kappa", "L_g", "c_g", "f_min"}) in.provenance[k] = Provenance::Default;
  }
  auto set_count = [&](const std::optional<unsigned>& v, unsigned& field, const char* key) {
    if (v) {
      field = *v;
      in.provenance[key] = Provenance::User;
    }
  };
  auto set_rational = [&](const std::string& v, Rational& field, const char* key) {
    if (!v.empty()) {
      field = rational_option(v);
      in.provenance[key] = Provenance::User;
    }
  };
  set_count(a.n, in.n, "n");
  set_count(a.m, in.m, "m");
  set_count(a.d, in.d, "d");
  set_count(a.d_g, in.d_g, "d_g");
  set_rational(a.kappa, in.kappa, "kappa");
  set_rational(a.L_g, in.L_g, "L_g");
  set_rational(a.c_g, in.c_g, "c_g");
  set_rational(a.f_min, in.f_min, "f_min");
  in.validate();
  const auto rep = degree_bounds(in, {a.c, a.C_g});
  Json report = {{"command", "bounds-calc"},
                 {"inputs", to_json(in)},
                 {"degree_bounds", to_json(rep)},
                 {"penalty", to_string(default_penalty(in))}};
  std::ostringstream s;
  for (const auto& b : rep.bounds) {
    s << b.name << ": " << b.formula << " = ";
    if (b.exact)
      s << to_string(*b.exact);
    else
      s << b.value;
    if (!b.remainder.empty()) s << " + " << b.remainder;
    if (b.constant_free) s << "  [constant-free scaling only]";
    s << "\n";
  }
  s << "penalty 1/2 c_g^2 (4 d^2 kappa)^{2 L_g} f_min = " << to_string(default_penalty(in)) << "\n";
  if (!a.H.empty()) {
    const Rational rhs = prop_bound_rhs(in, rational_option(a.H));
    report["prop_bound_rhs"] = to_string(rhs);
    s << "prop bound rhs at H = " << a.H << ": " << to_string(rhs) << "\n";
  }
  emit(ctx, report, s.str());
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact positivity certificates: Handelman search, lift-and-project, verification, bounds"};
  app.name("posicert");
  app.require_subcommand(1);
  app.fallthrough();
  Context ctx{out, err};
  app.add_flag("--json", ctx.json, "Write a machine-readable JSON report to stdout");
  app.add_option("--json-indent", ctx.indent, "JSON indentation (-1 for one line)")->capture_default_str();
  app.add_option("--seed", ctx.seed, "Seed for every sampling step")->capture_default_str();

  Norm1Args n1;
  auto* s_n1 = app.add_subcommand("lemma-norm1", "Certificate of ||f||_1 - f over the box generators");
  s_n1->add_option("--f", n1.f, "Polynomial JSON")->required();
  s_n1->add_option("--cone", n1.cone, "R, Q or T")->capture_default_str();
  s_n1->add_option("--out", n1.out, "Certificate output path");

  LiftArgs la;
  auto* s_lift = app.add_subcommand("lift", "Build the lifted polynomial F over [-1,1]^n x [0,1]^m");
  s_lift->add_option("--f", la.f)->required();
  s_lift->add_option("--gens", la.gens)->required();
  auto* lp_pen = s_lift->add_option("--penalty", la.penalty, "Penalty as a fraction");
  auto* lp_auto = s_lift->add_flag("--auto-penalty", la.auto_penalty, "Penalty from estimated constants");
  auto* lp_lift = s_lift->add_option("--lifting", la.lifting, "Explicit F(x, u) JSON, u standing for g");
  lp_pen->excludes(lp_auto)->excludes(lp_lift);
  lp_auto->excludes(lp_lift);
  s_lift->add_option("--grid", la.grid, "Grid points per axis for the range report")->capture_default_str();
  s_lift->add_option("--samples", la.samples)->capture_default_str();
  s_lift->add_option("--bounds", la.bounds, "BoundInputs JSON for the predicted range");
  s_lift->add_option("--out", la.out);

  CertifyArgs ca;
  auto* s_cert = app.add_subcommand("certify", "Search a preprime certificate on a degree ladder");
  s_cert->add_option("--method", ca.method, "handelman, krivine, ext-handelman or lift")->capture_default_str();
  s_cert->add_option("--f", ca.f)->required();
  s_cert->add_option("--gens", ca.gens);
  s_cert->add_option("--rmin", ca.rmin)->capture_default_str();
  s_cert->add_option("--rmax", ca.rmax)->capture_default_str();
  s_cert->add_option("--step", ca.step)->capture_default_str();
  auto* c_pen = s_cert->add_option("--penalty", ca.penalty, "Single fixed penalty (lift)");
  auto* c_auto = s_cert->add_flag("--auto-penalty", ca.auto_penalty, "Start the penalty schedule at the estimated penalty (lift)");
  c_pen->excludes(c_auto);
  s_cert->add_option("--penalty-ratio", ca.penalty_ratio)->capture_default_str();
  s_cert->add_option("--penalty-steps", ca.penalty_steps)->capture_default_str();
  s_cert->add_option("--lifting", ca.lifting, "Explicit F(x, u) JSON (lift)");
  s_cert->add_option("--time-budget", ca.time_budget, "Seconds");
  s_cert->add_option("--samples", ca.samples)->capture_default_str();
  s_cert->add_option("--out", ca.out, "Certificate output path");
  s_cert->add_option("--trace", ca.trace, "Lift trace output path");
  s_cert->add_option("--dump-lp", ca.dump_lp, "Write every LP tableau to this file");

  VerifyArgs va;
  auto* s_ver = app.add_subcommand("verify", "Check a certificate identity and its degree budget");
  s_ver->add_option("--cert", va.cert)->required();
  s_ver->add_option("--target", va.target)->required();

  BoundArgs ba;
  auto* s_bound = app.add_subcommand("bound", "Certified LP lower bound at a fixed rung");
  s_bound->add_option("--p", ba.p)->required();
  s_bound->add_option("--gens", ba.gens);
  s_bound->add_option("--method", ba.method)->capture_default_str();
  s_bound->add_option("--r", ba.r)->capture_default_str();
  s_bound->add_option("--tol", ba.tol)->capture_default_str();

  AnalyzeArgs aa;
  auto* s_an = app.add_subcommand("analyze", "Violation, condition number and Lojasiewicz estimates");
  s_an->add_option("--gens", aa.gens)->required();
  s_an->add_option("--f", aa.f);
  s_an->add_option("--grid", aa.grid)->capture_default_str();
  s_an->add_option("--samples", aa.samples)->capture_default_str();
  s_an->add_option("--out", aa.out);

  BoundsCalcArgs bc;
  auto* s_bc = app.add_subcommand("bounds-calc", "Degree-bound calculators");
  s_bc->add_option("--inputs", bc.inputs, "BoundInputs JSON");
  s_bc->add_option("--n", bc.n);
  s_bc->add_option("--m", bc.m);
  s_bc->add_option("--d", bc.d);
  s_bc->add_option("--dg", bc.d_g);
  s_bc->add_option("--kappa", bc.kappa);
  s_bc->add_option("--L", bc.L_g);
  s_bc->add_option("--c-g", bc.c_g);
  s_bc->add_option("--f-min", bc.f_min);
  s_bc->add_option("--const-c", bc.c, "Putinar box constant (default 1)");
  s_bc->add_option("--const-Cg", bc.C_g, "System constant C_g (default 1)");
  s_bc->add_option("--H", bc.H, "Evaluate the proposition bound at this H(x)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*s_n1) return lemma_norm1(ctx, n1);
    if (*s_lift) return lift(ctx, la);
    if (*s_cert) return certify_cmd(ctx, ca);
    if (*s_ver) return verify_cmd(ctx, va);
    if (*s_bound) return bound_cmd(ctx, ba);
    if (*s_an) return analyze_cmd(ctx, aa);
    if (*s_bc) return bounds_calc(ctx, bc);
  } catch (const ParseError& e) {
    err << "posicert: malformed input: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "posicert: invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const std::domain_error& e) {
    err << "posicert: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "posicert: error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}

}  // namespace posicert::cli
