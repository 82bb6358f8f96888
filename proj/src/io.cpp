#include "posicert/io.hpp"

#include <fstream>
#include <sstream>

namespace posicert {

namespace {

// Runs a reader, converting library and json exceptions into ParseError.
template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const Json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  } catch (const std::domain_error& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

Json q(const Rational& r) { return to_string(r); }

Rational rational_from(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(mpz_class(std::to_string(j.get<long long>())));
  throw ParseError("coefficient must be a fraction string or an integer, got " + j.dump());
}

Json rationals(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const auto& r : v) out.push_back(q(r));
  return out;
}

std::size_t count_from(const Json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw ParseError(std::string("\"") + key + "\" must be a nonnegative integer");
  return v.get<std::size_t>();
}

const Json& system_json(const Json& j, const std::filesystem::path& base_dir, Json& storage) {
  const auto& s = j.at("system");
  if (!s.is_string()) return s;
  storage = read_json_file(base_dir / s.get<std::string>());
  return storage;
}

Json optional_rational(const std::optional<Rational>& r) { return r ? q(*r) : Json(nullptr); }

}  // namespace

// ------------------------------------------------------------ polynomials

Json to_json(const Polynomial& p) {
  Json terms = Json::array();
  for (const auto& [m, c] : p.terms()) terms.push_back({{"exp", m.exponents()}, {"coef", q(c)}});
  return {{"nvars", p.nvars()}, {"terms", terms}};
}

Polynomial polynomial_from_json(const Json& j) {
  return guarded("polynomial", [&] {
    if (!j.is_object()) throw ParseError("polynomial must be an object");
    const std::size_t n = count_from(j, "nvars");
    if (j.contains("expr")) return parse_polynomial(j.at("expr").get<std::string>(), n);
    Polynomial p(n);
    for (const auto& t : j.at("terms")) {
      auto e = t.at("exp").get<std::vector<unsigned>>();
      if (e.size() != n) throw ParseError("exponent length does not match nvars");
      p.add_term(Monomial(std::move(e)), rational_from(t.at("coef")));
    }
    return p;
  });
}

// ------------------------------------------------------------ systems

Json to_json(const GeneratorSystem& sys) {
  Json gens = Json::array();
  for (const auto& g : sys.gens()) gens.push_back(to_json(g));
  return {{"nvars", sys.nvars()}, {"gens", gens}, {"labels", sys.labels()}};
}

GeneratorSystem system_from_json(const Json& j) {
  return guarded("generator system", [&] {
    if (!j.is_object()) throw ParseError("generator system must be an object");
    const std::size_t n = count_from(j, "nvars");
    std::vector<Polynomial> gens;
    for (const auto& g : j.at("gens")) {
      Polynomial p = g.is_string() ? parse_polynomial(g.get<std::string>(), n) : polynomial_from_json(g);
      if (p.nvars() != n) throw ParseError("generator nvars does not match system nvars");
      gens.push_back(std::move(p));
    }
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
    return GeneratorSystem(n, std::move(gens), std::move(labels));
  });
}

// ------------------------------------------------------------ certificates

Json to_json(const SosList& s) {
  Json out = Json::array();
  for (const auto& sq : s.squares()) out.push_back({{"weight", q(sq.weight)}, {"q", to_json(sq.poly)}});
  return out;
}

SosList sos_from_json(const Json& j, std::size_t nvars) {
  return guarded("sos list", [&] {
    SosList s(nvars);
    for (const auto& e : j) {
      const Polynomial p = polynomial_from_json(e.at("q"));
      if (p.nvars() != nvars) throw ParseError("square nvars does not match system nvars");
      const Rational w = e.contains("weight") ? rational_from(e.at("weight")) : Rational(1);
      if (w <= 0) throw ParseError("square weights must be positive");
      s.add_square(p, w);
    }
    return s;
  });
}

Json to_json(const Certificate& cert, const std::optional<std::string>& system_path) {
  Json out;
  out["kind"] = std::string(1, kind(cert));
  out["budget"] = budget_of(cert);
  out["system"] = system_path ? Json(*system_path) : to_json(system_of(cert));
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, RCert>) {
          Json terms = Json::array();
          for (const auto& [alpha, coef] : c.terms()) {
            Json a = Json::array();
            for (const auto& [idx, pw] : alpha) a.push_back({idx, pw});
            terms.push_back({{"alpha", a}, {"coef", q(coef)}});
          }
          out["terms"] = terms;
        } else if constexpr (std::is_same_v<T, QCert>) {
          Json mult = Json::array();
          for (const auto& s : c.multipliers()) mult.push_back(to_json(s));
          out["multipliers"] = mult;
        } else {
          Json mult = Json::array();
          for (const auto& [subset, s] : c.multipliers()) mult.push_back({{"subset", subset}, {"squares", to_json(s)}});
          out["multipliers"] = mult;
        }
      },
      cert);
  return out;
}

Certificate certificate_from_json(const Json& j, const std::filesystem::path& base_dir) {
  return guarded("certificate", [&]() -> Certificate {
    if (!j.is_object()) throw ParseError("certificate must be an object");
    Json storage;
    const GeneratorSystem sys = system_from_json(system_json(j, base_dir, storage));
    const unsigned budget = j.at("budget").get<unsigned>();
    const std::string k = j.at("kind").get<std::string>();
    const std::size_t m = sys.size();
    if (k == "R") {
      RCert::Terms terms;
      for (const auto& t : j.at("terms")) {
        GenExponent alpha;
        for (const auto& pair : t.at("alpha")) {
          const auto idx = pair.at(0).get<std::size_t>();
          const auto pw = pair.at(1).get<unsigned>();
          if (idx >= m) throw ParseError("generator index out of range");
          if (pw > 0) alpha[idx] += pw;
        }
        const Rational c = rational_from(t.at("coef"));
        if (c <= 0) throw ParseError("preprime coefficients must be positive");
        terms[alpha] += c;
      }
      return RCert(sys, std::move(terms), budget, BudgetCheck::Defer);
    }
    if (k == "Q") {
      std::vector<SosList> mult;
      for (const auto& s : j.at("multipliers")) mult.push_back(sos_from_json(s, sys.nvars()));
      if (mult.size() != m + 1) throw ParseError("Q certificate needs one multiplier per generator plus sigma_0");
      return QCert(sys, std::move(mult), budget, BudgetCheck::Defer);
    }
    if (k == "T") {
      TCert::Multipliers mult;
      for (const auto& e : j.at("multipliers")) {
        auto subset = e.at("subset").get<GenSubset>();
        std::sort(subset.begin(), subset.end());
        if (std::adjacent_find(subset.begin(), subset.end()) != subset.end())
          throw ParseError("T subsets must not repeat a generator");
        for (auto idx : subset)
          if (idx >= m) throw ParseError("generator index out of range");
        mult.try_emplace(subset, sys.nvars()).first->second.append(sos_from_json(e.at("squares"), sys.nvars()));
      }
      return TCert(sys, std::move(mult), budget, BudgetCheck::Defer);
    }
    throw ParseError("unknown certificate kind \"" + k + "\"");
  });
}

// ------------------------------------------------------------ reports

Json to_json(const VerifyReport& rep) {
  Json audit = Json::array();
  for (const auto& a : rep.audit)
    audit.push_back({{"term", a.term}, {"degree", a.degree}, {"within_budget", a.within_budget}});
  return {{"identity", rep.identity}, {"within_budget", rep.within_budget}, {"ok", rep.ok()},
          {"degree", rep.degree},     {"budget", rep.budget},               {"audit", audit},
          {"residual", to_json(rep.residual)}};
}

Json to_json(const RungReport& rep) {
  Json out = {{"r", rep.r},         {"status", std::string(1, rep.status)}, {"columns", rep.columns},
              {"rows", rep.rows},   {"pivots", rep.pivots},                 {"penalty", optional_rational(rep.penalty)}};
  if (!rep.farkas.empty()) out["farkas"] = rationals(rep.farkas);
  return out;
}

Json to_json(const SearchOutcome& out) {
  Json j;
  j["status"] = out.status_name();
  Json rungs = Json::array();
  for (const auto& r : out.rungs) rungs.push_back(to_json(r));
  j["rungs"] = rungs;
  j["warnings"] = out.warnings;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Found>) {
          j["r"] = s.r;
          j["certificate"] = to_json(Certificate(s.cert));
        } else if constexpr (std::is_same_v<T, ExhaustedLadder>) {
          j["last_r"] = s.last_r;
          j["last_penalty"] = optional_rational(s.last_penalty);
          j["timed_out"] = s.timed_out;
        } else {
          j["r"] = s.r;
          j["farkas"] = rationals(s.farkas);
        }
      },
      out.status);
  return j;
}

Json to_json(const LiftedProblem& lp) {
  return {{"f", to_json(lp.f)},
          {"scaled_system", to_json(lp.scaled_system)},
          {"penalty", optional_rational(lp.penalty)},
          {"F", to_json(lp.F)},
          {"n", lp.n()},
          {"m", lp.m()}};
}

Json to_json(const RangeReport& rep) {
  return {{"grid_min", q(rep.grid_min)},
          {"grid_max", q(rep.grid_max)},
          {"predicted_min", optional_rational(rep.predicted_min)},
          {"predicted_max", optional_rational(rep.predicted_max)},
          {"violates_prediction", rep.violates_prediction}};
}

Json to_json(const LiftTrace& t) {
  Json j;
  j["scale_factors"] = rationals(t.scale_factors);
  Json lifts = Json::array();
  for (const auto& l : t.liftings) lifts.push_back({{"penalty", optional_rational(l.penalty)}, {"grid_min", q(l.grid_min)}});
  j["liftings"] = lifts;
  j["lifted"] = t.lifted ? to_json(*t.lifted) : Json(nullptr);
  j["hypercube_cert"] = t.hypercube_cert ? to_json(Certificate(*t.hypercube_cert)) : Json(nullptr);
  j["projected"] = t.projected ? to_json(*t.projected) : Json(nullptr);
  j["composed"] = t.composed ? to_json(*t.composed) : Json(nullptr);
  j["rung"] = t.rung;
  j["hypercube_degree"] = t.hypercube_degree;
  j["projected_degree"] = t.projected_degree;
  j["composed_degree"] = t.composed_degree;
  j["compose_lemma_budget"] = t.compose_lemma_budget;
  j["final_degree"] = t.final_degree;
  Json attempts = Json::array();
  for (const auto& a : t.attempts) attempts.push_back(to_json(a));
  j["attempts"] = attempts;
  return j;
}

Json to_json(const BoundInputs& in) {
  Json prov;
  for (const char* f : {"n", "m", "d", "d_g", "kappa", "L_g", "c_g", "f_min"}) prov[f] = to_string(in.source(f));
  return {{"n", in.n},         {"m", in.m},           {"d", in.d},         {"d_g", in.d_g},
          {"kappa", q(in.kappa)}, {"L_g", q(in.L_g)}, {"c_g", q(in.c_g)}, {"f_min", q(in.f_min)},
          {"provenance", prov}};
}

BoundInputs bound_inputs_from_json(const Json& j) {
  return guarded("bound inputs", [&] {
    if (!j.is_object()) throw ParseError("bound inputs must be an object");
    BoundInputs in;
    auto count = [&](const char* key, unsigned& field) {
      if (j.contains(key)) field = j.at(key).get<unsigned>();
      else in.provenance[key] = Provenance::Default;
    };
    auto rational = [&](const char* key, Rational& field) {
      if (j.contains(key)) field = rational_from(j.at(key));
      else in.provenance[key] = Provenance::Default;
    };
    count("n", in.n);
    count("m", in.m);
    count("d", in.d);
    count("d_g", in.d_g);
    rational("kappa", in.kappa);
    rational("L_g", in.L_g);
    rational("c_g", in.c_g);
    rational("f_min", in.f_min);
    if (j.contains("provenance"))
      for (const auto& [key, v] : j.at("provenance").items()) {
        const auto s = v.get<std::string>();
        if (s == "user") in.provenance[key] = Provenance::User;
        else if (s == "estimated") in.provenance[key] = Provenance::Estimated;
        else if (s == "default") in.provenance[key] = Provenance::Default;
        else throw ParseError("unknown provenance \"" + s + "\"");
      }
    in.validate();
    return in;
  });
}

Json to_json(const KappaEstimate& est) {
  return {{"sup_norm", {{"lower", q(est.sup_norm.lower)}, {"upper", q(est.sup_norm.upper)}, {"provenance", "estimated"}}},
          {"f_min",
           {{"upper", q(est.f_min_upper)},
            {"upper_provenance", "estimated"},
            {"lower", optional_rational(est.f_min_lower)},
            {"lower_provenance", est.f_min_lower ? Json(to_string(est.f_min_lower_source)) : Json(nullptr)}}},
          {"kappa",
           {{"lower", q(est.kappa_lower)},
            {"upper", optional_rational(est.kappa_upper)},
            {"provenance", "estimated"}}},
          {"feasible_samples", est.feasible_samples},
          {"argmin", rationals(est.argmin)}};
}

Json to_json(const LojaEstimate& est) {
  return {{"exponent_fit", est.exponent_fit}, {"constant_fit", est.constant_fit}, {"sample_count", est.sample_count},
          {"residual", est.residual},         {"min_distance", est.min_distance}, {"provenance", "estimated"}};
}

Json to_json(const DegreeBoundReport& rep) {
  Json out = Json::array();
  for (const auto& b : rep.bounds)
    out.push_back({{"name", b.name},
                   {"formula", b.formula},
                   {"remainder", b.remainder},
                   {"value", b.value},
                   {"exact", optional_rational(b.exact)},
                   {"constants", b.constant_free ? "constant-free scaling only" : "supplied"}});
  return out;
}

Json to_json(const GapCheck& rep) {
  return {{"points", rep.points},       {"violations", rep.violations}, {"worst_excess", rep.worst_excess},
          {"slack", rep.slack},         {"f_min", q(rep.f_min)},        {"f_min_provenance", "estimated"},
          {"sup_norm", q(rep.sup_norm)}};
}

Json to_json(const PropBoundCheck& rep) {
  return {{"points", rep.points}, {"violations", rep.violations}, {"worst_margin", q(rep.worst_margin)}};
}

// ------------------------------------------------------------ files

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string dump_json(const Json& j, int indent) { return j.dump(indent) + "\n"; }

void write_json_file(const std::filesystem::path& path, const Json& j, int indent) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << dump_json(j, indent);
}

}  // namespace posicert
