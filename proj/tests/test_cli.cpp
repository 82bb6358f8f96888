#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "posicert/cli.hpp"
#include "posicert/io.hpp"

using namespace posicert;

namespace {

namespace fs = std::filesystem;

const fs::path kFixtures = POSICERT_FIXTURES_DIR;

std::string fx(const char* name) { return (kFixtures / name).string(); }

fs::path scratch() {
  auto dir = fs::temp_directory_path() / "posicert_test_cli";
  fs::create_directories(dir);
  return dir;
}

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string write(const char* name, const std::string& text) {
  const auto path = scratch() / name;
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("verify: golden certificates of the lifting example") {
  auto r = run({"verify", "--cert", fx("exNA.json"), "--target", fx("f.json")});
  CHECK(r.code == 0);
  CHECK(r.out.find("identity holds") != std::string::npos);
  r = run({"verify", "--cert", fx("F_q_r3.json"), "--target", fx("F.json"), "--json"});
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["ok"] == true);
  CHECK(j["kind"] == "Q");
  CHECK(j["degree"] == 3);
}

TEST_CASE("verify: corrupted coefficient is identity-false") {
  std::string text = slurp(fx("f.json"));
  const auto pos = text.find("\"1/4\"");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 5, "\"1/3\"");
  const auto bad = write("f_bad.json", text);
  const auto r = run({"verify", "--cert", fx("exNA.json"), "--target", bad});
  CHECK(r.code == 3);
  CHECK(r.out.find("residual") != std::string::npos);
}

TEST_CASE("usage and malformed input exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"verify", "--cert", fx("exNA.json")}).code == 2);
  CHECK(run({"verify", "--cert", write("broken.json", "{ not json"), "--target", fx("f.json")}).code == 2);
  const auto decimal = write("decimal.json", R"({"nvars":1,"terms":[{"exp":[0],"coef":"0.5"}]})");
  const auto r = run({"certify", "--f", decimal});
  CHECK(r.code == 2);
  CHECK(r.err.find("malformed input") != std::string::npos);
  CHECK(run({"verify", "--cert", fx("exNA.json"), "--target", fx("F.json")}).code == 2);
  CHECK(run({"certify", "--method", "simplex", "--f", fx("f.json")}).code == 2);
  CHECK(run({"certify", "--method", "krivine", "--f", fx("f.json")}).code == 2);
  CHECK(run({"lift", "--f", fx("f.json"), "--gens", fx("gens.json"), "--penalty", "2", "--auto-penalty"}).code == 2);
  CHECK(run({"bounds-calc", "--kappa", "1/2"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("certify: Handelman on 2 - x^2 emits a certificate") {
  const auto out = (scratch() / "two_cert.json").string();
  auto r = run({"certify", "--method", "handelman", "--f", fx("two_minus_xsq.json"), "--rmax", "2", "--out", out});
  CHECK(r.code == 0);
  const Json cert = read_json_file(out);
  CHECK(cert["kind"] == "R");
  CHECK(dump_json(to_json(certificate_from_json(cert))) == dump_json(cert));
  r = run({"verify", "--cert", out, "--target", fx("two_minus_xsq.json")});
  CHECK(r.code == 0);
}

TEST_CASE("certify: exhausted ladder exits 4") {
  const auto x = write("x.json", R"({"nvars":1,"expr":"x1"})");
  const auto r = run({"certify", "--f", x, "--rmax", "3", "--json"});
  CHECK(r.code == 4);
  const Json j = Json::parse(r.out);
  CHECK(j["status"] == "exhausted");
  CHECK(j["rungs"].size() == 4);
}

TEST_CASE("certify: krivine over the doubled system") {
  const auto f = write("half.json", R"({"nvars":1,"expr":"1 + x1"})");
  const auto g = write("unit.json", R"({"nvars":1,"gens":["x1"]})");
  const auto r = run({"certify", "--method", "krivine", "--f", f, "--gens", g, "--rmax", "2", "--json"});
  CHECK(r.code == 0);
  CHECK(Json::parse(r.out)["status"] == "found");
}

TEST_CASE("lemma-norm1 and lift") {
  const auto out = (scratch() / "norm1.json").string();
  auto r = run({"lemma-norm1", "--f", fx("f.json"), "--cone", "T", "--out", out});
  CHECK(r.code == 0);
  CHECK(read_json_file(out)["kind"] == "T");
  CHECK(run({"lemma-norm1", "--f", fx("f.json"), "--cone", "X"}).code == 2);

  r = run({"lift", "--f", fx("f.json"), "--gens", fx("gens.json"), "--lifting", fx("F.json"), "--json"});
  CHECK(r.code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["lifted"]["penalty"].is_null());
  CHECK(j["range"]["grid_min"] == "1/4");

  r = run({"lift", "--f", fx("f.json"), "--gens", fx("gens.json"), "--penalty", "4", "--json"});
  CHECK(r.code == 0);
  j = Json::parse(r.out);
  CHECK(j["lifted"]["penalty"] == "4");
  CHECK(j["scale_factors"] == Json::array({"1", "1", "2"}));
}

TEST_CASE("bound: LP lower bound of x on the box") {
  const auto x = write("px.json", R"({"nvars":1,"expr":"x1"})");
  auto r = run({"bound", "--p", x, "--r", "1", "--json"});
  CHECK(r.code == 0);
  CHECK(Json::parse(r.out)["lower_bound"] == "-1");
  const auto sq = write("psq.json", R"({"nvars":1,"expr":"x1^2"})");
  r = run({"bound", "--p", sq, "--r", "1"});
  CHECK(r.code == 4);
}

TEST_CASE("bounds-calc") {
  auto r = run({"bounds-calc", "--n", "2", "--d", "2", "--json"});
  CHECK(r.code == 0);
  Json j = Json::parse(r.out);
  bool seen = false;
  for (const auto& b : j["degree_bounds"])
    if (b["name"] == "HandBox") {
      CHECK(b["exact"] == "115200");
      seen = true;
    }
  CHECK(seen);
  CHECK(j["inputs"]["provenance"]["kappa"] == "default");
  CHECK(j["inputs"]["provenance"]["n"] == "user");
  r = run({"bounds-calc", "--H", "1", "--json"});
  CHECK(Json::parse(r.out)["prop_bound_rhs"] == "17/2");
}

TEST_CASE("analyze: report contents and determinism") {
  const std::vector<std::string> args = {"analyze", "--gens", fx("gens.json"), "--f", fx("f.json"),
                                         "--grid", "21", "--samples", "200", "--seed", "9", "--json"};
  const auto a = run(args);
  CHECK(a.code == 0);
  const Json j = Json::parse(a.out);
  CHECK(j["violation"]["sandwich_failures"] == 0);
  CHECK(j["kappa"]["kappa"]["provenance"] == "estimated");
  CHECK(j["loja"]["exponent_fit"].get<double>() > 0);
  CHECK(j["gap_check"]["violations"] == 0);
  setenv("POSICERT_THREADS", "1", 1);
  const auto b = run(args);
  unsetenv("POSICERT_THREADS");
  CHECK(a.out == b.out);
  auto other_seed = args;
  other_seed[10] = "10";
  CHECK(run(other_seed).out != a.out);

  const auto infeasible = write("empty_set.json", R"({"nvars":1,"gens":["-1 - x1^2"]})");
  const auto e = run({"analyze", "--gens", infeasible, "--json"});
  CHECK(e.code == 0);
  CHECK(Json::parse(e.out)["loja"].contains("error"));
}

TEST_CASE("certify output is byte-identical across runs") {
  const auto o1 = (scratch() / "det1.json").string();
  const auto o2 = (scratch() / "det2.json").string();
  const auto r1 = run({"certify", "--f", fx("two_minus_xsq.json"), "--rmax", "3", "--out", o1, "--json"});
  const auto r2 = run({"certify", "--f", fx("two_minus_xsq.json"), "--rmax", "3", "--out", o2, "--json"});
  CHECK(slurp(o1) == slurp(o2));
  CHECK(Json::parse(r1.out)["rungs"] == Json::parse(r2.out)["rungs"]);
}

TEST_CASE("certify: lift pipeline writes certificate and trace") {
  const auto f = write("one.json", R"({"nvars":1,"expr":"1"})");
  const auto g = write("halfline.json", R"({"nvars":1,"gens":["x1"]})");
  const auto out = (scratch() / "lift_cert.json").string();
  const auto trace = (scratch() / "lift_trace.json").string();
  const auto r = run({"certify", "--method", "lift", "--f", f, "--gens", g, "--penalty", "1", "--rmax", "4",
                      "--out", out, "--trace", trace, "--json"});
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["r"] == 3);
  CHECK(j["trace"] == trace);
  const Json t = read_json_file(trace);
  CHECK(t["rung"] == 3);
  CHECK(t["hypercube_cert"]["kind"] == "R");
  CHECK(run({"verify", "--cert", out, "--target", f}).code == 0);
  CHECK(run({"certify", "--method", "handelman", "--f", f, "--penalty", "1"}).code == 2);
}
