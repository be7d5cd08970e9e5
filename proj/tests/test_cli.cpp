#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "gbspec/errors.hpp"
#include "json.hpp"

using namespace gbspec;
using doctest::Approx;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("symbol grid row count") {
    const Run r = run({"symbol", "--kind", "f", "--p", "3", "--family", "hyperbolic", "--alpha", "10", "--grid", "512"});
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    CHECK(ls.size() == 513);
    CHECK(ls[0] == "theta,value");
  }

  TEST_CASE("symbol forms agree") {
    for (auto [form, p] : {std::pair{"series", "5"}, std::pair{"closed", "3"}}) {
      const auto a = lines(run({"symbol", "--kind", "f", "--p", p, "--grid", "16"}).out);
      const auto b = lines(run({"symbol", "--kind", "f", "--p", p, "--grid", "16", "--form", form}).out);
      REQUIRE(a.size() == b.size());
      for (std::size_t k = 1; k < a.size(); ++k) {
        const double va = std::stod(a[k].substr(a[k].find(',') + 1));
        const double vb = std::stod(b[k].substr(b[k].find(',') + 1));
        CHECK(std::abs(va - vb) < 1e-5);
      }
    }
  }

  TEST_CASE("toeplitz eigenvalues") {
    const Run r = run({"toeplitz", "--symbol", "f", "--p", "2", "--family", "polynomial", "--m", "3", "--eig"});
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 4);
    const double want[] = {2 - std::sqrt(2.0), 2.0, 2 + std::sqrt(2.0)};
    for (int k = 0; k < 3; ++k) {
      double re = 0, im = 0;
      int idx = -1;
      REQUIRE(std::sscanf(ls[k + 1].c_str(), "%d,%lf,%lf", &idx, &re, &im) == 3);
      CHECK(re == Approx(want[k]).epsilon(1e-12));
      CHECK(im == 0.0);
    }
  }

  TEST_CASE("distribution report decreases for the default problem") {
    const std::string cfg = temp_file("gbspec_cli_default.json", "{}");
    const Run r = run({"distribution", "--config", cfg, "--n", "64,128"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["runs"].size() == 2);
    CHECK(j["runs"][0]["n"] == 64);
    CHECK(j["runs"][1]["mean_abs_discrepancy"].get<double>() < j["runs"][0]["mean_abs_discrepancy"].get<double>());
    CHECK(j["discrepancy_decreasing"] == true);
  }

  TEST_CASE("cardinal, bounds, decay, assemble, eig run") {
    CHECK(lines(run({"cardinal", "--p", "2", "--samples", "30"}).out).size() == 32);
    const auto b = nlohmann::json::parse(run({"bounds", "--p", "4", "--family", "trigonometric", "--alpha", "1"}).out);
    CHECK(b["upper_violations"] == 0);
    CHECK(lines(run({"decay", "--pmin", "2", "--pmax", "6"}).out).size() == 6);
    const auto m = lines(run({"assemble", "--n", "8", "--matrix", "M"}).out);
    CHECK(m.size() == 1 + 9);  // order n + p - 2
    CHECK(lines(run({"eig", "--n", "8"}).out).size() == 1 + 9);
  }

  TEST_CASE("binary matrix output") {
    const auto path = (std::filesystem::temp_directory_path() / "gbspec_cli_A.bin").string();
    REQUIRE(run({"assemble", "--n", "6", "--format", "binary", "--out", path}).code == 0);
    std::ifstream f(path, std::ios::binary);
    std::int64_t dims[2];
    f.read(reinterpret_cast<char*>(dims), sizeof dims);
    CHECK(dims[0] == 7);
    CHECK(dims[1] == 7);
    CHECK(std::filesystem::file_size(path) == 16 + 8 * 49);
  }

  TEST_CASE("exit codes") {
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({}).code == 1);
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"symbol", "--kind", "q"}).code == 1);
    CHECK(run({"symbol", "--grid", "abc"}).code == 1);
    CHECK(run({"symbol", "--family", "hyperbolic"}).code == 1);  // alpha missing
    CHECK(run({"symbol", "--kind", "f", "--p", "1"}).code == 1);
    CHECK(run({"cardinal", "--family", "trigonometric", "--alpha", "4"}).code == 1);
    CHECK(run({"eig", "--config", "/nonexistent/problem.json"}).code == 1);
    CHECK(run({"eig", "--config", temp_file("gbspec_bad1.json", "{\"kappa\": \"-1\"}")}).code == 1);
    CHECK(run({"eig", "--config", temp_file("gbspec_bad2.json", "{\"kapa\": \"1\"}")}).code == 1);
    CHECK(run({"eig", "--config", temp_file("gbspec_bad3.json", "{\"p\": \"3\"}")}).code == 1);
    CHECK(run({"eig", "--config", temp_file("gbspec_bad4.json", "{\"kappa\": \"1+\"}")}).code == 1);
    CHECK(run({"eig", "--config", temp_file("gbspec_bad5.json", "{not json")}).code == 1);
  }

  TEST_CASE("output is deterministic") {
    const std::vector<std::string> args{"eig", "--n", "12"};
    CHECK(run(args).out == run(args).out);
    const std::vector<std::string> sym{"symbol", "--kind", "h", "--p", "5", "--family", "trigonometric", "--alpha", "1"};
    CHECK(run(sym).out == run(sym).out);
  }

  TEST_CASE("1D schema") {
    const auto pr = cli::parse_problem_1d(R"({"d":1,"kappa":"1+x","beta":0,"gamma":"2","family":"trigonometric",
      "alpha":1.5,"mode":"nested","p":4,"geometry":{"G":"(x+x^2)/2","G1":null,"G2":null}})");
    CHECK(pr.p == 4);
    CHECK(pr.mode == PhaseMode::Nested);
    CHECK(pr.family.tag == Family::Trigonometric);
    CHECK(pr.coeffs.kappa(0.5) == Approx(1.5));
    CHECK(pr.geometry.G1(0.5) == Approx(1.0));
    CHECK(pr.geometry.G2(0.5) == Approx(1.0));
    CHECK_THROWS_AS(cli::parse_problem_1d(R"({"d":2})"), ValidationError);
    CHECK_THROWS_AS(cli::parse_problem_1d(R"({"geometry":{"G":"x^2"}})"), ValidationError);  // G'(0) = 0
  }

  TEST_CASE("2D schema") {
    const auto pr = cli::parse_problem_md(R"({"d":2,"K":[["1","0"],["0","2"]],"beta":["0","1"],"gamma":"0",
      "nu":[1,2],"p":[2,3],"family":["polynomial","hyperbolic"],"alpha":[0,2],"mode":"nested"})");
    CHECK(pr.problem.d == 2);
    CHECK(pr.problem.p == std::vector<int>{2, 3});
    CHECK(pr.problem.nu == std::vector<int>{1, 2});
    CHECK(pr.problem.family[1].tag == Family::Hyperbolic);
    CHECK_THROWS_AS(cli::parse_problem_md(R"({"d":2,"K":[["1"]]})"), ValidationError);
    CHECK_THROWS_AS(cli::parse_problem_md(R"({"d":4})"), ValidationError);
    const Run r = run({"distribution-md", "--n", "6,8"});
    CHECK(r.code == 0);
  }
}
