#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "plap/cli.hpp"
#include "plap/io.hpp"
#include "support/fixtures.hpp"

using namespace plap;
namespace fs = std::filesystem;

namespace {

io::json cosine_classify_config() {
  io::json j;
  j["command"] = "classify";
  j["p"] = 2.0;
  j["nonlinearity"] = {{"breakpoints", {0.0, 3.0}},
                       {"pieces", {{-1.0, 1.0}}},
                       {"cap", 3.0}};
  return j;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("plap_test_" + name);
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST_CASE("config parsing: happy path and validation") {
  auto cfg = io::parse_config(cosine_classify_config());
  CHECK(cfg.command == "classify");
  CHECK(cfg.p == 2.0);
  CHECK(cfg.f->cap() == 3.0);
  CHECK(cfg.f->eval(0.0) == -1.0);

  auto bad = cosine_classify_config();
  bad.erase("p");
  CHECK_THROWS_AS(io::parse_config(bad), config_error);

  auto badp = cosine_classify_config();
  badp["p"] = 1.0;
  CHECK_THROWS_AS(io::parse_config(badp), config_error);

  auto ball = cosine_classify_config();
  ball["command"] = "ball";
  ball["N"] = 2;
  ball["rho"] = 5.0;  // above the cap
  ball["eps"] = 0.05;
  ball["r_list"] = {1.0, 2.0};
  CHECK_THROWS_AS(io::parse_config(ball), config_error);

  auto strip = cosine_classify_config();
  strip["command"] = "strip";
  strip["rho"] = 2.0;
  strip["W"] = 4.0;
  strip["H"] = 6.0;
  strip["nx"] = 8;  // too small
  strip["ny"] = 49;
  CHECK_THROWS_AS(io::parse_config(strip), config_error);
}

TEST_CASE("profile CSV round-trips byte-identically") {
  auto f = fixtures::cubic_well();
  auto entry = catalog(f, 2.0).entries[1];
  auto prof = build_profile(f, 2.0, entry, 8.0, 257);
  std::string csv = io::profile_csv(prof);

  // re-parse and re-emit
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  std::string again = line + "\n";
  while (std::getline(is, line)) {
    double t, u, du;
    char c1, c2;
    std::istringstream row(line);
    row >> t >> c1 >> u >> c2 >> du;
    again += io::fmt(t) + "," + io::fmt(u) + "," + io::fmt(du) + "\n";
  }
  CHECK(csv == again);
}

TEST_CASE("classify run emits the periodic entry with its half-period") {
  auto dir = fresh_dir("classify");
  auto cfg = io::parse_config(cosine_classify_config());
  CHECK(cli::run(cfg, dir.string()) == cli::exit_ok);
  io::json rep = io::json::parse(slurp(dir / "classification.json"));
  CHECK(rep.at("pf").get<double>() == doctest::Approx(2.0));
  REQUIRE(rep.at("catalog").size() == 2);
  CHECK(rep.at("catalog")[1].at("kind") == "periodic");
  CHECK(rep.at("catalog")[1].at("half_period").get<double>() ==
        doctest::Approx(M_PI).epsilon(1e-9));
  fs::remove_all(dir);
}

TEST_CASE("repeated runs are byte-identical") {
  auto d1 = fresh_dir("det1");
  auto d2 = fresh_dir("det2");
  io::json j = cosine_classify_config();
  j["command"] = "profile";
  j["t_max"] = 12.566370614359172;
  j["n"] = 513;
  auto cfg = io::parse_config(j);
  REQUIRE(cli::run(cfg, d1.string()) == cli::exit_ok);
  REQUIRE(cli::run(cfg, d2.string()) == cli::exit_ok);
  for (const char* name :
       {"classification.json", "profile_1.csv", "profile_1.json", "profile_1.svg"}) {
    CHECK(slurp(d1 / name) == slurp(d2 / name));
    CHECK(!slurp(d1 / name).empty());
  }
  // LF endings only
  CHECK(slurp(d1 / "profile_1.csv").find('\r') == std::string::npos);
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("audit run writes the hypothesis report") {
  auto dir = fresh_dir("audit");
  io::json j;
  j["command"] = "audit";
  j["p"] = 2.0;
  j["N"] = 5;
  j["nonlinearity"] = {{"breakpoints", {0.0, 2.0}},
                       {"pieces", {{0.0, 0.0, 0.0, 1.0, -1.0}}},
                       {"cap", 2.0}};
  auto cfg = io::parse_config(j);
  CHECK(cli::run(cfg, dir.string()) == cli::exit_ok);
  io::json rep = io::json::parse(slurp(dir / "audit.json"));
  CHECK(rep.at("verdicts").at("subcritical_growth").at("verdict") == "fails");
  CHECK(rep.at("gamma").get<double>() == doctest::Approx(2.0));
  fs::remove_all(dir);
}

TEST_CASE("hypothesis refusals exit with code 2") {
  auto dir = fresh_dir("refusal");
  io::json j = cosine_classify_config();
  j["command"] = "ball";  // f(0) = -1 < 0 violates the ball hypotheses
  j["N"] = 2;
  j["rho"] = 2.0;
  j["eps"] = 0.05;
  j["r_list"] = {2.0, 4.0};
  j["J"] = 128;
  auto cfg = io::parse_config(j);
  CHECK(cli::run(cfg, dir.string()) == cli::exit_hypothesis);
  fs::remove_all(dir);
}
