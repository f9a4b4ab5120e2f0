#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "quadnet/error.hpp"
#include "quadnet/runner.hpp"
#include "quadnet/scenario.hpp"

using namespace quadnet;

namespace {

const char* kSmall = R"(scenario small
vars mu: l0 l1 l2
vars x: x0 x1 x2 x3 x4 x5 x6 x7
poly A = x0*x2 + x3^2
poly B = x1*x4 - x5^2
poly C = x0*x6 + x1*x7 + x2^2
check contains_line(A, B, C)
)";

std::filesystem::path temp_dir() {
  auto d = std::filesystem::temp_directory_path() / "quadnet-scenario-test";
  std::filesystem::create_directories(d);
  return d;
}

void write(const std::filesystem::path& p, const std::string& text) { std::ofstream(p) << text; }

Report run_text(const std::string& text, RunOptions o = {}) { return run_scenario(parse_scenario(text), o); }

}  // namespace

TEST_CASE("parsing a small scenario") {
  auto s = parse_scenario(kSmall);
  CHECK(s.name == "small");
  CHECK(s.vars->mu_count() == 3);
  REQUIRE(s.checks.size() == 1);
  CHECK(s.checks[0].name == "contains_line");
  CHECK(s.checks[0].args == std::vector<std::string>{"A", "B", "C"});
  CHECK(s.checks[0].line == 7);
  CHECK(s.parse("A + B") == s.parse("x0*x2 + x3^2 + x1*x4 - x5^2"));
  CHECK_THROWS_AS(s.map("phi"), DomainError);
  CHECK_THROWS_AS(s.chart("U1"), DomainError);
}

TEST_CASE("scenario errors are positioned") {
  SUBCASE("empty file") {
    try {
      parse_scenario("# only a comment\n\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("no declarations") != std::string::npos);
    }
  }
  SUBCASE("undeclared variable") {
    try {
      parse_scenario("vars mu: a b c\nvars x: x0 x1\npoly P = x0 + y9\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("y9") != std::string::npos);
      CHECK(e.line() == 3);
      CHECK(e.column() == 15);
    }
  }
  SUBCASE("unknown directive and duplicates") {
    CHECK_THROWS_AS(parse_scenario("vars mu: a\nfrobnicate\n"), ParseError);
    CHECK_THROWS_AS(parse_scenario("vars mu: a\nvars x: y\npoly P = y\npoly P = y^2\n"), ParseError);
    CHECK_THROWS_AS(parse_scenario("vars mu: a\nvars x: y\nchart U\nsubst y = a\n"), ParseError);
    CHECK_THROWS_AS(parse_scenario("table T = [[1,2],[3]]\n"), ParseError);
  }
}

TEST_CASE("includes resolve relative to the including file") {
  auto d = temp_dir();
  std::filesystem::create_directories(d / "sub");
  write(d / "sub" / "defs.scn", "poly A = x0*x2\n");
  write(d / "main.scn", "scenario inc\nvars mu: a b c\nvars x: x0 x1 x2\ninclude sub/defs.scn\ncheck contains_line(A, A, A)\n");
  auto s = load_scenario(d / "main.scn");
  CHECK(s.parse("A") == s.parse("x0*x2"));
  CHECK(s.flattened.find("include") == std::string::npos);
  write(d / "loop.scn", "include loop.scn\n");
  CHECK_THROWS_AS(load_scenario(d / "loop.scn"), ParseError);
  CHECK_THROWS(load_scenario(d / "missing.scn"));
}

TEST_CASE("presets round-trip through dump-preset") {
  for (const auto& name : preset_names()) {
    if (name == "all") continue;
    CAPTURE(name);
    auto original = load_preset(name);
    auto again = parse_scenario(dump_preset(name));
    REQUIRE(original.checks.size() == again.checks.size());
    for (std::size_t i = 0; i < original.checks.size(); ++i) {
      CHECK(original.checks[i].text == again.checks[i].text);
      CHECK(original.checks[i].args == again.checks[i].args);
    }
    CHECK(original.charts.size() == again.charts.size());
    CHECK(original.defs.size() == again.defs.size());
  }
  CHECK_THROWS_AS(dump_preset("all"), DomainError);
}

TEST_CASE("unknown presets list the valid names") {
  try {
    run_preset("nonsense");
    FAIL("expected UnknownPresetError");
  } catch (const UnknownPresetError& e) {
    const std::string msg = e.what();
    for (const char* n : {"xspecial", "xsection", "xprime", "prop-special", "lattice-sec4", "all"})
      CHECK(msg.find(n) != std::string::npos);
  }
}

TEST_CASE("reports") {
  auto pass = run_text(kSmall);
  CHECK(pass.verdict() == Status::Pass);
  CHECK(exit_code(pass) == 0);

  std::string failing = kSmall;
  failing += "check contains_line(x0^2, B, C)\n";
  auto fail = run_text(failing);
  CHECK(fail.verdict() == Status::Fail);
  CHECK(exit_code(fail) == 1);
  // Failing checks come first in text mode.
  auto text = to_text(fail);
  CHECK(text.find("FAIL  contains_line(x0^2, B, C)") < text.find("PASS  contains_line(A, B, C)"));

  auto j = to_json(fail);
  CHECK(j["schema"] == 1);
  CHECK(j["version"] == tool_version());
  CHECK(j["scenario"] == "small");
  CHECK(j["verdict"] == "fail");
  REQUIRE(j["checks"].size() == 2);
  CHECK(j["checks"][0]["name"] == "contains_line(A, B, C)");
  CHECK(j["checks"][1]["status"] == "fail");

  Report inconclusive;
  inconclusive.checks.push_back({"a", Status::Pass, "", std::nullopt, 0});
  inconclusive.checks.push_back({"b", Status::Inconclusive, "", std::nullopt, 0});
  CHECK(exit_code(inconclusive) == 2);
  inconclusive.checks.push_back({"c", Status::Fail, "", std::nullopt, 0});
  CHECK(exit_code(inconclusive) == 1);
}

TEST_CASE("errors inside a check fail that check only") {
  std::string text = kSmall;
  text += "check contains_line(A, B)\ncheck no_such_check(A)\n";
  auto r = run_text(text);
  REQUIRE(r.checks.size() == 3);
  CHECK(r.checks[0].status == Status::Pass);
  CHECK(r.checks[1].status == Status::Fail);
  CHECK(r.checks[1].details.find("error:") == 0);
  CHECK(r.checks[2].details.find("unknown check") != std::string::npos);
}

TEST_CASE("reports are deterministic and order-stable across job counts") {
  auto s = load_preset("xspecial");
  RunOptions one, four;
  four.jobs = 4;
  auto a = to_json(run_scenario(s, one)), b = to_json(run_scenario(s, four));
  for (auto* j : {&a, &b})
    for (auto& c : (*j)["checks"]) c.erase("millis");
  CHECK(a.dump() == b.dump());
  CHECK(a["verdict"] == "pass");
}

TEST_CASE("running a preset by name") {
  auto r = run_preset("lattice-sec4");
  CHECK(r.checks.size() == 9);
  CHECK(r.verdict() == Status::Pass);
}
