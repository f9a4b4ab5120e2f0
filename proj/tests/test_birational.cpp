#include "doctest.h"
#include "quadnet/birational.hpp"
#include "quadnet/error.hpp"
#include "quadnet/parser.hpp"
#include "quadnet/runner.hpp"

using namespace quadnet;

namespace {

VarTablePtr vars() {
  static auto v = make_var_table({"a", "b"}, {"x", "y", "z"});
  return v;
}

Polynomial P(const std::string& s) { return parse_polynomial(s, vars()); }

PolyMap xmap(const std::vector<std::string>& comps) {
  PolyMap m;
  for (const char* t : {"x", "y", "z"}) m.targets.push_back(vars()->index(t));
  for (const auto& c : comps) m.components.push_back(P(c));
  return m;
}

const ChartReport& find(const PropSpecialReport& r, const std::string& name) {
  for (const auto& c : r.charts)
    if (c.name == name) return c;
  throw std::runtime_error("no chart " + name);
}

}  // namespace

TEST_CASE("composition") {
  auto m = xmap({"x*z", "y*z", "z^2"});
  CHECK(compose(m, P("x*y - z^2")) == P("x*y*z^2 - z^4"));
  CHECK_THROWS_AS(compose(m, P("a*x")), DomainError);
  CHECK(division_residual(P("x*y*z^2 - z^4"), P("x*y - z^2")).is_zero());
  CHECK_FALSE(division_residual(P("x^2 + 1"), P("x*y - z^2")).is_zero());
}

TEST_CASE("map validation") {
  CHECK_THROWS_AS(xmap({"x", "y"}).validate(), DomainError);
  CHECK_THROWS_AS(xmap({"0", "0", "0"}).validate(), DomainError);
  auto dup = xmap({"x", "y", "z"});
  dup.targets[1] = dup.targets[0];
  CHECK_THROWS_AS(dup.validate(), DomainError);
}

TEST_CASE("maps into a target") {
  auto Y = P("x*y - z^2");
  auto ok = maps_into(Y, xmap({"x*z", "y*z", "z^2"}), {P("x*y - z^2"), P("x*y*z - z^3")});
  CHECK(ok.ok);
  REQUIRE(ok.quotients[0].has_value());
  CHECK(*ok.quotients[0] == P("z^2"));
  auto veronese = maps_into(Y, xmap({"x^2", "y^2", "x*y"}), {P("x*y - z^2")});
  CHECK(veronese.ok);
  CHECK(veronese.compositions[0].is_zero());
  auto bad = maps_into(Y, xmap({"x^2", "y^2", "x*y"}), {P("x - z")});
  CHECK_FALSE(bad.ok);
  CHECK(bad.witness.has_value());
}

TEST_CASE("indeterminacy loci") {
  auto m = xmap({"x*z", "y*z", "z^2"});
  auto r = indeterminacy_components(m, P("x*y - z^2"), {{"L1", {P("x"), P("z")}}, {"L2", {P("x"), P("y")}}});
  REQUIRE(r.size() == 2);
  CHECK(r[0].ok());
  CHECK(r[0].on_domain);
  CHECK_FALSE(r[1].on_domain);
  CHECK_FALSE(r[1].ok());
}

TEST_CASE("the nine charts of the special fourfold") {
  auto s = load_preset("prop-special");
  REQUIRE(s.charts.size() == 9);
  auto report = verify_prop_special(s.parse("Y"), s.map("phi"), {s.parse("B1"), s.parse("B2"), s.parse("B3")},
                                    s.loci, s.charts);
  CHECK(report.pass());
  CHECK(report.maps.ok);
  REQUIRE(report.maps.quotients[2].has_value());
  CHECK(*report.maps.quotients[2] == s.parse("l2"));
  for (const auto& c : report.charts) {
    CAPTURE(c.name);
    CHECK(c.pass());
  }
  CHECK(find(report, "U1").errata_applied.empty());
  CHECK(find(report, "U2").errata_applied.size() == 2);
  CHECK(find(report, "U3").errata_applied.size() == 1);
  CHECK(find(report, "U2a").equation_derived);
}

TEST_CASE("errata are used only when the printed data fails") {
  auto s = load_preset("prop-special");
  std::vector<ChartSpec> charts{s.chart("U1")};
  charts[0].errata.push_back(Erratum{Erratum::Field::Image, 0, s.parse("l1"), "unneeded"});
  auto r = verify_prop_special(s.parse("Y"), s.map("phi"), {s.parse("B1"), s.parse("B2"), s.parse("B3")}, {}, charts);
  CHECK(r.charts[0].pass());
  CHECK(r.charts[0].errata_applied.empty());

  // Without its errata U2's printed equation does not match the pullback.
  std::vector<ChartSpec> bare{s.chart("U2")};
  bare[0].errata.clear();
  auto b = verify_prop_special(s.parse("Y"), s.map("phi"), {s.parse("B1"), s.parse("B2"), s.parse("B3")}, {}, bare);
  CHECK_FALSE(b.charts[0].pass());
  CHECK_FALSE(b.charts[0].witnesses.empty());

  auto eff = effective_chart(s.chart("U2"));
  CHECK(eff.errata.empty());
  CHECK(*eff.equation != *s.chart("U2").equation);
}

TEST_CASE("a wrong image is caught") {
  auto s = load_preset("prop-special");
  std::vector<ChartSpec> charts{s.chart("U1")};
  charts[0].image[3] = s.parse("x3");
  auto r = verify_prop_special(s.parse("Y"), s.map("phi"), {s.parse("B1"), s.parse("B2"), s.parse("B3")}, {}, charts);
  CHECK_FALSE(r.charts[0].exceptional_image_matches);
  CHECK_FALSE(r.pass());
}
