#include "doctest.h"
#include "oracles.hpp"
#include "quadnet/error.hpp"
#include "quadnet/field.hpp"
#include "quadnet/parser.hpp"
#include "quadnet/polynomial.hpp"
#include "quadnet/var_table.hpp"

using namespace quadnet;

namespace {

VarTablePtr table() { return make_var_table({"l0", "l1", "l2"}, {"x0", "x1", "x2", "x3"}); }

Polynomial P(const std::string& s, const VarTablePtr& v, Field f = Field::rationals()) {
  return parse_polynomial(s, v, f);
}

}  // namespace

TEST_CASE("variable table indexes the mu-block first") {
  auto v = table();
  CHECK(v->size() == 7);
  CHECK(v->mu_count() == 3);
  CHECK(v->x_count() == 4);
  CHECK(v->index("x0") == 3);
  CHECK(v->is_mu(2));
  CHECK_FALSE(v->is_mu(3));
  CHECK_FALSE(v->find("y").has_value());
  CHECK_THROWS_AS(v->index("y"), DomainError);
  CHECK_THROWS(make_var_table({"a"}, {"a"}));
}

TEST_CASE("prime fields") {
  CHECK(is_prime(32003));
  CHECK(is_prime(65537));
  CHECK_FALSE(is_prime(65535));
  CHECK(next_prime(32768) == 32771);
  CHECK_THROWS_AS(Field::prime(100), DomainError);
  auto F = Field::prime(7);
  CHECK(F.normalize(-1) == 6);
  CHECK(F.normalize(mpq_class(1, 3)) == 5);
  CHECK(F.inv(3) == 5);
  CHECK_THROWS_AS(F.inv(0), DomainError);
  CHECK_THROWS_AS(F.normalize(mpq_class(1, 7)), DomainError);
  CHECK(Field::rationals().normalize(mpq_class(2, 4)) == mpq_class(1, 2));
}

TEST_CASE("degrevlex order") {
  // x > y > z: equal degree, smaller exponent in the last variable wins.
  CHECK(degrevlex_greater({0, 3, 0}, {1, 0, 2}));
  CHECK(degrevlex_greater({2, 0, 0}, {1, 1, 0}));
  CHECK(degrevlex_greater({1, 1, 0}, {0, 2, 0}));
  CHECK(degrevlex_greater({0, 0, 2}, {2, 0, 0}) == false);
  CHECK(degrevlex_greater({0, 0, 2}, {1, 1, 0}) == false);
  // Higher total degree wins.
  CHECK(degrevlex_greater({0, 0, 4}, {3, 0, 0}));
  auto v = table();
  auto f = P("x3^2 + l0*x0 + x0^2", v);
  CHECK(f.leading_monomial() == Monomial{1, 0, 0, 1, 0, 0, 0});
}

TEST_CASE("arithmetic") {
  auto v = table();
  CHECK(P("(x0 + x1)^2", v) == P("x0^2 + 2*x0*x1 + x1^2", v));
  CHECK(P("(x0 - x1)*(x0 + x1)", v) == P("x0^2 - x1^2", v));
  CHECK((P("x0", v) - P("x0", v)).is_zero());
  CHECK(P("2*x0/4", v) == P("x0", v).scaled(mpq_class(1, 2)));
  CHECK(P("x0^3*l1", v).total_degree() == 4);
  CHECK(P("x0^3*l1 + x2", v).degree_in(3) == 3);
  CHECK(P("3*x0 + 6", v).monic() == P("x0 + 2", v));
  auto F = Field::prime(5);
  CHECK(P("(x0 + 1)^5", v, F) == P("x0^5 + 1", v, F));
}

TEST_CASE("mixing tables or fields is rejected") {
  auto v = table();
  auto w = make_var_table({"a"}, {"b"});
  CHECK_THROWS_AS(P("x0", v) + P("b", w), MismatchError);
  CHECK_THROWS_AS(P("x0", v) * P("x0", v, Field::prime(7)), MismatchError);
  // Equal tables built separately are compatible.
  CHECK_NOTHROW(P("x0", v) + P("x0", table()));
}

TEST_CASE("partial derivatives and substitution") {
  auto v = table();
  auto f = P("l0*x0^2 + l1*x0*x1 - 5*x3", v);
  CHECK(f.partial("x0") == P("2*l0*x0 + l1*x1", v));
  CHECK(f.partial("l2").is_zero());
  CHECK(f.partial("x3") == P("-5", v));
  std::map<std::size_t, Polynomial> s{{v->index("x0"), P("x1 + x2", v)}, {v->index("x1"), P("x0", v)}};
  // Simultaneous, not sequential.
  CHECK(P("x0*x1", v).substitute(s) == P("x0*x1 + x0*x2", v));
  CHECK(P("x3", v).substitute(s) == P("x3", v));
}

TEST_CASE("bidegree") {
  auto v = table();
  auto info = P("l0*x0*x1 + l2*x3^2", v).bidegree_of();
  CHECK(info.kind == BidegreeInfo::Kind::Homogeneous);
  CHECK(info.degree == Bidegree{1, 2});
  CHECK(P("l0*x0 + x1", v).bidegree_of().kind == BidegreeInfo::Kind::Mixed);
  CHECK(Polynomial(v, Field::rationals()).bidegree_of().is(Bidegree{4, 4}));
  // C(a+2, 2) * C(b+3, 3) for 3 + 4 variables.
  CHECK(monomial_basis(2, 3, *v).size() == 6 * 20);
  CHECK(monomial_basis(0, 0, *v).size() == 1);
  CHECK(monomial_basis(-1, 2, *v).empty());
}

TEST_CASE("parser") {
  auto v = table();
  SUBCASE("round trip through the printer") {
    for (const char* s : {"x0", "-x0", "3*l0^2*x1 - x2/7 + 1", "(l0 - l1)*(x0 + x1)^3", "0", "-2/3"}) {
      auto f = P(s, v);
      CHECK(P(f.to_string(), v) == f);
    }
  }
  SUBCASE("undeclared variable names the variable") {
    try {
      P("x0 + y7", v);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("y7") != std::string::npos);
      CHECK(e.line() == 1);
      CHECK(e.column() == 6);
    }
  }
  SUBCASE("syntax errors carry positions") {
    CHECK_THROWS_AS(P("x0 +", v), ParseError);
    CHECK_THROWS_AS(P("(x0", v), ParseError);
    CHECK_THROWS_AS(P("x0^-1", v), ParseError);
    CHECK_THROWS_AS(P("x0/x1", v), ParseError);
    CHECK_THROWS_AS(P("x0/0", v), ParseError);
    try {
      parse_polynomial("x0 $", v, Field::rationals(), 5, 10);
    } catch (const ParseError& e) {
      CHECK(e.line() == 5);
      CHECK(e.column() == 14);
    }
  }
  SUBCASE("definitions and functions") {
    Definitions defs;
    defs.emplace("G", Definition{{}, P("x0 + x1", v)});
    defs.emplace("H", Definition{{v->index("l0"), v->index("l1")}, P("l0^2 - l1", v)});
    auto f = parse_polynomial("G^2 + H(x2, l2 + 1)", v, Field::rationals(), 1, 0, &defs);
    CHECK(f == P("(x0 + x1)^2 + x2^2 - l2 - 1", v));
    CHECK_THROWS_AS(parse_polynomial("H(x2)", v, Field::rationals(), 1, 0, &defs), ParseError);
  }
  SUBCASE("whitespace is insignificant") { CHECK(P(" x0 *\tx1 ^ 2 ", v) == P("x0*x1^2", v)); }
}

TEST_CASE("exact division agrees with the recursive strategy") {
  auto v = table();
  auto g = P("l0*x0 - x1^2 + 3", v);
  auto q = P("x2^3 - l1*x0 + 2", v);
  auto f = g * q;
  REQUIRE(exact_divide(f, g).has_value());
  CHECK(*exact_divide(f, g) == q);
  CHECK(*exact_divide_recursive(f, g) == q);
  auto h = f + P("x3", v);
  CHECK_FALSE(exact_divide(h, g).has_value());
  CHECK_FALSE(exact_divide_recursive(h, g).has_value());
  CHECK_THROWS_AS(exact_divide(f, Polynomial(v, Field::rationals())), DomainError);
}

TEST_CASE("scalar ratio") {
  auto v = table();
  auto b = P("x0 - 2*x1", v);
  CHECK(scalar_ratio(b.scaled(-3), b) == mpq_class(-3));
  CHECK_FALSE(scalar_ratio(b + P("x2", v), b).has_value());
  CHECK_FALSE(scalar_ratio(Polynomial(v, Field::rationals()), b).has_value());
}

TEST_CASE("reduction mod p and lifting") {
  auto v = table();
  auto f = P("x0/2 + 7*x1 - 1", v);
  auto r = f.reduce_mod(7);
  CHECK(r == P("4*x0 + 6", v, Field::prime(7)));
  CHECK(r.lift_to_rationals() == P("4*x0 + 6", v));
  CHECK_THROWS_AS(P("x0/7", v).reduce_mod(7), DomainError);
}

TEST_CASE("evaluation oracle agrees with arithmetic") {
  auto v = table();
  auto f = P("l0*x0^2 - 3*x1*x2 + 5", v), g = P("x3 - l2", v);
  std::vector<std::uint64_t> pt{2, 3, 5, 7, 11, 13, 17};
  const std::uint64_t p = 101;
  CHECK(oracle::eval_mod(f * g, pt, p) == oracle::eval_mod(f, pt, p) * oracle::eval_mod(g, pt, p) % p);
}
