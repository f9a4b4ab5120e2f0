#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "quadnet/bundle.hpp"
#include "quadnet/error.hpp"
#include "quadnet/groebner.hpp"
#include "quadnet/parser.hpp"

using namespace quadnet;

namespace {

VarTablePtr vars() {
  static auto v = make_var_table({"l0", "l1", "l2"}, {"x0", "x1", "x2", "x3", "x4", "x5", "x6", "x7"});
  return v;
}

Polynomial P(const std::string& s) { return parse_polynomial(s, vars()); }

QuadricNet special() {
  return QuadricNet({P("-x0*x5 + x3^2 + x4*x6 - 2*x5^2"), P("x0*x5 + x1*x4 + x2^2 - 2*x5^2"),
                     P("x0*x7 - x1*x6 + x5^2 + x7^2")});
}

QuadricNet with_section() {
  return QuadricNet(
      {P("x0*(x3 + x5 + 2*x6 + 3*x7) + x1*(-x5 + 5*x6 + 2*x7) - x2*x3 - x2*x4 + x2*x5 + x3^2 - x4*x6 + x5^2 + x6^2 + "
         "x7^2"),
       P("x0*(-x2 + 3*x5 + 7*x6 + 11*x7) + x1*(x4 + 9*x5 + 4*x6 + x7) + x2^2 - x2*x3 + 2*x3*x6 + x4^2 + 3*x4*x7 + "
         "2*x5^2 + 3*x6^2 + 5*x7^2"),
       P("x0*(11*x5 + 13*x6 + 8*x7) + x1*(-x3 + 6*x5 + 7*x6 + 3*x7) + x2^2 + 5*x2*x7 - x3*x4 + 9*x3*x5 + 13*x5^2 + "
         "4*x6^2 + 11*x7^2")});
}

const char* kF = "(l0^2 + l1^2 + l2^2 - 2*(l0*l1 + l0*l2 + l1*l2))";

}  // namespace

TEST_CASE("line containment and decomposition") {
  CHECK(contains_standard_line(special()));
  CHECK_FALSE(contains_standard_line(QuadricNet({P("x0^2"), P("x2^2"), P("x3^2")})));
  CHECK_FALSE(contains_standard_line(QuadricNet({P("x2^2"), P("x0*x1"), P("x3^2")})));
  auto d = decompose_along_line(P("x0*x5 + x1*x4 + x2^2 - 2*x5^2"));
  CHECK(d.L == P("x5"));
  CHECK(d.M == P("x4"));
  CHECK(d.q == P("x2^2 - 2*x5^2"));
  CHECK_THROWS_AS(decompose_along_line(P("x1^2 + x2^2")), DomainError);
  CHECK_THROWS_AS(decompose_along_line(P("l0*x2")), DomainError);
}

TEST_CASE("bundle system of the singular net") {
  auto s = bundle_system(special());
  // Display order up to the sign of e1.
  CHECK(s.e1 == P("-(l0 - l1)*x5 + l2*x7"));
  CHECK(s.e2 == P("l1*x4 - l2*x6"));
  CHECK(s.e3 == P("l1*x2^2 + l0*x3^2 + l0*x4*x6 + (l2 - 2*l0 - 2*l1)*x5^2 + l2*x7^2"));
  CHECK(s.to_text().find("poly e1 = ") == 0);
}

TEST_CASE("elimination to the (2,2) form") {
  auto s = bundle_system(special());
  auto el = eliminate_to_22(s);
  CHECK(el.result == P(std::string("l1*l2*x2^2 + l0*l2*x3^2 + l0*l1*x4^2 + ") + kF + "*x5^2"));
  // denominator*e3 - content*result lies in (e1, e2).
  auto gb = buchberger({s.e1, s.e2});
  CHECK(ideal_member(el.denominator * s.e3 - el.content * el.result, gb));
  CHECK_FALSE(ideal_member(s.e3, gb));
  CHECK_THROWS_AS(eliminate_to_22(bundle_system(with_section())), DomainError);
}

TEST_CASE("discriminant octic") {
  auto s = bundle_system(special());
  auto d = discriminant_octic(s);
  CHECK(d.bidegree_of().degree == Bidegree{8, 0});
  CHECK(scalar_ratio(d, P(std::string("l0^2*l1^2*l2^2*") + kF)).has_value());

  // Oracle: the bordered 8x8 matrix built from the net at rational points.
  auto net = with_section();
  auto oct = discriminant_octic(bundle_system(net));
  std::mt19937_64 rng(7);
  std::optional<mpq_class> ratio;
  for (int trial = 0; trial < 4; ++trial) {
    std::vector<mpq_class> lam{mpq_class(long(rng() % 19) - 9), mpq_class(long(rng() % 19) - 9),
                               mpq_class(long(rng() % 19) - 9)};
    std::vector<std::vector<mpq_class>> m(8, std::vector<mpq_class>(8, 0));
    auto coeff = [&](const Polynomial& q, std::size_t a, std::size_t b) {
      Monomial mono(vars()->size(), 0);
      ++mono[3 + a];
      ++mono[3 + b];
      return q.coefficient(mono);
    };
    for (int i = 0; i < 3; ++i) {
      const auto& q = net.quadric(i);
      for (std::size_t a = 0; a < 6; ++a) {
        for (std::size_t b = 0; b < 6; ++b)
          m[a][b] += lam[i] * (a == b ? 2 * coeff(q, 2 + a, 2 + a) : coeff(q, 2 + a, 2 + b));
        m[6][a] += lam[i] * coeff(q, 0, 2 + a);
        m[7][a] += lam[i] * coeff(q, 1, 2 + a);
      }
    }
    for (std::size_t a = 0; a < 6; ++a) {
      m[a][6] = m[6][a];
      m[a][7] = m[7][a];
    }
    std::vector<mpq_class> pt(vars()->size(), 0);
    for (int i = 0; i < 3; ++i) pt[i] = lam[i];
    const mpq_class want = oracle::det(m), got = oracle::eval_q(oct, pt);
    if (want == 0) {
      CHECK(got == 0);
      continue;
    }
    if (!ratio) ratio = got / want;
    CHECK(got / want == *ratio);
  }
  CHECK(ratio.has_value());
}

TEST_CASE("rational section") {
  auto s = bundle_system(with_section());
  auto r = verify_section(s, {P("l0"), P("l1"), P("l2"), P("0"), P("0"), P("0")});
  CHECK(r.ok);
  REQUIRE(r.residuals.size() == 3);
  for (const auto& e : r.residuals) CHECK(e.is_zero());
  auto bad = verify_section(s, {P("l0"), P("l1"), P("l2"), P("l0"), P("0"), P("0")});
  CHECK_FALSE(bad.ok);
  CHECK_THROWS_AS(verify_section(s, {P("l0")}), DomainError);
  CHECK_THROWS_AS(verify_section(s, std::vector<Polynomial>(6, P("0"))), DomainError);
}

TEST_CASE("polynomial determinant") {
  std::vector<std::vector<Polynomial>> m{{P("l0"), P("l1")}, {P("l1"), P("l2")}};
  CHECK(polynomial_determinant(m) == P("l0*l2 - l1^2"));
}
