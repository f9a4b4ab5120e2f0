#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "quadnet/field.hpp"
#include "quadnet/var_table.hpp"

namespace quadnet {

/// Exponent vector, one entry per variable of the owning VarTable.
using Monomial = std::vector<std::uint32_t>;

/// Total degrees in the mu-block and x-block.
struct Bidegree {
  int a = 0;
  int b = 0;
  bool operator==(const Bidegree&) const = default;
};

/// Result of bidegree_of: homogeneous of one bidegree, mixed, or the zero
/// polynomial (which is homogeneous of every bidegree).
struct BidegreeInfo {
  enum class Kind { Homogeneous, Mixed, Any };
  Kind kind = Kind::Any;
  Bidegree degree;

  bool is(Bidegree d) const { return kind == Kind::Any || (kind == Kind::Homogeneous && degree == d); }
};

/// Degree reverse lexicographic order over the full variable list (mu-block
/// variables first). Returns true when a > b.
bool degrevlex_greater(const Monomial& a, const Monomial& b);

struct DegRevLexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const { return degrevlex_greater(a, b); }
};

unsigned total_degree(const Monomial& m);
Bidegree bidegree(const Monomial& m, const VarTable& vars);
bool divides(const Monomial& a, const Monomial& b);
Monomial monomial_product(const Monomial& a, const Monomial& b);
/// b / a; requires divides(a, b).
Monomial monomial_quotient(const Monomial& b, const Monomial& a);
Monomial monomial_lcm(const Monomial& a, const Monomial& b);

/// Sparse multivariate polynomial over Q or F_p. Terms are kept in
/// descending degrevlex order with no zero coefficients, so two equal
/// polynomials have identical term maps.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, mpq_class, DegRevLexGreater>;

  Polynomial(VarTablePtr vars, Field field);

  static Polynomial constant(VarTablePtr vars, Field field, const mpq_class& c);
  static Polynomial variable(VarTablePtr vars, Field field, std::size_t index);
  static Polynomial variable(VarTablePtr vars, Field field, std::string_view name);
  static Polynomial term(VarTablePtr vars, Field field, Monomial m, const mpq_class& c);

  const VarTablePtr& vars() const { return vars_; }
  const Field& field() const { return field_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;

  /// Coefficient of `m` (zero when absent).
  mpq_class coefficient(const Monomial& m) const;
  const Monomial& leading_monomial() const;
  const mpq_class& leading_coefficient() const;
  int total_degree() const;
  /// Highest exponent of variable `index` over all terms.
  std::uint32_t degree_in(std::size_t index) const;
  bool involves(std::size_t index) const { return degree_in(index) > 0; }

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Polynomial& other);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial operator-() const;
  Polynomial scaled(const mpq_class& c) const;
  Polynomial times_monomial(const Monomial& m, const mpq_class& c) const;
  Polynomial pow(unsigned e) const;
  /// Scales to leading coefficient one; zero stays zero.
  Polynomial monic() const;

  bool operator==(const Polynomial& other) const;

  /// Formal partial derivative with respect to variable `index`.
  Polynomial partial(std::size_t index) const;
  Polynomial partial(std::string_view name) const;

  /// Simultaneous substitution. Variables missing from `assignment` map to
  /// themselves. Every target must share this polynomial's table and field.
  Polynomial substitute(const std::map<std::size_t, Polynomial>& assignment) const;

  BidegreeInfo bidegree_of() const;

  /// Image over F_p; throws DomainError if a denominator vanishes mod p.
  Polynomial reduce_mod(std::uint64_t p) const;
  /// Reinterprets an F_p polynomial's residues as integers over Q.
  Polynomial lift_to_rationals() const;

  /// Text form in the parser's grammar, terms in descending order.
  std::string to_string() const;

 private:
  void check_compatible(const Polynomial& other) const;
  void add_term(const Monomial& m, const mpq_class& c);

  VarTablePtr vars_;
  Field field_;
  TermMap terms_;
};

std::ostream& operator<<(std::ostream& os, const Polynomial& p);

/// All monomials of bidegree (a, b) in descending degrevlex order.
/// Count is C(a+m-1, m-1) * C(b+n-1, n-1).
std::vector<Monomial> monomial_basis(int a, int b, const VarTable& vars);

/// c != 0 with a = c * b, or nullopt (also when either side is zero).
std::optional<mpq_class> scalar_ratio(const Polynomial& a, const Polynomial& b);

/// Returns q with f = q * g, or nullopt when g does not divide f. Uses
/// multivariate division by g's degrevlex leading term; since {g} is a
/// Groebner basis of (g), a nonzero remainder decides non-divisibility.
/// Throws DomainError when g is zero.
std::optional<Polynomial> exact_divide(const Polynomial& f, const Polynomial& g);

/// Independent divisibility test: treats both operands as univariate in
/// their last common variable and divides coefficient polynomials
/// recursively. Agrees with exact_divide; kept as a second strategy.
std::optional<Polynomial> exact_divide_recursive(const Polynomial& f, const Polynomial& g);

}  // namespace quadnet
