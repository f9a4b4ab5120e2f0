#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "quadnet/linalg.hpp"

namespace quadnet {

/// Class in the Chow ring of P^a x P^b: Z[g1,g2]/(g1^(a+1), g2^(b+1)).
class ChowClass {
 public:
  ChowClass(int a, int b);
  static ChowClass one(int a, int b);
  static ChowClass g1(int a, int b);
  static ChowClass g2(int a, int b);
  /// d*g1 + e*g2
  static ChowClass linear(int a, int b, long d, long e);

  int a() const { return a_; }
  int b() const { return b_; }
  /// Coefficient of g1^i g2^j.
  mpz_class coefficient(int i, int j) const;
  void set(int i, int j, const mpz_class& c);
  const std::map<std::pair<int, int>, mpz_class>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Pure codimension, or -1 when mixed; zero reports -1.
  int codimension() const;

  ChowClass& operator+=(const ChowClass& o);
  friend ChowClass operator+(ChowClass x, const ChowClass& y) { return x += y; }
  bool operator==(const ChowClass& o) const = default;
  std::string to_string() const;

 private:
  void check_same(const ChowClass& o) const;

  int a_;
  int b_;
  std::map<std::pair<int, int>, mpz_class> terms_;
};

/// Truncated product. Throws MismatchError for different ambients.
ChowClass chow_mul(const ChowClass& u, const ChowClass& v);

/// Coefficient of the top class g1^a g2^b.
mpz_class degree(const ChowClass& u);

/// Product of (d_i g1 + e_i g2). Throws DomainError for an empty list.
ChowClass ci_class(int a, int b, const std::vector<std::pair<long, long>>& bidegrees);

/// Gram matrix on (g1^2, g1g2, g2^2) with invariants cached at construction.
struct GramLattice {
  std::vector<std::string> labels;
  ExactMatrix matrix;
  std::vector<mpz_class> elementary_divisors;
  std::size_t rank_mod2 = 0;
  std::vector<mpz_class> discriminant;
  mpz_class det;

  explicit GramLattice(ExactMatrix m, std::vector<std::string> labels = {"g1^2", "g1*g2", "g2^2"});
};

/// Entry (u,v) = degree(u * v * fourfold). Throws DomainError unless the
/// class has pure codimension dim - 4.
GramLattice gram_table(const ChowClass& fourfold);

struct TwoAdicReport {
  std::size_t rank_mod2_a = 0;
  std::size_t rank_mod2_b = 0;
  std::vector<mpz_class> discriminant_a;
  std::vector<mpz_class> discriminant_b;
  bool rank_differs = false;
  bool discriminant_differs = false;
  /// "inequivalent" or "indistinguishable by these invariants".
  std::string verdict;
  std::string context;
};

/// Compares mod-2 rank and discriminant group. Throws DomainError for a
/// singular lattice.
TwoAdicReport two_adic_compare(const GramLattice& a, const GramLattice& b);

}  // namespace quadnet
