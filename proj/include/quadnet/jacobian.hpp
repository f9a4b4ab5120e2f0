#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <variant>
#include <vector>

#include "quadnet/linalg.hpp"
#include "quadnet/net.hpp"
#include "quadnet/polynomial.hpp"

namespace quadnet {

/// dF/dmu_i (bidegree (0,2)) followed by dF/dx_j (bidegree (1,1)).
struct JacobianIdeal {
  std::vector<Polynomial> generators;
  std::vector<Bidegree> bidegrees;
};

JacobianIdeal jacobian_generators(const QuadricNet& net);

/// Column order of the ambient monomials. Pivots are taken leftmost first,
/// so the quotient basis consists of the trailing non-pivot monomials.
enum class ColumnOrder {
  Degrevlex,           // descending degrevlex, mu-block first
  AscendingDegrevlex,  // the opposite order
};

struct PieceOptions {
  /// Prime for the elimination; 0 means exact arithmetic over Q.
  std::uint64_t prime = 32003;
  ColumnOrder order = ColumnOrder::Degrevlex;
};

/// R_(a,b) = S_(a,b) / I_(a,b), with I_(a,b) spanned by m*g over generators
/// g and monomials m of complementary bidegree.
class GradedPiece {
 public:
  GradedPiece(const QuadricNet& net, int a, int b, PieceOptions options = {});

  Bidegree degree() const { return degree_; }
  std::uint64_t prime() const { return options_.prime; }
  const std::vector<Monomial>& ambient() const { return ambient_; }
  std::size_t span_rows() const { return span_rows_; }
  std::size_t rank() const;
  std::size_t dimension() const { return ambient_.size() - rank(); }
  /// Standard monomials (non-pivot columns) in column order.
  const std::vector<Monomial>& quotient_basis() const { return quotient_basis_; }

  /// Coordinates of f mod I_(a,b) in the quotient basis, over the piece's
  /// field. Throws DomainError if f is not of bidegree (a,b).
  std::vector<mpq_class> reduce(const Polynomial& f) const;

 private:
  using Echelon = std::variant<ModularEchelon, RationalEchelon>;

  Bidegree degree_;
  PieceOptions options_;
  VarTablePtr vars_;
  std::vector<Monomial> ambient_;
  std::map<Monomial, std::uint32_t> column_;
  std::size_t span_rows_ = 0;
  std::shared_ptr<Echelon> echelon_;
  std::vector<Monomial> quotient_basis_;
  std::vector<std::uint32_t> quotient_columns_;
};

/// True iff the candidates are independent modulo I_(a,b) and their count
/// equals dim R_(a,b). Throws DomainError if a candidate has another bidegree.
bool verify_basis(const QuadricNet& net, const std::vector<Polynomial>& candidates, int a, int b,
                  PieceOptions options = {});
bool verify_basis(const GradedPiece& piece, const std::vector<Polynomial>& candidates);

/// Matrix of v -> gamma*v from R_(1,2) to R_(3,4), in the quotient bases
/// (rows index R_(3,4), columns index R_(1,2)). Throws DomainError unless
/// gamma has bidegree (2,2).
ExactMatrix multiplication_map(const GradedPiece& source, const GradedPiece& target, const Polynomial& gamma);
ExactMatrix multiplication_map(const QuadricNet& net, const Polynomial& gamma, PieceOptions options = {});

struct PeriodResult {
  bool surjective = false;
  std::size_t rank = 0;
  std::size_t target_dimension = 0;
  std::size_t source_dimension = 0;
  std::uint64_t prime = 0;
};

PeriodResult period_surjective(const QuadricNet& net, const Polynomial& gamma, PieceOptions options = {});

struct HodgeReport {
  /// dims of R_(0,-2), R_(1,0), R_(2,2), R_(3,4)
  std::array<std::size_t, 4> dims{};
  std::array<std::size_t, 4> expected{0, 3, 37, 3};
  bool pass = false;
  std::uint64_t prime = 0;
};

HodgeReport hodge_check(const QuadricNet& net, PieceOptions options = {});

/// Exact dimension of R_(a,b) over Q for an integral net.
///
/// Upper bound: rank mod p never exceeds rank over Q, so dim over Q is at
/// most dim mod p. Lower bound: the kernel of the spanning-row matrix found
/// mod p is lifted p-adically to Q (see lifted_kernel) and checked exactly;
/// independent kernel vectors bound the dimension from below. `exact` is
/// false when no lift verified within `max_primes` primes.
struct DimensionCertificate {
  std::size_t dimension = 0;
  bool exact = false;
  std::vector<std::uint64_t> primes;
  std::vector<Monomial> basis;
};

DimensionCertificate certify_dimension(const QuadricNet& net, int a, int b, std::size_t max_primes = 12);

}  // namespace quadnet
