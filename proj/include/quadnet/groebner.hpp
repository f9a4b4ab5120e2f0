#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quadnet/net.hpp"
#include "quadnet/polynomial.hpp"

namespace quadnet {

struct GroebnerStats {
  std::size_t pairs_considered = 0;
  std::size_t pairs_reduced = 0;
  std::size_t zero_reductions = 0;
  std::size_t max_degree = 0;
  /// Pairs dropped by a degree limit.
  std::size_t pairs_skipped = 0;
};

/// Reduced Groebner basis for degrevlex over the full variable list of the
/// generators' table. Generators are monic and sorted by increasing leading
/// monomial.
class GroebnerBasis {
 public:
  GroebnerBasis(VarTablePtr vars, Field field, std::vector<Polynomial> generators, GroebnerStats stats = {});

  const VarTablePtr& vars() const { return vars_; }
  const Field& field() const { return field_; }
  const std::vector<Polynomial>& generators() const { return gens_; }
  const GroebnerStats& stats() const { return stats_; }
  bool is_unit() const;

  /// Fully reduced normal form of f.
  Polynomial normal_form(const Polynomial& f) const;

 private:
  VarTablePtr vars_;
  Field field_;
  std::vector<Polynomial> gens_;
  GroebnerStats stats_;
};

/// Buchberger's algorithm with normal pair selection, Gebauer-Moeller pair
/// elimination and final inter-reduction. Over F_p coefficients are machine
/// words; over Q they are GMP rationals. Limited to 32 variables with
/// exponents below 128.
///
/// With degree_limit d > 0, S-pairs whose lcm has total degree above d are
/// dropped. For homogeneous generators the result then agrees with the full
/// basis in every degree <= d, which is enough to count standard monomials
/// up to d.
GroebnerBasis buchberger(const std::vector<Polynomial>& generators, unsigned degree_limit = 0);

/// Monomials of bidegree (a, b) divisible by no leading monomial of gb.
std::vector<Monomial> standard_monomials(const GroebnerBasis& gb, int a, int b);

/// True iff every S-polynomial of the basis reduces to zero.
bool satisfies_buchberger_criterion(const GroebnerBasis& gb);

bool ideal_member(const Polynomial& f, const GroebnerBasis& gb);

enum class Emptiness { Empty, Nonempty, Inconclusive };

struct EmptinessResult {
  Emptiness verdict = Emptiness::Inconclusive;
  /// Smallest k with v^k in the ideal, per listed variable (0 when none found).
  std::vector<unsigned> powers;
  /// A listed variable with no pure power among the leading monomials.
  std::optional<std::size_t> witness_variable;
};

/// Decides whether the homogeneous ideal has no zeros in the projective
/// space on `variables`: some v^k (k <= bound) must reduce to zero for every
/// listed v. If a variable has no pure power among the leading monomials the
/// ideal cannot contain one and the answer is Nonempty; if pure powers exist
/// but none reduces to zero within the bound the answer is Inconclusive.
EmptinessResult projective_empty(const GroebnerBasis& gb, const std::vector<std::size_t>& variables,
                                 unsigned bound = 32);

struct SmoothnessCertificate {
  enum class Status { CertifiedSmooth, SingularModP, Inconclusive };
  Status status = Status::Inconclusive;
  std::uint64_t prime = 0;
  std::vector<std::uint64_t> primes_tried;
  std::size_t basis_size = 0;
  GroebnerStats stats;
  std::vector<unsigned> powers;
  std::string witness;
};

std::string to_string(SmoothnessCertificate::Status s);

/// Generators of the singular locus: Q0, Q1, Q2 and the 56 maximal minors
/// of the 3x8 Jacobian matrix (dQ_i/dx_j).
std::vector<Polynomial> singular_locus_ideal(const QuadricNet& net);

/// Certifies smoothness of the complete intersection by showing the
/// singular-locus ideal mod p is projectively empty. A certified answer
/// implies smoothness over Q; the other outcomes prove nothing over Q.
/// Throws DomainError when p divides the content of some quadric.
SmoothnessCertificate smoothness_check(const QuadricNet& net, std::uint64_t p, unsigned power_bound = 32);

/// Tries each prime in turn (default 101, 32003, 65537) and stops at the
/// first certificate.
SmoothnessCertificate smoothness_check_with_retry(const QuadricNet& net,
                                                  const std::vector<std::uint64_t>& primes = {101, 32003, 65537},
                                                  unsigned power_bound = 32);

}  // namespace quadnet
