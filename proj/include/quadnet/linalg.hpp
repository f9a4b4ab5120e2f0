#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "quadnet/field.hpp"

namespace quadnet {

/// Sparse row-major matrix over Z, Q or F_p. Each row holds (column, value)
/// pairs sorted by column with no zeros.
class ExactMatrix {
 public:
  enum class Ring { Integer, Rational, Prime };
  using Entry = std::pair<std::uint32_t, mpq_class>;
  using Row = std::vector<Entry>;

  static ExactMatrix integer(std::size_t rows, std::size_t cols);
  static ExactMatrix over(Field field, std::size_t rows, std::size_t cols);
  /// Integer matrix from nested braces, e.g. {{0,0,2},{0,2,5},{2,5,4}}.
  static ExactMatrix integer(const std::vector<std::vector<long>>& rows);

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  Ring ring() const { return ring_; }
  /// Field of a Rational/Prime matrix; throws DomainError for Integer.
  Field field() const;

  mpq_class get(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, const mpq_class& value);
  const Row& row(std::size_t r) const { return rows_.at(r); }
  /// Appends a row given as unsorted (column, value) pairs; duplicates add up.
  void append_row(Row entries);
  std::size_t nonzeros() const;

  /// Same entries viewed over another ring (values normalized; Prime
  /// requires integral or p-invertible entries).
  ExactMatrix with_ring(Ring ring, std::optional<Field> field = std::nullopt) const;
  ExactMatrix transpose() const;
  bool is_symmetric() const;

  std::vector<std::vector<mpq_class>> dense() const;
  bool operator==(const ExactMatrix& other) const;

 private:
  ExactMatrix(Ring ring, Field field, std::size_t rows, std::size_t cols)
      : ring_(ring), field_(field), rows_(rows), cols_(cols) {}
  mpq_class normalize(const mpq_class& v) const;

  Ring ring_;
  Field field_;
  std::vector<Row> rows_;
  std::size_t cols_;
};

/// Multiplies two matrices exactly; the result takes the left operand's ring.
ExactMatrix multiply(const ExactMatrix& a, const ExactMatrix& b);

struct RankOptions {
  /// Force elimination over Q regardless of size.
  bool exact = false;
  /// Rational matrices with rows*cols above this use the modular certificate.
  std::size_t modular_threshold = 250'000;
};

struct RankResult {
  std::size_t rank = 0;
  /// True when the rank of a rational matrix was obtained mod two primes.
  bool modular_certificate = false;
  std::vector<std::uint64_t> primes;
  std::vector<std::size_t> ranks_mod_p;
  /// Ranks at the certificate primes coincide. Each is a lower bound for the
  /// rank over Q.
  bool primes_agree = true;
};

/// Exact rank. Integer matrices must first be given a field with with_ring;
/// passing one throws DomainError.
RankResult rank(const ExactMatrix& m, const RankOptions& options = {});
std::size_t rank_mod(const ExactMatrix& m, std::uint64_t p);

/// Basis of the right kernel over the matrix field.
std::vector<std::vector<mpq_class>> kernel_basis(const ExactMatrix& m);

/// Deterministic primes in (2^30, 2^31) used for modular certificates.
std::vector<std::uint64_t> certificate_primes(std::size_t count);

/// Sparse row of an integer matrix: (column, value).
using IntegerRow = std::vector<std::pair<std::uint32_t, std::int64_t>>;

struct LiftedKernel {
  std::size_t rank_mod_p = 0;
  /// Non-pivot columns of the echelon form mod p.
  std::vector<std::uint32_t> free_columns;
  /// One vector per free column f: y[f] = 1, zero on the other free columns.
  std::vector<std::vector<mpq_class>> vectors;
  /// Every vector satisfies A y = 0 over Q, hence rank over Q == rank_mod_p.
  bool verified = false;
  std::size_t lift_steps = 0;
};

/// Kernel of an integer matrix over Q by p-adic lifting (Dixon): the pivot
/// block is factored once mod p and the solution digits are lifted until
/// rational reconstruction yields vectors that annihilate every row. Fails
/// (verified = false) for an unlucky prime or when `max_steps` (0: the
/// Hadamard bound) is exhausted. Requires p < 2^31.
LiftedKernel lifted_kernel(const std::vector<IntegerRow>& rows, std::size_t cols, std::uint64_t p,
                           std::size_t max_steps = 0);

/// Incremental reduced row echelon form over F_p (p < 2^32), for tall
/// sparse inputs. Pivot rows are stored densely and kept fully reduced, so
/// the pivot set is the set of leading columns of the row space (leftmost
/// column first) independent of insertion order. Entries are accumulated
/// lazily in 64-bit words and reduced mod p only when the headroom runs out.
class ModularEchelon {
 public:
  using SparseRow = std::vector<std::pair<std::uint32_t, std::uint64_t>>;

  ModularEchelon(std::uint64_t p, std::size_t cols);

  std::uint64_t prime() const { return p_; }
  std::size_t cols() const { return cols_; }
  std::size_t rank() const { return pivot_cols_.size(); }

  /// Inserts a row (entries already reduced mod p, any column order).
  /// Returns true if it was independent of the rows seen so far.
  bool add_row(const SparseRow& row);
  /// Reduces `row` against the pivots. The result vanishes on every pivot
  /// column; it is zero iff the row lies in the span.
  std::vector<std::uint64_t> reduce(const SparseRow& row) const;

  bool is_pivot(std::size_t col) const { return pivot_of_col_[col] >= 0; }
  /// Non-pivot columns in increasing order.
  std::vector<std::uint32_t> free_columns() const;

 private:
  std::vector<std::uint64_t> reduce_dense(const SparseRow& row, bool normalize_hits) const;
  void normalize_row(std::size_t r) const;

  std::uint64_t p_;
  std::size_t cols_;
  std::uint64_t headroom_;
  mutable std::vector<std::vector<std::uint64_t>> rows_;
  mutable std::vector<std::uint64_t> pending_;
  std::vector<std::int32_t> pivot_of_col_;
  std::vector<std::uint32_t> pivot_cols_;
  std::vector<std::uint32_t> free_list_;
};

/// Incremental reduced row echelon form over Q with the same contract as
/// ModularEchelon. Dense rational rows; intended for moderate sizes.
class RationalEchelon {
 public:
  using SparseRow = std::vector<std::pair<std::uint32_t, mpq_class>>;

  explicit RationalEchelon(std::size_t cols);

  std::size_t cols() const { return cols_; }
  std::size_t rank() const { return pivot_cols_.size(); }
  bool add_row(const SparseRow& row);
  std::vector<mpq_class> reduce(const SparseRow& row) const;
  bool is_pivot(std::size_t col) const { return pivot_of_col_[col] >= 0; }
  std::vector<std::uint32_t> free_columns() const;

 private:
  std::size_t cols_;
  std::vector<std::vector<mpq_class>> rows_;
  std::vector<std::int32_t> pivot_of_col_;
  std::vector<std::uint32_t> pivot_cols_;
};

/// Integer matrix with unimodular transforms: U * M * V = D, D diagonal with
/// nonnegative entries d_1 | d_2 | ... (zeros last).
struct SmithForm {
  std::vector<mpz_class> divisors;
  std::vector<std::vector<mpz_class>> U;
  std::vector<std::vector<mpz_class>> V;
  std::vector<std::vector<mpz_class>> D;
};

/// Smith normal form by gcd-pivot reduction with transform accumulation.
/// The postcondition U*M*V = D and the divisibility chain are verified
/// before returning; a violation throws Error.
SmithForm smith_normal_form(const ExactMatrix& m);

/// Invariant factors greater than one of coker(G), ascending. Throws
/// DomainError for singular or non-integer input.
std::vector<mpz_class> discriminant_group(const ExactMatrix& gram);

mpz_class determinant(const ExactMatrix& m);

/// Human-readable group, e.g. "(Z/2)^3", "Z/8", "0".
std::string format_group(const std::vector<mpz_class>& divisors);

}  // namespace quadnet
