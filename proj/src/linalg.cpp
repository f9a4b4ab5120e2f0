#include "quadnet/linalg.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "quadnet/error.hpp"

namespace quadnet {

ExactMatrix ExactMatrix::integer(std::size_t rows, std::size_t cols) {
  return ExactMatrix(Ring::Integer, Field::rationals(), rows, cols);
}

ExactMatrix ExactMatrix::over(Field field, std::size_t rows, std::size_t cols) {
  return ExactMatrix(field.is_rational() ? Ring::Rational : Ring::Prime, field, rows, cols);
}

ExactMatrix ExactMatrix::integer(const std::vector<std::vector<long>>& rows) {
  std::size_t cols = rows.empty() ? 0 : rows.front().size();
  ExactMatrix m = integer(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw DomainError("ragged integer matrix");
    for (std::size_t c = 0; c < cols; ++c) m.set(r, c, rows[r][c]);
  }
  return m;
}

Field ExactMatrix::field() const {
  if (ring_ == Ring::Integer) throw DomainError("integer matrix has no field tag");
  return field_;
}

mpq_class ExactMatrix::normalize(const mpq_class& v) const {
  if (ring_ == Ring::Integer && v.get_den() != 1) throw DomainError("non-integer entry in an integer matrix");
  return ring_ == Ring::Prime ? field_.normalize(v) : v;
}

mpq_class ExactMatrix::get(std::size_t r, std::size_t c) const {
  const Row& row = rows_.at(r);
  auto it = std::lower_bound(row.begin(), row.end(), c, [](const Entry& e, std::size_t col) { return e.first < col; });
  if (it != row.end() && it->first == c) return it->second;
  return 0;
}

void ExactMatrix::set(std::size_t r, std::size_t c, const mpq_class& value) {
  if (c >= cols_) throw DomainError("column index out of range");
  Row& row = rows_.at(r);
  mpq_class v = normalize(value);
  auto it = std::lower_bound(row.begin(), row.end(), c, [](const Entry& e, std::size_t col) { return e.first < col; });
  if (it != row.end() && it->first == c) {
    if (v == 0)
      row.erase(it);
    else
      it->second = v;
  } else if (v != 0) {
    row.insert(it, Entry(static_cast<std::uint32_t>(c), v));
  }
}

void ExactMatrix::append_row(Row entries) {
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
  Row row;
  for (auto& e : entries) {
    if (e.first >= cols_) throw DomainError("column index out of range");
    if (!row.empty() && row.back().first == e.first)
      row.back().second += e.second;
    else
      row.push_back(std::move(e));
  }
  Row clean;
  for (auto& e : row) {
    mpq_class v = normalize(e.second);
    if (v != 0) clean.emplace_back(e.first, v);
  }
  rows_.push_back(std::move(clean));
}

std::size_t ExactMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.size();
  return n;
}

ExactMatrix ExactMatrix::with_ring(Ring ring, std::optional<Field> field) const {
  Field f = field.value_or(ring == Ring::Rational || ring == Ring::Integer ? Field::rationals() : field_);
  if (ring == Ring::Prime && !f.is_prime()) throw DomainError("prime ring requires a prime field");
  if (ring == Ring::Rational && !f.is_rational()) throw DomainError("rational ring requires QQ");
  ExactMatrix out(ring, f, 0, cols_);
  for (const auto& r : rows_) out.append_row(r);
  return out;
}

ExactMatrix ExactMatrix::transpose() const {
  ExactMatrix t(ring_, field_, cols_, rows_.size());
  for (std::size_t r = 0; r < rows_.size(); ++r)
    for (const auto& [c, v] : rows_[r]) t.rows_[c].emplace_back(static_cast<std::uint32_t>(r), v);
  return t;
}

bool ExactMatrix::is_symmetric() const { return rows() == cols() && *this == transpose(); }

std::vector<std::vector<mpq_class>> ExactMatrix::dense() const {
  std::vector<std::vector<mpq_class>> d(rows_.size(), std::vector<mpq_class>(cols_, 0));
  for (std::size_t r = 0; r < rows_.size(); ++r)
    for (const auto& [c, v] : rows_[r]) d[r][c] = v;
  return d;
}

bool ExactMatrix::operator==(const ExactMatrix& other) const {
  return ring_ == other.ring_ && field_ == other.field_ && cols_ == other.cols_ && rows_ == other.rows_;
}

ExactMatrix multiply(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.cols() != b.rows()) throw DomainError("matrix dimension mismatch");
  ExactMatrix out = a.ring() == ExactMatrix::Ring::Integer ? ExactMatrix::integer(0, b.cols())
                                                           : ExactMatrix::over(a.field(), 0, b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    std::map<std::uint32_t, mpq_class> acc;
    for (const auto& [k, av] : a.row(r))
      for (const auto& [c, bv] : b.row(k)) acc[c] += av * bv;
    ExactMatrix::Row row(acc.begin(), acc.end());
    out.append_row(std::move(row));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Modular echelon

ModularEchelon::ModularEchelon(std::uint64_t p, std::size_t cols)
    : p_(p), cols_(cols), pivot_of_col_(cols, -1) {
  if (p < 2 || p >= (1ULL << 32) || !is_prime(p)) throw DomainError("ModularEchelon needs a prime below 2^32");
  const std::uint64_t sq = (p - 1) * (p - 1);
  headroom_ = sq == 0 ? std::numeric_limits<std::uint64_t>::max() : (std::numeric_limits<std::uint64_t>::max() - p) / sq;
  if (headroom_ == 0) headroom_ = 1;
  free_list_.resize(cols);
  for (std::size_t c = 0; c < cols; ++c) free_list_[c] = static_cast<std::uint32_t>(c);
}

void ModularEchelon::normalize_row(std::size_t r) const {
  for (auto& v : rows_[r]) v %= p_;
  pending_[r] = 0;
}

std::vector<std::uint64_t> ModularEchelon::reduce_dense(const SparseRow& row, bool normalize_hits) const {
  std::vector<std::uint64_t> acc(cols_, 0);
  for (const auto& [c, v] : row) acc[c] = (acc[c] + v) % p_;
  // Pivot rows vanish on every other pivot column, so the multipliers are the
  // original entries at pivot columns and no cascade occurs.
  std::vector<std::pair<std::uint32_t, std::uint64_t>> hits;
  for (const auto& [c, v] : row) {
    std::int32_t pr = pivot_of_col_[c];
    if (pr >= 0 && acc[c] != 0) {
      hits.emplace_back(static_cast<std::uint32_t>(pr), acc[c]);
      acc[c] = 0;
    }
  }
  if (hits.empty()) return acc;
  std::uint64_t budget = 0;
  for (const auto& [pr, coeff] : hits) {
    const std::uint64_t f = p_ - coeff;
    const auto& prow = rows_[pr];
    if (pending_[pr] && normalize_hits) normalize_row(pr);
    if (pending_[pr]) {
      for (std::uint32_t c : free_list_) acc[c] += f * (prow[c] % p_);
    } else {
      for (std::uint32_t c : free_list_) acc[c] += f * prow[c];
    }
    if (++budget >= headroom_) {
      for (std::uint32_t c : free_list_) acc[c] %= p_;
      budget = 0;
    }
  }
  for (std::uint32_t c : free_list_) acc[c] %= p_;
  return acc;
}

std::vector<std::uint64_t> ModularEchelon::reduce(const SparseRow& row) const { return reduce_dense(row, false); }

bool ModularEchelon::add_row(const SparseRow& row) {
  std::vector<std::uint64_t> w = reduce_dense(row, true);
  std::int64_t lead = -1;
  for (std::uint32_t c : free_list_) {
    if (w[c] != 0) {
      lead = c;
      break;
    }
  }
  if (lead < 0) return false;
  const auto c = static_cast<std::uint32_t>(lead);

  // Normalize so the pivot entry is one.
  std::uint64_t inv = 1;
  {
    std::uint64_t b = w[c], e = p_ - 2, m = p_;
    while (e) {
      if (e & 1) inv = static_cast<std::uint64_t>(static_cast<unsigned __int128>(inv) * b % m);
      b = static_cast<std::uint64_t>(static_cast<unsigned __int128>(b) * b % m);
      e >>= 1;
    }
  }
  std::vector<std::uint32_t> support;
  for (std::uint32_t col : free_list_) {
    if (w[col] == 0) continue;
    w[col] = w[col] * inv % p_;
    if (col != c) support.push_back(col);
  }
  w[c] = 1;

  // Clear the new pivot column from existing pivot rows.
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    auto& prow = rows_[r];
    std::uint64_t a = prow[c] % p_;
    if (a == 0) {
      prow[c] = 0;
      continue;
    }
    if (pending_[r] + 1 >= headroom_) normalize_row(r);
    const std::uint64_t f = p_ - a;
    for (std::uint32_t col : support) prow[col] += f * w[col];
    prow[c] = 0;
    ++pending_[r];
  }

  pivot_of_col_[c] = static_cast<std::int32_t>(rows_.size());
  pivot_cols_.push_back(c);
  rows_.push_back(std::move(w));
  pending_.push_back(0);
  free_list_.erase(std::lower_bound(free_list_.begin(), free_list_.end(), c));
  return true;
}

std::vector<std::uint32_t> ModularEchelon::free_columns() const { return free_list_; }

// ---------------------------------------------------------------------------
// Rational echelon

RationalEchelon::RationalEchelon(std::size_t cols) : cols_(cols), pivot_of_col_(cols, -1) {}

std::vector<mpq_class> RationalEchelon::reduce(const SparseRow& row) const {
  std::vector<mpq_class> acc(cols_, 0);
  for (const auto& [c, v] : row) acc[c] += v;
  std::vector<std::pair<std::int32_t, mpq_class>> hits;
  for (const auto& [c, v] : row) {
    if (pivot_of_col_[c] >= 0 && acc[c] != 0) {
      hits.emplace_back(pivot_of_col_[c], acc[c]);
      acc[c] = 0;
    }
  }
  for (const auto& [pr, coeff] : hits) {
    const auto& prow = rows_[pr];
    for (std::size_t c = 0; c < cols_; ++c)
      if (pivot_of_col_[c] < 0 && prow[c] != 0) acc[c] -= coeff * prow[c];
  }
  return acc;
}

bool RationalEchelon::add_row(const SparseRow& row) {
  std::vector<mpq_class> w = reduce(row);
  std::size_t c = 0;
  while (c < cols_ && w[c] == 0) ++c;
  if (c == cols_) return false;
  mpq_class inv = 1 / w[c];
  for (auto& v : w)
    if (v != 0) v *= inv;
  for (auto& prow : rows_) {
    if (prow[c] == 0) continue;
    mpq_class a = prow[c];
    for (std::size_t k = 0; k < cols_; ++k)
      if (w[k] != 0) prow[k] -= a * w[k];
  }
  pivot_of_col_[c] = static_cast<std::int32_t>(rows_.size());
  pivot_cols_.push_back(static_cast<std::uint32_t>(c));
  rows_.push_back(std::move(w));
  return true;
}

std::vector<std::uint32_t> RationalEchelon::free_columns() const {
  std::vector<std::uint32_t> out;
  for (std::size_t c = 0; c < cols_; ++c)
    if (pivot_of_col_[c] < 0) out.push_back(static_cast<std::uint32_t>(c));
  return out;
}

// ---------------------------------------------------------------------------
// Rank and kernel

std::vector<std::uint64_t> certificate_primes(std::size_t count) {
  std::mt19937_64 rng(0x5eed2adcULL);
  std::uniform_int_distribution<std::uint64_t> dist((1ULL << 30) + 1, (1ULL << 31) - 1);
  std::vector<std::uint64_t> out;
  while (out.size() < count) {
    std::uint64_t p = next_prime(dist(rng));
    if (p < (1ULL << 31) && std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  }
  return out;
}

std::size_t rank_mod(const ExactMatrix& m, std::uint64_t p) {
  if (m.ring() == ExactMatrix::Ring::Prime && m.field().characteristic() != p)
    throw MismatchError("matrix is over " + m.field().to_string());
  Field f = Field::prime(p);
  // Eliminate along the shorter side.
  const ExactMatrix& src = m;
  ModularEchelon ech(p, src.cols());
  for (std::size_t r = 0; r < src.rows(); ++r) {
    ModularEchelon::SparseRow row;
    row.reserve(src.row(r).size());
    for (const auto& [c, v] : src.row(r)) {
      std::uint64_t res = f.residue(v);
      if (res) row.emplace_back(c, res);
    }
    ech.add_row(row);
    if (ech.rank() == src.cols()) break;
  }
  return ech.rank();
}

namespace {

std::size_t rank_rational(const ExactMatrix& m) {
  RationalEchelon ech(m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    RationalEchelon::SparseRow row(m.row(r).begin(), m.row(r).end());
    ech.add_row(row);
    if (ech.rank() == m.cols()) break;
  }
  return ech.rank();
}

// Dense reduced row echelon form over the matrix field; returns pivot columns.
std::vector<std::size_t> rref(std::vector<std::vector<mpq_class>>& a, const Field& k) {
  std::vector<std::size_t> pivots;
  std::size_t rows = a.size();
  std::size_t cols = rows ? a[0].size() : 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t sel = rows;
    for (std::size_t i = r; i < rows; ++i) {
      if (a[i][c] != 0) {
        sel = i;
        break;
      }
    }
    if (sel == rows) continue;
    std::swap(a[r], a[sel]);
    mpq_class inv = k.inv(a[r][c]);
    for (auto& v : a[r]) v = k.mul(v, inv);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      mpq_class f = a[i][c];
      for (std::size_t j = 0; j < cols; ++j)
        if (a[r][j] != 0) a[i][j] = k.sub(a[i][j], k.mul(f, a[r][j]));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

RankResult rank(const ExactMatrix& m, const RankOptions& options) {
  RankResult result;
  switch (m.ring()) {
    case ExactMatrix::Ring::Integer:
      throw DomainError("rank of an integer matrix needs a field tag (use with_ring)");
    case ExactMatrix::Ring::Prime: {
      std::uint64_t p = m.field().characteristic();
      if (p < (1ULL << 32)) {
        result.rank = rank_mod(m, p);
      } else {
        auto d = m.dense();
        result.rank = rref(d, m.field()).size();
      }
      return result;
    }
    case ExactMatrix::Ring::Rational:
      break;
  }
  if (options.exact || m.rows() * m.cols() <= options.modular_threshold) {
    result.rank = rank_rational(m);
    return result;
  }
  result.modular_certificate = true;
  result.primes = certificate_primes(2);
  for (std::uint64_t p : result.primes) result.ranks_mod_p.push_back(rank_mod(m, p));
  result.rank = *std::max_element(result.ranks_mod_p.begin(), result.ranks_mod_p.end());
  result.primes_agree = result.ranks_mod_p[0] == result.ranks_mod_p[1];
  return result;
}

std::vector<std::vector<mpq_class>> kernel_basis(const ExactMatrix& m) {
  Field k = m.field();
  auto a = m.dense();
  auto pivots = rref(a, k);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<mpq_class>> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<mpq_class> v(m.cols(), 0);
    v[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = k.normalize(-a[i][f]);
    basis.push_back(std::move(v));
  }
  return basis;
}

// ---------------------------------------------------------------------------
// Smith normal form

namespace {

using IntMat = std::vector<std::vector<mpz_class>>;

IntMat identity(std::size_t n) {
  IntMat id(n, std::vector<mpz_class>(n, 0));
  for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
  return id;
}

IntMat mat_mul(const IntMat& a, const IntMat& b) {
  std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  IntMat out(n, std::vector<mpz_class>(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < k; ++t)
      if (a[i][t] != 0)
        for (std::size_t j = 0; j < m; ++j) out[i][j] += a[i][t] * b[t][j];
  return out;
}

mpz_class det_bareiss(IntMat a) {
  std::size_t n = a.size();
  if (n == 0) return 1;
  mpz_class sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t s = k + 1;
      while (s < n && a[s][k] == 0) ++s;
      if (s == n) return 0;
      std::swap(a[k], a[s]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

IntMat to_int(const ExactMatrix& m) {
  if (m.ring() != ExactMatrix::Ring::Integer) throw DomainError("integer matrix expected");
  IntMat a(m.rows(), std::vector<mpz_class>(m.cols(), 0));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (const auto& [c, v] : m.row(r)) a[r][c] = v.get_num();
  return a;
}

}  // namespace

mpz_class determinant(const ExactMatrix& m) {
  if (m.rows() != m.cols()) throw DomainError("determinant of a non-square matrix");
  return det_bareiss(to_int(m));
}

SmithForm smith_normal_form(const ExactMatrix& m) {
  IntMat a = to_int(m);
  const std::size_t rows = m.rows(), cols = m.cols();
  IntMat U = identity(rows), V = identity(cols);

  auto swap_rows = [&](std::size_t i, std::size_t j) {
    std::swap(a[i], a[j]);
    std::swap(U[i], U[j]);
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    for (auto& r : a) std::swap(r[i], r[j]);
    for (auto& r : V) std::swap(r[i], r[j]);
  };
  // row_i -= q * row_j
  auto row_axpy = [&](std::size_t i, std::size_t j, const mpz_class& q) {
    for (std::size_t c = 0; c < cols; ++c) a[i][c] -= q * a[j][c];
    for (std::size_t c = 0; c < rows; ++c) U[i][c] -= q * U[j][c];
  };
  auto col_axpy = [&](std::size_t i, std::size_t j, const mpz_class& q) {
    for (std::size_t r = 0; r < rows; ++r) a[r][i] -= q * a[r][j];
    for (std::size_t r = 0; r < cols; ++r) V[r][i] -= q * V[r][j];
  };

  const std::size_t n = std::min(rows, cols);
  for (std::size_t t = 0; t < n; ++t) {
    for (;;) {
      // Smallest nonzero entry of the trailing block becomes the pivot.
      std::size_t pi = rows, pj = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (a[i][j] != 0 && (pi == rows || abs(a[i][j]) < abs(a[pi][pj]))) {
            pi = i;
            pj = j;
          }
      if (pi == rows) break;
      if (pi != t) swap_rows(t, pi);
      if (pj != t) swap_cols(t, pj);

      bool dirty = false;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
        row_axpy(i, t, q);
        if (a[i][t] != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
        col_axpy(j, t, q);
        if (a[t][j] != 0) dirty = true;
      }
      if (dirty) continue;

      // Enforce d_t | every remaining entry.
      bool fixed = true;
      for (std::size_t i = t + 1; i < rows && fixed; ++i) {
        for (std::size_t j = t + 1; j < cols; ++j) {
          if (!mpz_divisible_p(a[i][j].get_mpz_t(), a[t][t].get_mpz_t())) {
            row_axpy(t, i, -1);
            fixed = false;
            break;
          }
        }
      }
      if (fixed) break;
    }
    if (a[t][t] < 0) {
      for (auto& v : a[t]) v = -v;
      for (auto& v : U[t]) v = -v;
    }
  }

  SmithForm sf;
  for (std::size_t i = 0; i < n; ++i) sf.divisors.push_back(a[i][i]);
  sf.D = a;
  sf.U = U;
  sf.V = V;

  // Postconditions.
  IntMat check = mat_mul(mat_mul(U, to_int(m)), V);
  if (check != a) throw Error("Smith normal form postcondition U*M*V = D failed");
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (i != j && a[i][j] != 0) throw Error("Smith normal form is not diagonal");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const mpz_class& d = sf.divisors[i];
    const mpz_class& e = sf.divisors[i + 1];
    bool ok = d == 0 ? e == 0 : mpz_divisible_p(e.get_mpz_t(), d.get_mpz_t()) != 0;
    if (!ok) throw Error("Smith normal form divisibility chain violated");
  }
  if (abs(det_bareiss(U)) != 1 || abs(det_bareiss(V)) != 1) throw Error("Smith transforms are not unimodular");
  return sf;
}

std::vector<mpz_class> discriminant_group(const ExactMatrix& gram) {
  if (gram.rows() != gram.cols()) throw DomainError("Gram matrix must be square");
  SmithForm sf = smith_normal_form(gram);
  std::vector<mpz_class> out;
  for (const auto& d : sf.divisors) {
    if (d == 0) throw DomainError("singular Gram matrix");
    if (d > 1) out.push_back(d);
  }
  return out;
}

std::string format_group(const std::vector<mpz_class>& divisors) {
  if (divisors.empty()) return "0";
  std::ostringstream os;
  std::size_t i = 0;
  bool first = true;
  while (i < divisors.size()) {
    std::size_t j = i;
    while (j < divisors.size() && divisors[j] == divisors[i]) ++j;
    if (!first) os << " + ";
    first = false;
    if (j - i > 1)
      os << "(Z/" << divisors[i].get_str() << ")^" << (j - i);
    else
      os << "Z/" << divisors[i].get_str();
    i = j;
  }
  return os.str();
}

}  // namespace quadnet
