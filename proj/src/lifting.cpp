#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "quadnet/error.hpp"
#include "quadnet/linalg.hpp"

namespace quadnet {

namespace {

std::uint64_t residue(std::int64_t v, std::uint64_t p) {
  const std::int64_t r = v % static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(p) : r);
}

std::uint64_t inverse_mod(std::uint64_t x, std::uint64_t p) {
  std::uint64_t r = 1, e = p - 2, b = x % p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

// How many products (p-1)^2 fit on top of a value below p without overflow.
std::uint64_t headroom(std::uint64_t p) {
  const std::uint64_t sq = (p - 1) * (p - 1);
  return sq == 0 ? std::numeric_limits<std::uint64_t>::max() : (std::numeric_limits<std::uint64_t>::max() - p) / sq;
}

// PA = LU mod p for a dense square matrix, kept as sparse factors.
class ModularLU {
 public:
  static std::optional<ModularLU> factor(std::vector<std::uint64_t> a, std::size_t n, std::uint64_t p) {
    ModularLU lu;
    lu.p_ = p;
    lu.n_ = n;
    lu.room_ = headroom(p);
    lu.perm_.resize(n);
    for (std::size_t i = 0; i < n; ++i) lu.perm_[i] = static_cast<std::uint32_t>(i);
    std::vector<std::uint64_t> pending(n, 0);
    std::vector<std::uint32_t> nz;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t piv = n;
      for (std::size_t i = k; i < n; ++i) {
        auto& v = a[i * n + k];
        v %= p;
        if (v && piv == n) piv = i;
      }
      if (piv == n) return std::nullopt;
      if (piv != k) {
        std::swap_ranges(a.begin() + piv * n, a.begin() + (piv + 1) * n, a.begin() + k * n);
        std::swap(lu.perm_[piv], lu.perm_[k]);
        std::swap(pending[piv], pending[k]);
      }
      std::uint64_t* rk = &a[k * n];
      nz.clear();
      for (std::size_t j = k + 1; j < n; ++j) {
        rk[j] %= p;
        if (rk[j]) nz.push_back(static_cast<std::uint32_t>(j));
      }
      const std::uint64_t inv = inverse_mod(rk[k], p);
      for (std::size_t i = k + 1; i < n; ++i) {
        std::uint64_t* ri = &a[i * n];
        if (!ri[k]) continue;
        const std::uint64_t f = ri[k] * inv % p;
        ri[k] = f;
        if (nz.empty()) continue;
        if (pending[i] == lu.room_) {
          for (std::size_t j = k + 1; j < n; ++j) ri[j] %= p;
          pending[i] = 0;
        }
        ++pending[i];
        const std::uint64_t nf = p - f;
        for (std::uint32_t j : nz) ri[j] += nf * rk[j];
      }
    }
    lu.lstart_.push_back(0);
    lu.ustart_.push_back(0);
    for (std::size_t k = 0; k < n; ++k) {
      const std::uint64_t* rk = &a[k * n];
      for (std::size_t j = 0; j < k; ++j)
        if (rk[j]) lu.lower_.emplace_back(static_cast<std::uint32_t>(j), rk[j]);
      for (std::size_t j = k + 1; j < n; ++j)
        if (rk[j]) lu.upper_.emplace_back(static_cast<std::uint32_t>(j), rk[j]);
      lu.lstart_.push_back(lu.lower_.size());
      lu.ustart_.push_back(lu.upper_.size());
      lu.diag_inv_.push_back(inverse_mod(rk[k], p));
    }
    return lu;
  }

  // Solves A x = b mod p for `m` right-hand sides stored row-interleaved
  // (entry i of rhs k at i*m + k). Entries of b must be < p.
  std::vector<std::uint64_t> solve(const std::vector<std::uint64_t>& b, std::size_t m) const {
    std::vector<std::uint64_t> y(n_ * m), acc(m);
    for (std::size_t k = 0; k < n_; ++k) {
      std::fill(acc.begin(), acc.end(), 0);
      accumulate(lower_, lstart_[k], lstart_[k + 1], y, m, acc);
      for (std::size_t r = 0; r < m; ++r) y[k * m + r] = (b[perm_[k] * m + r] + p_ - acc[r] % p_) % p_;
    }
    std::vector<std::uint64_t> x(n_ * m);
    for (std::size_t k = n_; k-- > 0;) {
      std::fill(acc.begin(), acc.end(), 0);
      accumulate(upper_, ustart_[k], ustart_[k + 1], x, m, acc);
      for (std::size_t r = 0; r < m; ++r) x[k * m + r] = (y[k * m + r] + p_ - acc[r] % p_) % p_ * diag_inv_[k] % p_;
    }
    return x;
  }

 private:
  void accumulate(const std::vector<std::pair<std::uint32_t, std::uint64_t>>& entries, std::size_t from,
                  std::size_t to, const std::vector<std::uint64_t>& v, std::size_t m,
                  std::vector<std::uint64_t>& acc) const {
    std::uint64_t used = 0;
    for (std::size_t e = from; e < to; ++e) {
      if (used == room_) {
        for (auto& a : acc) a %= p_;
        used = 0;
      }
      ++used;
      const auto [j, c] = entries[e];
      for (std::size_t r = 0; r < m; ++r) acc[r] += c * v[j * m + r];
    }
  }

  std::uint64_t p_ = 0;
  std::size_t n_ = 0;
  std::uint64_t room_ = 0;
  std::vector<std::uint32_t> perm_;
  std::vector<std::pair<std::uint32_t, std::uint64_t>> lower_, upper_;
  std::vector<std::size_t> lstart_, ustart_;
  std::vector<std::uint64_t> diag_inv_;
};

// Smallest-height fraction n/d with n = d*u mod m, |n|, d <= sqrt(m/2).
std::optional<mpq_class> rational_reconstruct(const mpz_class& u, const mpz_class& m, const mpz_class& bound) {
  mpz_class r0 = m, r1 = u, t0 = 0, t1 = 1;
  while (r1 > bound) {
    const mpz_class q = r0 / r1;
    mpz_class r2 = r0 - q * r1, t2 = t0 - q * t1;
    r0 = r1;
    r1 = r2;
    t0 = t1;
    t1 = t2;
  }
  if (t1 == 0 || abs(t1) > bound) return std::nullopt;
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), r1.get_mpz_t(), t1.get_mpz_t());
  if (g != 1) return std::nullopt;
  mpq_class out(r1, t1);
  out.canonicalize();
  return out;
}

// Rational vector with x = u mod m entrywise, sharing denominators as found.
std::optional<std::vector<mpq_class>> reconstruct_vector(const std::vector<mpz_class>& u, const mpz_class& m) {
  mpz_class bound, half = m / 2;
  mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
  mpz_class den = 1, t;
  std::vector<mpq_class> out;
  out.reserve(u.size());
  for (const auto& v : u) {
    t = den * v % m;
    if (t > half) t -= m;
    if (abs(t) <= bound) {
      out.emplace_back(t, den);
      out.back().canonicalize();
      continue;
    }
    if (t < 0) t += m;
    auto q = rational_reconstruct(t, m, bound);
    if (!q) return std::nullopt;
    mpq_class x = *q / den;
    den *= q->get_den();
    out.push_back(x);
  }
  return out;
}

bool annihilates(const std::vector<IntegerRow>& rows, const std::vector<mpq_class>& y) {
  mpz_class l = 1;
  for (const auto& v : y) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  std::vector<mpz_class> scaled(y.size());
  for (std::size_t c = 0; c < y.size(); ++c) scaled[c] = y[c].get_num() * (l / y[c].get_den());
  mpz_class sum;
  for (const auto& row : rows) {
    sum = 0;
    for (const auto& [c, v] : row) {
      if (v >= 0) mpz_addmul_ui(sum.get_mpz_t(), scaled[c].get_mpz_t(), static_cast<unsigned long>(v));
      else mpz_submul_ui(sum.get_mpz_t(), scaled[c].get_mpz_t(), static_cast<unsigned long>(-v));
    }
    if (sum != 0) return false;
  }
  return true;
}

}  // namespace

LiftedKernel lifted_kernel(const std::vector<IntegerRow>& rows, std::size_t cols, std::uint64_t p,
                           std::size_t max_steps) {
  if (p < 3 || p >= (1ULL << 31)) throw DomainError("lifting prime must be an odd prime below 2^31");
  LiftedKernel out;

  ModularEchelon ech(p, cols);
  std::vector<std::size_t> independent;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ModularEchelon::SparseRow row;
    for (const auto& [c, v] : rows[i]) {
      if (c >= cols) throw DomainError("row entry outside the matrix");
      if (v == std::numeric_limits<std::int64_t>::min()) throw DomainError("entry out of range");
      if (const auto r = residue(v, p)) row.emplace_back(c, r);
    }
    if (ech.add_row(row)) independent.push_back(i);
  }
  const std::size_t n = ech.rank();
  out.rank_mod_p = n;
  out.free_columns = ech.free_columns();
  const std::size_t d = out.free_columns.size();

  std::vector<std::int64_t> pos(cols, -1), free_pos(cols, -1);
  std::vector<std::uint32_t> pivots;
  for (std::size_t c = 0; c < cols; ++c)
    if (ech.is_pivot(c)) {
      pos[c] = static_cast<std::int64_t>(pivots.size());
      pivots.push_back(static_cast<std::uint32_t>(c));
    }
  for (std::size_t k = 0; k < d; ++k) free_pos[out.free_columns[k]] = static_cast<std::int64_t>(k);

  auto assemble = [&](const std::vector<std::vector<mpq_class>>& x) {
    out.vectors.assign(d, std::vector<mpq_class>(cols, 0));
    for (std::size_t k = 0; k < d; ++k) {
      out.vectors[k][out.free_columns[k]] = 1;
      for (std::size_t i = 0; i < n; ++i) out.vectors[k][pivots[i]] = x[k][i];
    }
    for (const auto& y : out.vectors)
      if (!annihilates(rows, y)) {
        out.vectors.clear();
        return false;
      }
    out.verified = true;
    return true;
  };

  if (d == 0 || n == 0) {
    assemble(std::vector<std::vector<mpq_class>>(d));
    return out;
  }

  // B = A[independent, pivots]; right-hand sides -A[independent, free].
  std::vector<std::uint64_t> dense(n * n, 0);
  std::vector<std::int64_t> residual(n * d, 0);
  double log2_hadamard = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double norm2 = 0;
    for (const auto& [c, v] : rows[independent[i]]) {
      norm2 += static_cast<double>(v) * static_cast<double>(v);
      if (pos[c] >= 0) dense[i * n + pos[c]] = residue(v, p);
      else residual[i * d + free_pos[c]] = -v;
    }
    log2_hadamard += 0.5 * std::log2(norm2);
  }
  auto lu = ModularLU::factor(std::move(dense), n, p);
  if (!lu) return out;

  const double log2p = std::log2(static_cast<double>(p));
  const std::size_t bound_steps = static_cast<std::size_t>(std::ceil((2 * log2_hadamard + 2) / log2p)) + 1;
  const std::size_t limit = max_steps ? std::min(max_steps, bound_steps) : bound_steps;

  std::vector<std::vector<mpz_class>> acc(d, std::vector<mpz_class>(n, 0));
  mpz_class modulus = 1;
  std::vector<std::uint64_t> rhs(n * d);
  std::size_t next_try = 1;
  for (std::size_t step = 1; step <= limit; ++step) {
    for (std::size_t e = 0; e < n * d; ++e) rhs[e] = residue(residual[e], p);
    const auto digit = lu->solve(rhs, d);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < d; ++k)
        if (const auto v = digit[i * d + k]) mpz_addmul_ui(acc[k][i].get_mpz_t(), modulus.get_mpz_t(), v);
    modulus *= static_cast<unsigned long>(p);

    // residual <- (residual - B * digit) / p, exact by construction
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<__int128> s(d, 0);
      for (const auto& [c, v] : rows[independent[i]])
        if (pos[c] >= 0)
          for (std::size_t k = 0; k < d; ++k) s[k] += static_cast<__int128>(v) * digit[pos[c] * d + k];
      for (std::size_t k = 0; k < d; ++k) {
        const __int128 t = residual[i * d + k] - s[k];
        residual[i * d + k] = static_cast<std::int64_t>(t / static_cast<__int128>(p));
      }
    }
    out.lift_steps = step;

    if (step != next_try && step != limit) continue;
    next_try = std::max(step + 1, step + step / 4);
    std::vector<std::vector<mpq_class>> x;
    bool ok = true;
    for (std::size_t k = 0; k < d && ok; ++k) {
      auto v = reconstruct_vector(acc[k], modulus);
      if (!v) ok = false;
      else x.push_back(std::move(*v));
    }
    if (ok && assemble(x)) return out;
  }
  return out;
}

}  // namespace quadnet
