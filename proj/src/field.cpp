#include "quadnet/field.hpp"

#include "quadnet/error.hpp"

namespace quadnet {

namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

std::uint64_t mpz_residue(const mpz_class& z, std::uint64_t p) {
  mpz_class r;
  mpz_class pz;
  mpz_import(pz.get_mpz_t(), 1, 1, sizeof(p), 0, 0, &p);
  mpz_fdiv_r(r.get_mpz_t(), z.get_mpz_t(), pz.get_mpz_t());
  std::uint64_t out = 0;
  std::size_t count = 0;
  mpz_export(&out, &count, 1, sizeof(out), 0, 0, r.get_mpz_t());
  return count ? out : 0;
}

mpz_class to_mpz(std::uint64_t v) {
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return z;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % small == 0) return n == small;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic witness set for 64-bit inputs.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t next_prime(std::uint64_t n) {
  std::uint64_t c = n + 1;
  while (!is_prime(c)) ++c;
  return c;
}

Field Field::prime(std::uint64_t p) {
  if (p >= (1ULL << 63) || !quadnet::is_prime(p))
    throw DomainError("field characteristic " + std::to_string(p) + " is not a prime below 2^63");
  return Field(p);
}

std::uint64_t Field::residue(const mpq_class& value) const {
  if (!is_prime()) throw DomainError("residue requested over the rationals");
  std::uint64_t num = mpz_residue(value.get_num(), p_);
  std::uint64_t den = mpz_residue(value.get_den(), p_);
  if (den == 0)
    throw DomainError("denominator of " + value.get_str() + " vanishes mod " + std::to_string(p_));
  if (den == 1) return num;
  return mulmod(num, powmod(den, p_ - 2, p_), p_);
}

mpq_class Field::normalize(const mpq_class& value) const {
  if (is_rational()) {
    mpq_class v = value;
    v.canonicalize();
    return v;
  }
  return mpq_class(to_mpz(residue(value)));
}

mpq_class Field::inv(const mpq_class& a) const {
  if (a == 0) throw DomainError("inverse of zero");
  if (is_rational()) return 1 / a;
  return mpq_class(to_mpz(powmod(residue(a), p_ - 2, p_)));
}

std::string Field::to_string() const {
  return is_rational() ? std::string("QQ") : "GF(" + std::to_string(p_) + ")";
}

}  // namespace quadnet
