#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace quadnet {

/// Coefficient field tag: the rationals or a prime field F_p with p < 2^63.
class Field {
 public:
  static Field rationals() { return Field(0); }
  /// Primality is checked; throws DomainError otherwise.
  static Field prime(std::uint64_t p);

  bool is_rational() const { return p_ == 0; }
  bool is_prime() const { return p_ != 0; }
  std::uint64_t characteristic() const { return p_; }

  /// Canonical representative of `value` in this field. Over F_p the result
  /// is an integer in [0, p); throws DomainError when the denominator of a
  /// rational is divisible by p.
  mpq_class normalize(const mpq_class& value) const;
  /// Residue of an integer-valued or p-invertible rational in [0, p).
  std::uint64_t residue(const mpq_class& value) const;

  mpq_class add(const mpq_class& a, const mpq_class& b) const { return normalize(a + b); }
  mpq_class sub(const mpq_class& a, const mpq_class& b) const { return normalize(a - b); }
  mpq_class mul(const mpq_class& a, const mpq_class& b) const { return normalize(a * b); }
  /// Throws DomainError on zero.
  mpq_class inv(const mpq_class& a) const;

  std::string to_string() const;
  bool operator==(const Field&) const = default;

 private:
  explicit Field(std::uint64_t p) : p_(p) {}
  std::uint64_t p_;
};

bool is_prime(std::uint64_t n);
std::uint64_t next_prime(std::uint64_t n);

}  // namespace quadnet
