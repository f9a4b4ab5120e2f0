#pragma once

#include <array>
#include <string>

#include "quadnet/polynomial.hpp"

namespace quadnet {

/// Three quadrics Q0, Q1, Q2 in the x-block of a table whose mu-block holds
/// the three net parameters. F = mu0*Q0 + mu1*Q1 + mu2*Q2.
class QuadricNet {
 public:
  /// Throws DomainError unless each Q_i has bidegree (0,2) (or is zero) and
  /// the table has exactly three mu-variables.
  QuadricNet(std::array<Polynomial, 3> quadrics, std::string name = {});

  const std::array<Polynomial, 3>& quadrics() const { return q_; }
  const Polynomial& quadric(std::size_t i) const { return q_.at(i); }
  const VarTablePtr& vars() const { return q_[0].vars(); }
  const Field& field() const { return q_[0].field(); }
  const std::string& name() const { return name_; }
  const Polynomial& F() const { return f_; }

  /// The same net with coefficients reduced mod p.
  QuadricNet reduce_mod(std::uint64_t p) const;

 private:
  std::array<Polynomial, 3> q_;
  std::string name_;
  Polynomial f_;
};

}  // namespace quadnet
