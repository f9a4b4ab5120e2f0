#pragma once

#include <string>
#include <vector>

#include "quadnet/net.hpp"
#include "quadnet/polynomial.hpp"

namespace quadnet {

/// Q = x0*L + x1*M + q where x0, x1 are the first two x-block variables and
/// L, M, q involve neither.
struct LineDecomposition {
  Polynomial L;
  Polynomial M;
  Polynomial q;
};

/// True iff no quadric has an x0^2, x0*x1 or x1^2 term, i.e. each contains
/// the line x2 = ... = x7 = 0.
bool contains_standard_line(const QuadricNet& net);

/// Throws DomainError if Q is not a quadratic form in the x-block or does
/// not contain the standard line.
LineDecomposition decompose_along_line(const Polynomial& Q);

/// e1 = sum l_i L_i, e2 = sum l_i M_i, e3 = sum l_i q_i, with the net's
/// mu-block playing the role of (l0, l1, l2). Same table as the net.
struct BundleSystem {
  Polynomial e1;
  Polynomial e2;
  Polynomial e3;

  const VarTablePtr& vars() const { return e1.vars(); }
  /// Three labeled lines "e1 = ...", in scenario syntax.
  std::string to_text() const;
};

BundleSystem bundle_system(const QuadricNet& net);

struct SectionResult {
  bool ok = false;
  /// e1, e2, e3 after substitution.
  std::vector<Polynomial> residuals;
};

/// Substitutes x_{2+i} -> section[i] (six entries, polynomials in the
/// mu-block) into the system. Throws DomainError for a section of the wrong
/// length or one that is identically zero.
SectionResult verify_section(const BundleSystem& sys, const std::vector<Polynomial>& section);

/// det [[G, L^T], [L, 0]] with G the symmetric coefficient matrix of e3 in
/// x2..x7 and L the coefficient rows of e1, e2. Fraction-free Bareiss
/// elimination with exact polynomial division.
Polynomial discriminant_octic(const BundleSystem& sys);

/// Determinant of a square matrix of polynomials by Bareiss elimination.
Polynomial polynomial_determinant(std::vector<std::vector<Polynomial>> m);

/// denominator * e3 - content * result lies in (e1, e2).
struct Elimination {
  /// The (2,2) form in the mu-block and the surviving x-variables.
  Polynomial result;
  /// Product of the squared solved-variable coefficients.
  Polynomial denominator;
  /// mu-monomial stripped from the cleared form.
  Polynomial content;
  std::vector<std::size_t> eliminated;
};

/// Solves e1 and e2 for x6 and x7 (each equation must be a two-term
/// A*x_j + B*x_k with j or k in {x6, x7} and monomial coefficient on the
/// solved variable), substitutes into e3, clears denominators and strips
/// the common mu-monomial content. Throws DomainError for other shapes.
Elimination eliminate_to_22(const BundleSystem& sys);

}  // namespace quadnet
