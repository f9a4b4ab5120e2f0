#include "quadnet/lattice.hpp"

#include "quadnet/error.hpp"

namespace quadnet {

ChowClass::ChowClass(int a, int b) : a_(a), b_(b) {
  if (a < 0 || b < 0) throw DomainError("projective dimensions must be nonnegative");
}

ChowClass ChowClass::one(int a, int b) {
  ChowClass c(a, b);
  c.set(0, 0, 1);
  return c;
}

ChowClass ChowClass::g1(int a, int b) { return linear(a, b, 1, 0); }
ChowClass ChowClass::g2(int a, int b) { return linear(a, b, 0, 1); }

ChowClass ChowClass::linear(int a, int b, long d, long e) {
  ChowClass c(a, b);
  c.set(1, 0, d);
  c.set(0, 1, e);
  return c;
}

mpz_class ChowClass::coefficient(int i, int j) const {
  auto it = terms_.find({i, j});
  return it == terms_.end() ? mpz_class(0) : it->second;
}

void ChowClass::set(int i, int j, const mpz_class& c) {
  if (i < 0 || j < 0) throw DomainError("negative exponent in Chow class");
  if (i > a_ || j > b_ || c == 0) {
    terms_.erase({i, j});
    return;
  }
  terms_[{i, j}] = c;
}

int ChowClass::codimension() const {
  int codim = -1;
  for (const auto& [e, c] : terms_) {
    const int d = e.first + e.second;
    if (codim >= 0 && d != codim) return -1;
    codim = d;
  }
  return codim;
}

void ChowClass::check_same(const ChowClass& o) const {
  if (a_ != o.a_ || b_ != o.b_) throw MismatchError("Chow classes on different ambient spaces");
}

ChowClass& ChowClass::operator+=(const ChowClass& o) {
  check_same(o);
  for (const auto& [e, c] : o.terms_) set(e.first, e.second, coefficient(e.first, e.second) + c);
  return *this;
}

std::string ChowClass::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  // Descending total degree, then descending g1 power.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    std::string mono;
    auto factor = [&](const char* g, int k) {
      if (k == 0) return;
      if (!mono.empty()) mono += "*";
      mono += g;
      if (k > 1) mono += "^" + std::to_string(k);
    };
    factor("g1", e.first);
    factor("g2", e.second);
    mpz_class abs_c = c < 0 ? mpz_class(-c) : c;
    std::string term = mono.empty() ? abs_c.get_str() : (abs_c == 1 ? mono : abs_c.get_str() + "*" + mono);
    if (s.empty())
      s = (c < 0 ? "-" : "") + term;
    else
      s += (c < 0 ? "-" : "+") + term;
  }
  return s;
}

ChowClass chow_mul(const ChowClass& u, const ChowClass& v) {
  if (u.a() != v.a() || u.b() != v.b()) throw MismatchError("Chow classes on different ambient spaces");
  ChowClass out(u.a(), u.b());
  for (const auto& [e1, c1] : u.terms())
    for (const auto& [e2, c2] : v.terms()) {
      const int i = e1.first + e2.first, j = e1.second + e2.second;
      if (i > u.a() || j > u.b()) continue;
      out.set(i, j, out.coefficient(i, j) + c1 * c2);
    }
  return out;
}

mpz_class degree(const ChowClass& u) { return u.coefficient(u.a(), u.b()); }

ChowClass ci_class(int a, int b, const std::vector<std::pair<long, long>>& bidegrees) {
  if (bidegrees.empty()) throw DomainError("ci_class needs at least one hypersurface");
  ChowClass c = ChowClass::one(a, b);
  for (const auto& [d, e] : bidegrees) c = chow_mul(c, ChowClass::linear(a, b, d, e));
  return c;
}

GramLattice::GramLattice(ExactMatrix m, std::vector<std::string> l) : labels(std::move(l)), matrix(std::move(m)) {
  if (matrix.ring() != ExactMatrix::Ring::Integer) throw DomainError("Gram matrix must be integral");
  if (!matrix.is_symmetric()) throw DomainError("Gram matrix must be symmetric");
  elementary_divisors = smith_normal_form(matrix).divisors;
  rank_mod2 = rank_mod(matrix.with_ring(ExactMatrix::Ring::Prime, Field::prime(2)), 2);
  det = determinant(matrix);
  if (det != 0) discriminant = discriminant_group(matrix);
}

GramLattice gram_table(const ChowClass& fourfold) {
  const int a = fourfold.a(), b = fourfold.b();
  if (!fourfold.is_zero() && fourfold.codimension() != a + b - 4)
    throw DomainError("class must have pure codimension " + std::to_string(a + b - 4) + " to be a fourfold");
  const ChowClass g1 = ChowClass::g1(a, b), g2 = ChowClass::g2(a, b);
  const std::vector<ChowClass> basis{chow_mul(g1, g1), chow_mul(g1, g2), chow_mul(g2, g2)};
  ExactMatrix m = ExactMatrix::integer(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) m.set(i, j, mpq_class(degree(chow_mul(chow_mul(basis[i], basis[j]), fourfold))));
  return GramLattice(std::move(m));
}

TwoAdicReport two_adic_compare(const GramLattice& a, const GramLattice& b) {
  if (a.det == 0 || b.det == 0) throw DomainError("two_adic_compare needs nonsingular lattices");
  TwoAdicReport r;
  r.rank_mod2_a = a.rank_mod2;
  r.rank_mod2_b = b.rank_mod2;
  r.discriminant_a = a.discriminant;
  r.discriminant_b = b.discriminant;
  r.rank_differs = a.rank_mod2 != b.rank_mod2;
  r.discriminant_differs = a.discriminant != b.discriminant;
  r.verdict = r.rank_differs || r.discriminant_differs ? "inequivalent" : "indistinguishable by these invariants";
  r.context =
      "a nondegenerate sublattice of a unimodular lattice and its orthogonal complement have discriminant groups "
      "that agree up to sign; the comparison of the primitive fourfold lattices is conditional on Pic(S) = Z for "
      "the double cover S";
  return r;
}

}  // namespace quadnet
