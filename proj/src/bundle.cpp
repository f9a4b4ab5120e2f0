#include "quadnet/bundle.hpp"

#include <algorithm>
#include <sstream>

#include "quadnet/error.hpp"

namespace quadnet {

namespace {

std::size_t x_index(const VarTable& vars, std::size_t j) { return vars.mu_count() + j; }

void require_eight(const VarTable& vars) {
  if (vars.x_count() != 8) throw DomainError("quadric bundle construction needs exactly eight x-variables");
}

// Splits a (1,1) or (1,2) form into coefficient polynomials in the mu-block
// keyed by the x-part of each monomial.
std::map<Monomial, Polynomial> x_coefficients(const Polynomial& f) {
  const auto& vars = *f.vars();
  std::map<Monomial, Polynomial> out;
  for (const auto& [m, c] : f.terms()) {
    Monomial xpart(m.size(), 0), mupart(m.size(), 0);
    for (std::size_t i = 0; i < m.size(); ++i) (vars.is_mu(i) ? mupart : xpart)[i] = m[i];
    auto it = out.try_emplace(xpart, f.vars(), f.field()).first;
    it->second += Polynomial::term(f.vars(), f.field(), mupart, c);
  }
  return out;
}

}  // namespace

bool contains_standard_line(const QuadricNet& net) {
  const auto& vars = *net.vars();
  if (vars.x_count() < 2) return false;
  const std::size_t x0 = x_index(vars, 0), x1 = x_index(vars, 1);
  for (const auto& q : net.quadrics()) {
    for (const auto& [m, c] : q.terms())
      if (m[x0] + m[x1] == 2) return false;
  }
  return true;
}

LineDecomposition decompose_along_line(const Polynomial& Q) {
  const auto& vars = *Q.vars();
  if (vars.x_count() < 2) throw DomainError("decomposition needs at least two x-variables");
  if (!Q.bidegree_of().is(Bidegree{0, 2})) throw DomainError("decompose_along_line expects a quadratic form in x");
  const std::size_t x0 = x_index(vars, 0), x1 = x_index(vars, 1);
  for (const auto& [m, c] : Q.terms())
    if (m[x0] + m[x1] == 2) throw DomainError("quadric does not contain the line x2 = ... = x7 = 0");
  LineDecomposition d{Q.partial(x0), Q.partial(x1), Q};
  const Polynomial X0 = Polynomial::variable(Q.vars(), Q.field(), x0);
  const Polynomial X1 = Polynomial::variable(Q.vars(), Q.field(), x1);
  d.q -= X0 * d.L + X1 * d.M;
  if (d.q.involves(x0) || d.q.involves(x1) || X0 * d.L + X1 * d.M + d.q != Q)
    throw Error("line decomposition is not exact");
  return d;
}

std::string BundleSystem::to_text() const {
  std::ostringstream os;
  os << "poly e1 = " << e1 << "\n"
     << "poly e2 = " << e2 << "\n"
     << "poly e3 = " << e3 << "\n";
  return os.str();
}

BundleSystem bundle_system(const QuadricNet& net) {
  require_eight(*net.vars());
  if (!contains_standard_line(net)) throw DomainError("net does not contain the line x2 = ... = x7 = 0");
  const auto& vars = net.vars();
  BundleSystem sys{Polynomial(vars, net.field()), Polynomial(vars, net.field()), Polynomial(vars, net.field())};
  for (std::size_t i = 0; i < 3; ++i) {
    const LineDecomposition d = decompose_along_line(net.quadric(i));
    const Polynomial l = Polynomial::variable(vars, net.field(), i);
    sys.e1 += l * d.L;
    sys.e2 += l * d.M;
    sys.e3 += l * d.q;
  }
  const BidegreeInfo b1 = sys.e1.bidegree_of(), b2 = sys.e2.bidegree_of(), b3 = sys.e3.bidegree_of();
  if (!b1.is({1, 1}) || !b2.is({1, 1}) || !b3.is({1, 2})) throw Error("bundle equations have unexpected bidegrees");
  return sys;
}

SectionResult verify_section(const BundleSystem& sys, const std::vector<Polynomial>& section) {
  const auto& vars = *sys.vars();
  require_eight(vars);
  if (section.size() != 6) throw DomainError("a section assigns exactly six coordinates x2..x7");
  if (std::all_of(section.begin(), section.end(), [](const Polynomial& p) { return p.is_zero(); }))
    throw DomainError("the zero tuple is not a point of P^5");
  std::map<std::size_t, Polynomial> assignment;
  for (std::size_t i = 0; i < 6; ++i) assignment.emplace(x_index(vars, 2 + i), section[i]);
  SectionResult r;
  for (const Polynomial* e : {&sys.e1, &sys.e2, &sys.e3}) r.residuals.push_back(e->substitute(assignment));
  r.ok = std::all_of(r.residuals.begin(), r.residuals.end(), [](const Polynomial& p) { return p.is_zero(); });
  return r;
}

Polynomial polynomial_determinant(std::vector<std::vector<Polynomial>> m) {
  const std::size_t n = m.size();
  if (n == 0) throw DomainError("determinant of an empty matrix");
  for (const auto& row : m)
    if (row.size() != n) throw DomainError("determinant needs a square matrix");
  const VarTablePtr& vars = m[0][0].vars();
  const Field field = m[0][0].field();
  Polynomial prev = Polynomial::constant(vars, field, 1);
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t r = k + 1;
      while (r < n && m[r][k].is_zero()) ++r;
      if (r == n) return Polynomial(vars, field);
      std::swap(m[k], m[r]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Polynomial num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        auto q = exact_divide(num, prev);
        if (!q) throw Error("Bareiss step is not exact");
        m[i][j] = std::move(*q);
      }
      m[i][k] = Polynomial(vars, field);
    }
    prev = m[k][k];
  }
  return negate ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

Polynomial discriminant_octic(const BundleSystem& sys) {
  const auto& vars = *sys.vars();
  require_eight(vars);
  const VarTablePtr& vp = sys.vars();
  const Field field = sys.e3.field();
  std::vector<std::vector<Polynomial>> m(8, std::vector<Polynomial>(8, Polynomial(vp, field)));
  const mpq_class half(1, 2);

  for (const auto& [xm, coeff] : x_coefficients(sys.e3)) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 2; j < 8; ++j)
      for (std::uint32_t e = 0; e < xm[x_index(vars, j)]; ++e) idx.push_back(j - 2);
    if (idx.size() != 2) throw DomainError("e3 must be quadratic in x2..x7");
    if (idx[0] == idx[1]) {
      m[idx[0]][idx[0]] += coeff;
    } else {
      m[idx[0]][idx[1]] += coeff.scaled(half);
      m[idx[1]][idx[0]] += coeff.scaled(half);
    }
  }
  const Polynomial* border[2] = {&sys.e1, &sys.e2};
  for (std::size_t r = 0; r < 2; ++r) {
    for (const auto& [xm, coeff] : x_coefficients(*border[r])) {
      std::size_t col = 8;
      for (std::size_t j = 2; j < 8; ++j)
        if (xm[x_index(vars, j)] == 1) col = j - 2;
      if (col == 8 || total_degree(xm) != 1) throw DomainError("e1, e2 must be linear in x2..x7");
      m[6 + r][col] += coeff;
      m[col][6 + r] += coeff;
    }
  }
  return polynomial_determinant(std::move(m));
}

Elimination eliminate_to_22(const BundleSystem& sys) {
  const auto& vars = *sys.vars();
  require_eight(vars);
  const VarTablePtr& vp = sys.vars();
  const Field field = sys.e3.field();
  const std::size_t x6 = x_index(vars, 6), x7 = x_index(vars, 7);

  struct Solved {
    std::size_t target;
    std::size_t other;
    Polynomial denom;  // coefficient of target
    Polynomial numer;  // -coefficient of other
  };
  std::vector<Solved> solved;
  for (const Polynomial* e : {&sys.e1, &sys.e2}) {
    if (!e->bidegree_of().is({1, 1}) || e->is_zero())
      throw DomainError("unsupported shape: e1 and e2 must be nonzero (1,1) forms");
    const auto coeffs = x_coefficients(*e);
    if (coeffs.size() != 2) throw DomainError("unsupported shape: each of e1, e2 must involve exactly two x-variables");
    std::vector<std::pair<std::size_t, Polynomial>> parts;
    for (const auto& [xm, c] : coeffs) {
      std::size_t v = std::find(xm.begin(), xm.end(), 1u) - xm.begin();
      parts.emplace_back(v, c);
    }
    const bool first = parts[0].first == x6 || parts[0].first == x7;
    const bool second = parts[1].first == x6 || parts[1].first == x7;
    if (first == second) throw DomainError("unsupported shape: exactly one variable of each equation must be x6 or x7");
    auto& t = first ? parts[0] : parts[1];
    auto& o = first ? parts[1] : parts[0];
    if (t.second.size() != 1) throw DomainError("unsupported shape: coefficient of the solved variable is not a monomial");
    solved.push_back({t.first, o.first, t.second, -o.second});
  }
  if (solved[0].target == solved[1].target) throw DomainError("unsupported shape: e1 and e2 solve for the same variable");

  Elimination out{Polynomial(vp, field), Polynomial::constant(vp, field, 1), Polynomial(vp, field), {}};
  for (const auto& s : solved) {
    out.denominator *= s.denom.pow(2);
    out.eliminated.push_back(s.target);
  }

  Polynomial cleared(vp, field);
  for (const auto& [m, c] : sys.e3.terms()) {
    Monomial rest = m;
    Polynomial term = Polynomial::constant(vp, field, c);
    for (const auto& s : solved) {
      const std::uint32_t e = m[s.target];
      if (e > 2) throw DomainError("unsupported shape: e3 has degree above two in a solved variable");
      rest[s.target] = 0;
      term *= (s.numer * Polynomial::variable(vp, field, s.other)).pow(e) * s.denom.pow(2 - e);
    }
    cleared += term.times_monomial(rest, 1);
  }

  // Strip the common mu-monomial.
  Monomial content(vars.size(), 0);
  if (!cleared.is_zero()) {
    for (std::size_t i = 0; i < vars.mu_count(); ++i) {
      std::uint32_t lo = UINT32_MAX;
      for (const auto& [m, c] : cleared.terms()) lo = std::min(lo, m[i]);
      content[i] = lo;
    }
  }
  out.content = Polynomial::term(vp, field, content, 1);
  auto q = exact_divide(cleared, out.content);
  if (!q) throw Error("content division failed");
  out.result = std::move(*q);
  if (!out.result.bidegree_of().is({2, 2})) throw DomainError("elimination did not produce a (2,2) form");
  return out;
}

}  // namespace quadnet
