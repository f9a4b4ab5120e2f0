#include "quadnet/polynomial.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "quadnet/error.hpp"

namespace quadnet {

bool degrevlex_greater(const Monomial& a, const Monomial& b) {
  unsigned da = total_degree(a);
  unsigned db = total_degree(b);
  if (da != db) return da > db;
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

unsigned total_degree(const Monomial& m) {
  unsigned d = 0;
  for (auto e : m) d += e;
  return d;
}

Bidegree bidegree(const Monomial& m, const VarTable& vars) {
  Bidegree d;
  for (std::size_t i = 0; i < m.size(); ++i) (vars.is_mu(i) ? d.a : d.b) += static_cast<int>(m[i]);
  return d;
}

bool divides(const Monomial& a, const Monomial& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

Monomial monomial_product(const Monomial& a, const Monomial& b) {
  Monomial r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Monomial monomial_quotient(const Monomial& b, const Monomial& a) {
  Monomial r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = b[i] - a[i];
  return r;
}

Monomial monomial_lcm(const Monomial& a, const Monomial& b) {
  Monomial r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

Polynomial::Polynomial(VarTablePtr vars, Field field) : vars_(std::move(vars)), field_(field) {
  if (!vars_) throw DomainError("polynomial without a variable table");
}

Polynomial Polynomial::constant(VarTablePtr vars, Field field, const mpq_class& c) {
  Polynomial p(std::move(vars), field);
  p.add_term(Monomial(p.vars_->size(), 0), c);
  return p;
}

Polynomial Polynomial::variable(VarTablePtr vars, Field field, std::size_t index) {
  Polynomial p(std::move(vars), field);
  if (index >= p.vars_->size()) throw DomainError("variable index out of range");
  Monomial m(p.vars_->size(), 0);
  m[index] = 1;
  p.add_term(m, 1);
  return p;
}

Polynomial Polynomial::variable(VarTablePtr vars, Field field, std::string_view name) {
  std::size_t idx = vars->index(name);
  return variable(std::move(vars), field, idx);
}

Polynomial Polynomial::term(VarTablePtr vars, Field field, Monomial m, const mpq_class& c) {
  Polynomial p(std::move(vars), field);
  if (m.size() != p.vars_->size()) throw DomainError("exponent vector length mismatch");
  p.add_term(m, c);
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && quadnet::total_degree(terms_.begin()->first) == 0);
}

mpq_class Polynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? mpq_class(0) : it->second;
}

const Monomial& Polynomial::leading_monomial() const {
  if (terms_.empty()) throw DomainError("leading monomial of zero polynomial");
  return terms_.begin()->first;
}

const mpq_class& Polynomial::leading_coefficient() const {
  if (terms_.empty()) throw DomainError("leading coefficient of zero polynomial");
  return terms_.begin()->second;
}

int Polynomial::total_degree() const {
  if (terms_.empty()) return -1;
  // Degrevlex is graded, so the leading term has maximal degree.
  return static_cast<int>(quadnet::total_degree(terms_.begin()->first));
}

std::uint32_t Polynomial::degree_in(std::size_t index) const {
  std::uint32_t d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m[index]);
  return d;
}

void Polynomial::check_compatible(const Polynomial& other) const {
  if (!same_table(vars_, other.vars_)) throw MismatchError("polynomials over different variable tables");
  if (field_ != other.field_)
    throw MismatchError("polynomials over different fields: " + field_.to_string() + " vs " +
                        other.field_.to_string());
}

void Polynomial::add_term(const Monomial& m, const mpq_class& c) {
  mpq_class v = field_.normalize(c);
  if (v == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, v);
  if (inserted) return;
  it->second = field_.normalize(it->second + v);
  if (it->second == 0) terms_.erase(it);
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  check_compatible(other);
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  check_compatible(other);
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check_compatible(b);
  Polynomial r(a.vars_, a.field_);
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) r.add_term(monomial_product(ma, mb), ca * cb);
  return r;
}

Polynomial& Polynomial::operator*=(const Polynomial& other) { return *this = *this * other; }

Polynomial Polynomial::operator-() const { return scaled(-1); }

Polynomial Polynomial::scaled(const mpq_class& c) const {
  Polynomial r(vars_, field_);
  mpq_class k = field_.normalize(c);
  if (k == 0) return r;
  for (const auto& [m, v] : terms_) r.terms_.emplace_hint(r.terms_.end(), m, field_.mul(v, k));
  return r;
}

Polynomial Polynomial::times_monomial(const Monomial& mono, const mpq_class& c) const {
  Polynomial r(vars_, field_);
  mpq_class k = field_.normalize(c);
  if (k == 0) return r;
  // Multiplying by a monomial preserves the order of terms.
  for (const auto& [m, v] : terms_) r.terms_.emplace_hint(r.terms_.end(), monomial_product(m, mono), field_.mul(v, k));
  return r;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial result = constant(vars_, field_, 1);
  Polynomial base = *this;
  while (e) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return *this;
  return scaled(field_.inv(leading_coefficient()));
}

bool Polynomial::operator==(const Polynomial& other) const {
  return same_table(vars_, other.vars_) && field_ == other.field_ && terms_ == other.terms_;
}

Polynomial Polynomial::partial(std::size_t index) const {
  if (index >= vars_->size()) throw DomainError("variable index out of range");
  Polynomial r(vars_, field_);
  for (const auto& [m, c] : terms_) {
    if (m[index] == 0) continue;
    Monomial d = m;
    --d[index];
    r.add_term(d, c * m[index]);
  }
  return r;
}

Polynomial Polynomial::partial(std::string_view name) const { return partial(vars_->index(name)); }

Polynomial Polynomial::substitute(const std::map<std::size_t, Polynomial>& assignment) const {
  for (const auto& [idx, target] : assignment) {
    if (idx >= vars_->size()) throw DomainError("substitution for unknown variable index");
    check_compatible(target);
  }
  // powers[idx][e] caches target^e.
  std::map<std::size_t, std::vector<Polynomial>> powers;
  auto power_of = [&](std::size_t idx, std::uint32_t e) -> const Polynomial& {
    auto& cache = powers[idx];
    if (cache.empty()) cache.push_back(constant(vars_, field_, 1));
    while (cache.size() <= e) cache.push_back(cache.back() * assignment.at(idx));
    return cache[e];
  };

  Polynomial result(vars_, field_);
  for (const auto& [m, c] : terms_) {
    Monomial kept = m;
    Polynomial piece = constant(vars_, field_, c);
    for (const auto& [idx, target] : assignment) {
      if (m[idx] == 0) continue;
      kept[idx] = 0;
      piece *= power_of(idx, m[idx]);
    }
    result += piece.times_monomial(kept, 1);
  }
  return result;
}

BidegreeInfo Polynomial::bidegree_of() const {
  BidegreeInfo info;
  if (terms_.empty()) return info;
  info.kind = BidegreeInfo::Kind::Homogeneous;
  info.degree = bidegree(terms_.begin()->first, *vars_);
  for (const auto& [m, c] : terms_) {
    if (!(bidegree(m, *vars_) == info.degree)) {
      info.kind = BidegreeInfo::Kind::Mixed;
      break;
    }
  }
  return info;
}

Polynomial Polynomial::reduce_mod(std::uint64_t p) const {
  Field target = Field::prime(p);
  if (field_.is_prime() && field_ != target)
    throw MismatchError("cannot reduce an " + field_.to_string() + " polynomial mod " + std::to_string(p));
  Polynomial r(vars_, target);
  for (const auto& [m, c] : terms_) r.add_term(m, c);
  return r;
}

Polynomial Polynomial::lift_to_rationals() const {
  Polynomial r(vars_, Field::rationals());
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, c);
  return r;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    mpq_class mag = abs(c);
    if (c < 0)
      os << (first ? "-" : "-");
    else if (!first)
      os << "+";
    first = false;
    bool is_one = quadnet::total_degree(m) == 0;
    bool wrote = false;
    if (mag != 1 || is_one) {
      os << mag.get_str();
      wrote = true;
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (wrote) os << "*";
      os << vars_->name(i);
      if (m[i] > 1) os << "^" << m[i];
      wrote = true;
    }
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.to_string(); }

namespace {

// All exponent vectors of total degree `deg` over `count` slots, in descending
// degrevlex order restricted to those slots.
void compositions(unsigned deg, std::size_t count, std::vector<std::vector<std::uint32_t>>& out) {
  out.clear();
  if (count == 0) {
    if (deg == 0) out.emplace_back();
    return;
  }
  std::vector<std::uint32_t> cur(count, 0);
  // Enumerate by recursion over the last slot first: smaller last exponent is
  // larger in degrevlex.
  auto rec = [&](auto&& self, std::size_t slot, unsigned remaining) -> void {
    if (slot == 0) {
      cur[0] = remaining;
      out.push_back(cur);
      return;
    }
    for (unsigned e = 0; e <= remaining; ++e) {
      cur[slot] = e;
      self(self, slot - 1, remaining - e);
    }
    cur[slot] = 0;
  };
  rec(rec, count - 1, deg);
}

}  // namespace

std::vector<Monomial> monomial_basis(int a, int b, const VarTable& vars) {
  if (a < 0 || b < 0) return {};
  std::vector<std::vector<std::uint32_t>> mu_parts;
  std::vector<std::vector<std::uint32_t>> x_parts;
  compositions(static_cast<unsigned>(a), vars.mu_count(), mu_parts);
  compositions(static_cast<unsigned>(b), vars.x_count(), x_parts);
  std::vector<Monomial> out;
  out.reserve(mu_parts.size() * x_parts.size());
  for (const auto& mu : mu_parts) {
    for (const auto& x : x_parts) {
      Monomial m(mu);
      m.insert(m.end(), x.begin(), x.end());
      out.push_back(std::move(m));
    }
  }
  std::sort(out.begin(), out.end(), DegRevLexGreater{});
  return out;
}

std::optional<Polynomial> exact_divide(const Polynomial& f, const Polynomial& g) {
  if (g.is_zero()) throw DomainError("division by the zero polynomial");
  if (!same_table(f.vars(), g.vars()) || f.field() != g.field())
    throw MismatchError("exact_divide operands over different rings");
  const Field& k = f.field();
  const Monomial& lg = g.leading_monomial();
  mpq_class inv_lc = k.inv(g.leading_coefficient());
  Polynomial q(f.vars(), k);
  Polynomial r = f;
  while (!r.is_zero()) {
    const Monomial& lr = r.leading_monomial();
    // The leading term of r would stay in the remainder for good.
    if (!divides(lg, lr)) return std::nullopt;
    Monomial t = monomial_quotient(lr, lg);
    mpq_class c = k.mul(r.leading_coefficient(), inv_lc);
    q += Polynomial::term(f.vars(), k, t, c);
    r -= g.times_monomial(t, c);
  }
  return q;
}

namespace {

// Coefficient of var^e in p, as a polynomial not involving var.
Polynomial coefficient_in(const Polynomial& p, std::size_t var, std::uint32_t e) {
  Polynomial r(p.vars(), p.field());
  for (const auto& [m, c] : p.terms()) {
    if (m[var] != e) continue;
    Monomial k = m;
    k[var] = 0;
    r += Polynomial::term(p.vars(), p.field(), k, c);
  }
  return r;
}

std::optional<std::size_t> last_variable(const Polynomial& p) {
  for (std::size_t i = p.vars()->size(); i-- > 0;)
    if (p.involves(i)) return i;
  return std::nullopt;
}

}  // namespace

std::optional<Polynomial> exact_divide_recursive(const Polynomial& f, const Polynomial& g) {
  if (g.is_zero()) throw DomainError("division by the zero polynomial");
  if (!same_table(f.vars(), g.vars()) || f.field() != g.field())
    throw MismatchError("exact_divide operands over different rings");
  if (f.is_zero()) return Polynomial(f.vars(), f.field());
  auto v = last_variable(g);
  if (!v) return f.scaled(f.field().inv(g.leading_coefficient()));

  const std::size_t var = *v;
  const std::uint32_t dg = g.degree_in(var);
  const Polynomial lead_g = coefficient_in(g, var, dg);
  Polynomial q(f.vars(), f.field());
  Polynomial r = f;
  while (!r.is_zero()) {
    std::uint32_t dr = r.degree_in(var);
    if (dr < dg) return std::nullopt;
    auto c = exact_divide_recursive(coefficient_in(r, var, dr), lead_g);
    if (!c) return std::nullopt;
    Monomial shift(f.vars()->size(), 0);
    shift[var] = dr - dg;
    Polynomial t = c->times_monomial(shift, 1);
    q += t;
    r -= t * g;
  }
  return q;
}

std::optional<mpq_class> scalar_ratio(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero() || a.size() != b.size()) return std::nullopt;
  mpq_class c = a.leading_coefficient() / b.leading_coefficient();
  if (a.field().is_prime()) c = a.field().normalize(c);
  if (a != b.scaled(c)) return std::nullopt;
  return c;
}

}  // namespace quadnet
