#include "quadnet/groebner.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <numeric>

#include "quadnet/error.hpp"

namespace quadnet {

namespace {

// ---------------------------------------------------------------------------
// Packed monomials: 8 exponents of 7 bits per word, guard bit on top.

constexpr std::size_t kWords = 4;
constexpr std::size_t kMaxVars = kWords * 8;
constexpr std::uint64_t kGuard = 0x8080808080808080ULL;

struct PMono {
  std::array<std::uint64_t, kWords> w{};
  std::uint32_t deg = 0;

  unsigned exp(std::size_t i) const { return static_cast<unsigned>((w[i / 8] >> (8 * (i % 8))) & 0xff); }
  bool operator==(const PMono&) const = default;
};

bool pdivides(const PMono& a, const PMono& b) {
  if (a.deg > b.deg) return false;
  for (std::size_t k = 0; k < kWords; ++k)
    if ((((b.w[k] | kGuard) - a.w[k]) & kGuard) != kGuard) return false;
  return true;
}

PMono pmul(const PMono& a, const PMono& b) {
  PMono r;
  for (std::size_t k = 0; k < kWords; ++k) {
    r.w[k] = a.w[k] + b.w[k];
    if (r.w[k] & kGuard) throw DomainError("exponent overflow in Groebner engine (limit 127)");
  }
  r.deg = a.deg + b.deg;
  return r;
}

PMono pdiv(const PMono& b, const PMono& a) {
  PMono r;
  for (std::size_t k = 0; k < kWords; ++k) r.w[k] = b.w[k] - a.w[k];
  r.deg = b.deg - a.deg;
  return r;
}

PMono plcm(const PMono& a, const PMono& b) {
  PMono r;
  for (std::size_t k = 0; k < kWords; ++k) {
    std::uint64_t x = 0;
    for (int byte = 0; byte < 8; ++byte) {
      std::uint64_t ea = (a.w[k] >> (8 * byte)) & 0xff;
      std::uint64_t eb = (b.w[k] >> (8 * byte)) & 0xff;
      x |= std::max(ea, eb) << (8 * byte);
    }
    r.w[k] = x;
  }
  for (std::size_t k = 0; k < kWords; ++k)
    for (int byte = 0; byte < 8; ++byte) r.deg += static_cast<std::uint32_t>((r.w[k] >> (8 * byte)) & 0xff);
  return r;
}

bool coprime(const PMono& a, const PMono& b) {
  for (std::size_t k = 0; k < kWords; ++k) {
    // A byte is nonzero in both words iff their exponents overlap.
    std::uint64_t x = a.w[k], y = b.w[k];
    for (int byte = 0; byte < 8; ++byte)
      if (((x >> (8 * byte)) & 0xff) && ((y >> (8 * byte)) & 0xff)) return false;
  }
  return true;
}

// Degrevlex: a > b.
bool pgreater(const PMono& a, const PMono& b) {
  if (a.deg != b.deg) return a.deg > b.deg;
  for (std::size_t k = kWords; k-- > 0;) {
    std::uint64_t x = a.w[k] ^ b.w[k];
    if (!x) continue;
    int byte = (63 - std::countl_zero(x)) / 8;
    unsigned ea = (a.w[k] >> (8 * byte)) & 0xff;
    unsigned eb = (b.w[k] >> (8 * byte)) & 0xff;
    return ea < eb;
  }
  return false;
}

PMono pack(const Monomial& m) {
  if (m.size() > kMaxVars) throw DomainError("Groebner engine supports at most 32 variables");
  PMono r;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] > 127) throw DomainError("exponent above 127 in Groebner engine");
    r.w[i / 8] |= static_cast<std::uint64_t>(m[i]) << (8 * (i % 8));
    r.deg += m[i];
  }
  return r;
}

Monomial unpack(const PMono& p, std::size_t n) {
  Monomial m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = p.exp(i);
  return m;
}

// ---------------------------------------------------------------------------
// Coefficient policies.

struct ModP {
  using Elem = std::uint64_t;
  std::uint64_t p;

  Elem from(const mpq_class& q) const { return Field::prime(p).residue(q); }
  mpq_class to(Elem e) const {
    mpz_class z;
    mpz_import(z.get_mpz_t(), 1, 1, sizeof(e), 0, 0, &e);
    return mpq_class(z);
  }
  bool zero(Elem a) const { return a == 0; }
  Elem mul(Elem a, Elem b) const { return static_cast<Elem>(static_cast<unsigned __int128>(a) * b % p); }
  Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + (p - b); }
  Elem neg(Elem a) const { return a == 0 ? 0 : p - a; }
  Elem inv(Elem a) const {
    Elem r = 1, b = a, e = p - 2;
    while (e) {
      if (e & 1) r = mul(r, b);
      b = mul(b, b);
      e >>= 1;
    }
    return r;
  }
  Elem one() const { return 1; }
};

struct QQ {
  using Elem = mpq_class;
  Elem from(const mpq_class& q) const { return q; }
  mpq_class to(const Elem& e) const { return e; }
  bool zero(const Elem& a) const { return a == 0; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem inv(const Elem& a) const { return 1 / a; }
  Elem one() const { return 1; }
};

template <class K>
struct Term {
  PMono m;
  typename K::Elem c;
};

template <class K>
using Poly = std::vector<Term<K>>;  // descending degrevlex, no zeros

template <class K>
class Engine {
 public:
  using Elem = typename K::Elem;
  using P = Poly<K>;

  Engine(K k, std::size_t nvars) : k_(std::move(k)), nvars_(nvars) {}

  P convert(const Polynomial& f) const {
    P out;
    out.reserve(f.size());
    for (const auto& [m, c] : f.terms()) {
      Elem e = k_.from(c);
      if (!k_.zero(e)) out.push_back({pack(m), e});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return pgreater(a.m, b.m); });
    return out;
  }

  Polynomial back(const P& f, const VarTablePtr& vars, const Field& field) const {
    Polynomial out(vars, field);
    for (const auto& t : f) out += Polynomial::term(vars, field, unpack(t.m, nvars_), k_.to(t.c));
    return out;
  }

  void make_monic(P& f) const {
    if (f.empty()) return;
    Elem inv = k_.inv(f[0].c);
    for (auto& t : f) t.c = k_.mul(t.c, inv);
  }

  // a[from..] - c * m * b[bfrom..]
  P sub_mul(const P& a, std::size_t from, const Elem& c, const PMono& m, const P& b, std::size_t bfrom = 0) const {
    P out;
    out.reserve(a.size() - from + b.size() - bfrom);
    std::size_t i = from, j = bfrom;
    while (i < a.size() || j < b.size()) {
      if (j == b.size()) {
        out.push_back(a[i++]);
        continue;
      }
      PMono bm = pmul(b[j].m, m);
      if (i == a.size() || pgreater(bm, a[i].m)) {
        out.push_back({bm, k_.neg(k_.mul(c, b[j].c))});
        ++j;
      } else if (pgreater(a[i].m, bm)) {
        out.push_back(a[i++]);
      } else {
        Elem v = k_.sub(a[i].c, k_.mul(c, b[j].c));
        if (!k_.zero(v)) out.push_back({bm, v});
        ++i;
        ++j;
      }
    }
    return out;
  }

  // Full reduction modulo the polynomials in `basis` selected by `active`.
  // Reducers are monic.
  P normal_form(P f, const std::vector<P>& basis, const std::vector<std::size_t>& active) const {
    P rem;
    std::size_t head = 0;
    while (head < f.size()) {
      const Term<K>& lt = f[head];
      const P* red = nullptr;
      for (std::size_t idx : active) {
        const P& g = basis[idx];
        if (pdivides(g[0].m, lt.m)) {
          red = &g;
          break;
        }
      }
      if (!red) {
        rem.push_back(lt);
        ++head;
        continue;
      }
      Elem c = lt.c;
      PMono q = pdiv(lt.m, (*red)[0].m);
      // Leading terms cancel exactly.
      f = sub_mul(f, head + 1, c, q, *red, 1);
      head = 0;
    }
    return rem;
  }

  P spoly(const P& f, const P& g) const {
    PMono l = plcm(f[0].m, g[0].m);
    PMono uf = pdiv(l, f[0].m);
    PMono ug = pdiv(l, g[0].m);
    // Both monic: S = uf*f - ug*g, leading terms cancel.
    P a;
    a.reserve(f.size());
    for (std::size_t i = 1; i < f.size(); ++i) a.push_back({pmul(f[i].m, uf), f[i].c});
    return sub_mul(a, 0, k_.one(), ug, g, 1);
  }

  struct Pair {
    std::size_t i, j;
    PMono lcm;
  };

  // Returns the reduced basis in `out`.
  void run(std::vector<P> input, std::vector<P>& out, GroebnerStats& stats, unsigned degree_limit = 0) const {
    std::vector<P> store;
    std::vector<std::size_t> G;
    std::vector<Pair> B;

    auto update = [&](std::size_t h) {
      const PMono& lh = store[h][0].m;
      std::vector<Pair> C;
      for (std::size_t g : G) C.push_back({h, g, plcm(lh, store[g][0].m)});
      std::vector<Pair> D;
      while (!C.empty()) {
        Pair p = C.front();
        C.erase(C.begin());
        bool keep = coprime(lh, store[p.j][0].m);
        if (!keep) {
          keep = true;
          for (const auto& q : C)
            if (pdivides(q.lcm, p.lcm)) {
              keep = false;
              break;
            }
          if (keep)
            for (const auto& q : D)
              if (pdivides(q.lcm, p.lcm)) {
                keep = false;
                break;
              }
        }
        if (keep) D.push_back(p);
      }
      std::vector<Pair> Bnew;
      for (const auto& p : B) {
        if (!pdivides(lh, p.lcm) || plcm(store[p.i][0].m, lh) == p.lcm || plcm(lh, store[p.j][0].m) == p.lcm)
          Bnew.push_back(p);
      }
      for (const auto& p : D)
        if (!coprime(lh, store[p.j][0].m)) Bnew.push_back(p);
      B = std::move(Bnew);
      std::vector<std::size_t> Gnew;
      for (std::size_t g : G)
        if (!pdivides(lh, store[g][0].m)) Gnew.push_back(g);
      Gnew.push_back(h);
      G = std::move(Gnew);
      stats.pairs_considered += D.size();
    };

    // Seed with inter-reduced, monic inputs in increasing leading order.
    std::sort(input.begin(), input.end(), [](const P& a, const P& b) {
      if (a.empty() || b.empty()) return b.empty() && !a.empty();
      return pgreater(b[0].m, a[0].m);
    });
    for (auto& f : input) {
      P r = normal_form(std::move(f), store, G);
      if (r.empty()) continue;
      make_monic(r);
      store.push_back(std::move(r));
      update(store.size() - 1);
    }

    while (!B.empty()) {
      // Normal strategy: smallest lcm first.
      auto it = std::min_element(B.begin(), B.end(), [](const Pair& a, const Pair& b) { return pgreater(b.lcm, a.lcm); });
      Pair p = *it;
      *it = B.back();
      B.pop_back();
      if (degree_limit != 0 && p.lcm.deg > degree_limit) {
        ++stats.pairs_skipped;
        continue;
      }
      ++stats.pairs_reduced;
      stats.max_degree = std::max<std::size_t>(stats.max_degree, p.lcm.deg);
      P s = normal_form(spoly(store[p.i], store[p.j]), store, G);
      if (s.empty()) {
        ++stats.zero_reductions;
        continue;
      }
      make_monic(s);
      store.push_back(std::move(s));
      update(store.size() - 1);
    }

    // G is minimal; reduce tails.
    std::vector<P> basis;
    for (std::size_t g : G) basis.push_back(store[g]);
    std::sort(basis.begin(), basis.end(), [](const P& a, const P& b) { return pgreater(b[0].m, a[0].m); });
    for (std::size_t i = 0; i < basis.size(); ++i) {
      std::vector<std::size_t> others;
      for (std::size_t j = 0; j < basis.size(); ++j)
        if (j != i) others.push_back(j);
      P tail(basis[i].begin() + 1, basis[i].end());
      P red = normal_form(std::move(tail), basis, others);
      P full;
      full.push_back(basis[i][0]);
      full.insert(full.end(), red.begin(), red.end());
      basis[i] = std::move(full);
    }
    out = std::move(basis);
  }

  const K& field() const { return k_; }

 private:
  K k_;
  std::size_t nvars_;
};

template <class K>
std::vector<Poly<K>> convert_all(const Engine<K>& e, const std::vector<Polynomial>& ps) {
  std::vector<Poly<K>> out;
  for (const auto& p : ps) out.push_back(e.convert(p));
  return out;
}

template <class Fn>
auto with_engine(const Field& field, std::size_t nvars, Fn&& fn) {
  if (field.is_prime()) {
    if (field.characteristic() >= (1ULL << 63)) throw DomainError("prime too large");
    return fn(Engine<ModP>(ModP{field.characteristic()}, nvars));
  }
  return fn(Engine<QQ>(QQ{}, nvars));
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

GroebnerBasis::GroebnerBasis(VarTablePtr vars, Field field, std::vector<Polynomial> generators, GroebnerStats stats)
    : vars_(std::move(vars)), field_(field), gens_(std::move(generators)), stats_(stats) {}

bool GroebnerBasis::is_unit() const { return gens_.size() == 1 && gens_[0].is_constant() && !gens_[0].is_zero(); }

Polynomial GroebnerBasis::normal_form(const Polynomial& f) const {
  if (!same_table(f.vars(), vars_) || f.field() != field_) throw MismatchError("normal form over a different ring");
  return with_engine(field_, vars_->size(), [&](auto engine) {
    auto basis = convert_all(engine, gens_);
    auto r = engine.normal_form(engine.convert(f), basis, all_indices(basis.size()));
    return engine.back(r, vars_, field_);
  });
}

GroebnerBasis buchberger(const std::vector<Polynomial>& generators, unsigned degree_limit) {
  if (generators.empty()) throw DomainError("buchberger needs at least one generator");
  const VarTablePtr& vars = generators.front().vars();
  const Field field = generators.front().field();
  for (const auto& g : generators)
    if (!same_table(g.vars(), vars) || g.field() != field) throw MismatchError("generators over different rings");
  GroebnerStats stats;
  auto gens = with_engine(field, vars->size(), [&](auto engine) {
    decltype(convert_all(engine, generators)) out;
    engine.run(convert_all(engine, generators), out, stats, degree_limit);
    std::vector<Polynomial> polys;
    for (const auto& p : out) polys.push_back(engine.back(p, vars, field));
    return polys;
  });
  return GroebnerBasis(vars, field, std::move(gens), stats);
}

std::vector<Monomial> standard_monomials(const GroebnerBasis& gb, int a, int b) {
  std::vector<Monomial> leads;
  for (const auto& g : gb.generators()) leads.push_back(g.leading_monomial());
  std::vector<Monomial> out;
  for (const Monomial& m : monomial_basis(a, b, *gb.vars()))
    if (std::none_of(leads.begin(), leads.end(), [&](const Monomial& l) { return divides(l, m); })) out.push_back(m);
  return out;
}

bool satisfies_buchberger_criterion(const GroebnerBasis& gb) {
  const auto& gens = gb.generators();
  return with_engine(gb.field(), gb.vars()->size(), [&](auto engine) {
    auto basis = convert_all(engine, gens);
    auto active = all_indices(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = i + 1; j < basis.size(); ++j) {
        if (!engine.normal_form(engine.spoly(basis[i], basis[j]), basis, active).empty()) return false;
      }
    return true;
  });
}

bool ideal_member(const Polynomial& f, const GroebnerBasis& gb) { return gb.normal_form(f).is_zero(); }

EmptinessResult projective_empty(const GroebnerBasis& gb, const std::vector<std::size_t>& variables, unsigned bound) {
  EmptinessResult result;
  result.powers.assign(variables.size(), 0);
  const std::size_t n = gb.vars()->size();
  bool inconclusive = false;
  with_engine(gb.field(), n, [&](auto engine) {
    auto basis = convert_all(engine, gb.generators());
    auto active = all_indices(basis.size());
    // Pure powers among the leading monomials are necessary; check all
    // variables before the (more expensive) power search.
    for (std::size_t v : variables) {
      if (v >= n) throw DomainError("variable index out of range");
      bool has_pure = false;
      for (const auto& g : basis) {
        const PMono& lm = g[0].m;
        if (lm.exp(v) == lm.deg) {
          has_pure = true;
          break;
        }
      }
      if (!has_pure) {
        result.witness_variable = v;
        return 0;
      }
    }
    for (std::size_t vi = 0; vi < variables.size(); ++vi) {
      Monomial unit(n, 0);
      unit[variables[vi]] = 1;
      const PMono pv = pack(unit);
      // NF(v^k) = NF(v * NF(v^(k-1))).
      typename decltype(engine)::P r;
      r.push_back({PMono{}, engine.field().one()});
      for (unsigned k = 1; k <= bound; ++k) {
        for (auto& t : r) t.m = pmul(t.m, pv);
        r = engine.normal_form(std::move(r), basis, active);
        if (r.empty()) {
          result.powers[vi] = k;
          break;
        }
      }
      if (result.powers[vi] == 0) inconclusive = true;
    }
    return 0;
  });
  if (result.witness_variable)
    result.verdict = Emptiness::Nonempty;
  else if (inconclusive)
    result.verdict = Emptiness::Inconclusive;
  else
    result.verdict = Emptiness::Empty;
  return result;
}

std::string to_string(SmoothnessCertificate::Status s) {
  switch (s) {
    case SmoothnessCertificate::Status::CertifiedSmooth:
      return "certified-smooth";
    case SmoothnessCertificate::Status::SingularModP:
      return "singular-mod-p";
    case SmoothnessCertificate::Status::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::vector<Polynomial> singular_locus_ideal(const QuadricNet& net) {
  const auto& vars = net.vars();
  const std::size_t mu = vars->mu_count();
  const std::size_t nx = vars->x_count();
  std::vector<std::vector<Polynomial>> jac(3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < nx; ++j) jac[i].push_back(net.quadric(i).partial(mu + j));
  std::vector<Polynomial> gens(net.quadrics().begin(), net.quadrics().end());
  for (std::size_t a = 0; a < nx; ++a)
    for (std::size_t b = a + 1; b < nx; ++b)
      for (std::size_t c = b + 1; c < nx; ++c) {
        const std::array<std::size_t, 3> col{a, b, c};
        Polynomial det(vars, net.field());
        // Leibniz expansion of the 3x3 minor.
        constexpr std::array<std::array<int, 3>, 6> perms{{{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 0, 2}}};
        for (std::size_t s = 0; s < perms.size(); ++s) {
          Polynomial term = jac[0][col[perms[s][0]]] * jac[1][col[perms[s][1]]] * jac[2][col[perms[s][2]]];
          if (s < 3)
            det += term;
          else
            det -= term;
        }
        gens.push_back(std::move(det));
      }
  return gens;
}

SmoothnessCertificate smoothness_check(const QuadricNet& net, std::uint64_t p, unsigned power_bound) {
  for (std::size_t i = 0; i < 3; ++i) {
    const Polynomial& q = net.quadric(i);
    Polynomial reduced = q.field().is_rational() ? q.reduce_mod(p) : q;
    if (reduced.is_zero()) throw DomainError("p = " + std::to_string(p) + " divides the content of Q" + std::to_string(i));
  }
  QuadricNet modp = net.field().is_prime() ? net : net.reduce_mod(p);
  GroebnerBasis gb = buchberger(singular_locus_ideal(modp));

  SmoothnessCertificate cert;
  cert.prime = p;
  cert.primes_tried = {p};
  cert.basis_size = gb.generators().size();
  cert.stats = gb.stats();

  std::vector<std::size_t> xs;
  for (std::size_t j = 0; j < net.vars()->x_count(); ++j) xs.push_back(net.vars()->mu_count() + j);
  EmptinessResult e = projective_empty(gb, xs, power_bound);
  cert.powers = e.powers;
  switch (e.verdict) {
    case Emptiness::Empty:
      cert.status = SmoothnessCertificate::Status::CertifiedSmooth;
      break;
    case Emptiness::Nonempty:
      cert.status = SmoothnessCertificate::Status::SingularModP;
      cert.witness = "no power of " + net.vars()->name(*e.witness_variable) + " lies in the singular-locus ideal";
      break;
    case Emptiness::Inconclusive:
      cert.status = SmoothnessCertificate::Status::Inconclusive;
      cert.witness = "power bound " + std::to_string(power_bound) + " exceeded";
      break;
  }
  return cert;
}

SmoothnessCertificate smoothness_check_with_retry(const QuadricNet& net, const std::vector<std::uint64_t>& primes,
                                                  unsigned power_bound) {
  if (primes.empty()) throw DomainError("no primes to try");
  SmoothnessCertificate last;
  std::vector<std::uint64_t> tried;
  bool any_inconclusive = false;
  for (std::uint64_t p : primes) {
    SmoothnessCertificate c;
    try {
      c = smoothness_check(net, p, power_bound);
    } catch (const DomainError&) {
      // Bad prime for this net; move on.
      tried.push_back(p);
      continue;
    }
    tried.push_back(p);
    c.primes_tried = tried;
    if (c.status == SmoothnessCertificate::Status::CertifiedSmooth) return c;
    if (c.status == SmoothnessCertificate::Status::Inconclusive) any_inconclusive = true;
    last = c;
  }
  last.primes_tried = tried;
  // A singular reduction at one prime and an inconclusive run at another
  // leave the question open; report the weaker outcome.
  if (any_inconclusive) last.status = SmoothnessCertificate::Status::Inconclusive;
  return last;
}

}  // namespace quadnet
