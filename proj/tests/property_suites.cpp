#include "property_suites.hpp"

#include <functional>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "quadnet/groebner.hpp"
#include "quadnet/linalg.hpp"
#include "quadnet/runner.hpp"

namespace suites {

using quadnet::Field;
using quadnet::Polynomial;

namespace {

constexpr std::uint64_t kP = 32003;

struct Tally {
  SuiteResult r;
  void record(bool ok, const std::function<std::string()>& what) {
    ++r.cases;
    if (!ok) {
      ++r.failures;
      if (r.first_failure.empty()) r.first_failure = what();
    }
  }
};

quadnet::VarTablePtr small_table() { return quadnet::make_var_table({"a", "b"}, {"x", "y", "z"}); }

Field pick_field(std::mt19937_64& rng) { return rng() % 2 ? Field::rationals() : Field::prime(kP); }

std::vector<std::uint64_t> random_point(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::uint64_t> pt(n);
  for (auto& v : pt) v = rng() % kP;
  return pt;
}

const std::vector<std::size_t> kAll{0, 1, 2, 3, 4};

}  // namespace

SuiteResult ring_axioms(int cases, std::uint64_t seed) {
  Tally t{{"ring axioms"}};
  std::mt19937_64 rng(seed);
  const auto vars = small_table();
  for (int i = 0; i < cases; ++i) {
    const Field F = pick_field(rng);
    const auto f = oracle::random_poly(rng, vars, F, kAll, 6, 3, 9);
    const auto g = oracle::random_poly(rng, vars, F, kAll, 6, 3, 9);
    const auto h = oracle::random_poly(rng, vars, F, kAll, 6, 3, 9);
    const Polynomial zero(vars, F), one = Polynomial::constant(vars, F, 1);
    const auto pt = random_point(rng, vars->size());
    const auto ev = [&](const Polynomial& p) { return oracle::eval_mod(p, pt, kP); };
    bool ok = (f + g) + h == f + (g + h) && f + g == g + f && f * g == g * f && (f * g) * h == f * (g * h) &&
              f * (g + h) == f * g + f * h && f + zero == f && f * one == f && (f - f).is_zero() &&
              f + (-f) == zero && (f * zero).is_zero();
    // Independent check of the product and sum through evaluation.
    ok = ok && ev(f * g) == static_cast<std::uint64_t>((unsigned __int128)ev(f) * ev(g) % kP) &&
         ev(f + g) == (ev(f) + ev(g)) % kP;
    ok = ok && f.pow(3) == f * f * f;
    t.record(ok, [&] { return "f = " + f.to_string() + ", g = " + g.to_string() + ", h = " + h.to_string(); });
  }
  return t.r;
}

SuiteResult leibniz(int cases, std::uint64_t seed) {
  Tally t{{"Leibniz rule"}};
  std::mt19937_64 rng(seed);
  const auto vars = small_table();
  for (int i = 0; i < cases; ++i) {
    const Field F = pick_field(rng);
    const auto f = oracle::random_poly(rng, vars, F, kAll, 6, 3, 9);
    const auto g = oracle::random_poly(rng, vars, F, kAll, 6, 3, 9);
    const std::size_t v = rng() % vars->size();
    bool ok = (f * g).partial(v) == f * g.partial(v) + g * f.partial(v);
    // Termwise derivative as oracle.
    Polynomial d(vars, F);
    for (const auto& [m, c] : f.terms()) {
      if (m[v] == 0) continue;
      auto m2 = m;
      --m2[v];
      d += Polynomial::term(vars, F, m2, c * m[v]);
    }
    ok = ok && f.partial(v) == d;
    t.record(ok, [&] { return "f = " + f.to_string() + ", g = " + g.to_string() + ", var " + vars->name(v); });
  }
  return t.r;
}

SuiteResult substitution_homomorphism(int cases, std::uint64_t seed) {
  Tally t{{"substitution homomorphism"}};
  std::mt19937_64 rng(seed);
  const auto vars = small_table();
  for (int i = 0; i < cases; ++i) {
    const Field F = pick_field(rng);
    const auto f = oracle::random_poly(rng, vars, F, kAll, 5, 2, 9);
    const auto g = oracle::random_poly(rng, vars, F, kAll, 5, 2, 9);
    std::map<std::size_t, Polynomial> sigma;
    for (std::size_t v = 0; v < vars->size(); ++v)
      if (rng() % 2) sigma.emplace(v, oracle::random_poly(rng, vars, F, kAll, 3, 2, 5));
    bool ok = (f * g).substitute(sigma) == f.substitute(sigma) * g.substitute(sigma) &&
              (f + g).substitute(sigma) == f.substitute(sigma) + g.substitute(sigma);
    // Evaluating sigma(f) at pt equals evaluating f at sigma(pt).
    const auto pt = random_point(rng, vars->size());
    auto image = pt;
    for (const auto& [v, s] : sigma) image[v] = oracle::eval_mod(s, pt, kP);
    ok = ok && oracle::eval_mod(f.substitute(sigma), pt, kP) == oracle::eval_mod(f, image, kP);
    t.record(ok, [&] { return "f = " + f.to_string() + ", g = " + g.to_string(); });
  }
  return t.r;
}

SuiteResult snf_postconditions(int cases, std::uint64_t seed) {
  Tally t{{"Smith normal form postconditions"}};
  std::mt19937_64 rng(seed);
  for (int i = 0; i < cases; ++i) {
    const std::size_t rows = 1 + rng() % 5, cols = 1 + rng() % 5;
    std::vector<std::vector<long>> m(rows, std::vector<long>(cols));
    oracle::IntMatrix M(rows, std::vector<mpz_class>(cols));
    std::vector<std::vector<mpq_class>> Q(rows, std::vector<mpq_class>(cols));
    const long bound = rng() % 3 == 0 ? 3 : 40;
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) {
        m[r][c] = static_cast<long>(rng() % (2 * bound + 1)) - bound;
        M[r][c] = m[r][c];
        Q[r][c] = m[r][c];
      }
    bool ok = true;
    std::string note;
    try {
      const auto s = quadnet::smith_normal_form(quadnet::ExactMatrix::integer(m));
      ok = oracle::mul(oracle::mul(s.U, M), s.V) == s.D;
      const mpz_class du = oracle::det(s.U), dv = oracle::det(s.V);
      ok = ok && abs(du) == 1 && abs(dv) == 1;
      // D diagonal, nonnegative, divisibility chain, zeros last.
      std::size_t nonzero = 0;
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
          if (r != c && s.D[r][c] != 0) ok = false;
          if (r == c && s.D[r][c] < 0) ok = false;
        }
      for (std::size_t k = 0; k < s.divisors.size(); ++k) {
        if (s.divisors[k] != 0) ++nonzero;
        if (k + 1 < s.divisors.size() && s.divisors[k] != 0 && s.divisors[k + 1] % s.divisors[k] != 0) ok = false;
        if (k + 1 < s.divisors.size() && s.divisors[k] == 0 && s.divisors[k + 1] != 0) ok = false;
      }
      ok = ok && nonzero == oracle::rank(Q);
      // d1 is the gcd of the entries.
      mpz_class g = 0;
      for (const auto& row : M)
        for (const auto& e : row) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.get_mpz_t());
      if (!s.divisors.empty()) ok = ok && s.divisors[0] == g;
      // Product of the divisors is |det| for square matrices.
      if (rows == cols) {
        mpz_class prod = 1;
        for (const auto& d : s.divisors) prod *= d;
        ok = ok && prod == abs(oracle::det(M));
      }
    } catch (const std::exception& e) {
      ok = false;
      note = e.what();
    }
    t.record(ok, [&] {
      std::ostringstream os;
      os << rows << "x" << cols << " matrix, seed case " << i << " " << note;
      return os.str();
    });
  }
  return t.r;
}

SuiteResult spair_reduction(int cases, std::uint64_t seed) {
  Tally t{{"Buchberger S-pair reduction"}};
  std::mt19937_64 rng(seed);
  const auto vars = quadnet::make_var_table({}, {"x", "y", "z", "w"});
  const std::vector<std::size_t> which{0, 1, 2, 3};
  for (int i = 0; i < cases; ++i) {
    const Field F = i % 4 == 0 ? Field::rationals() : Field::prime(kP);
    const int n = 2 + static_cast<int>(rng() % 3);
    std::vector<Polynomial> gens;
    for (int k = 0; k < n; ++k) {
      auto g = oracle::random_poly(rng, vars, F, which, 4, 2, F.is_rational() ? 3 : 50);
      if (!g.is_zero()) gens.push_back(g);
    }
    if (gens.empty()) gens.push_back(Polynomial::variable(vars, F, 0));
    bool ok = true;
    std::string note;
    try {
      const auto gb = quadnet::buchberger(gens);
      const auto& G = gb.generators();
      for (std::size_t a = 0; a < G.size() && ok; ++a)
        for (std::size_t b = a + 1; b < G.size() && ok; ++b)
          ok = oracle::divide_remainder(oracle::s_polynomial(G[a], G[b]), G).is_zero();
      for (const auto& g : gens) ok = ok && oracle::divide_remainder(g, G).is_zero();
      // Reduced: monic, and no term of one element divisible by another's leading monomial.
      for (std::size_t a = 0; a < G.size() && ok; ++a) {
        ok = G[a].leading_coefficient() == 1;
        for (std::size_t b = 0; b < G.size() && ok; ++b) {
          if (a == b) continue;
          for (const auto& [m, c] : G[a].terms())
            if (quadnet::divides(G[b].leading_monomial(), m)) ok = false;
        }
      }
      ok = ok && quadnet::satisfies_buchberger_criterion(gb);
    } catch (const std::exception& e) {
      ok = false;
      note = e.what();
    }
    t.record(ok, [&] {
      std::string s = "generators:";
      for (const auto& g : gens) s += " [" + g.to_string() + "]";
      return s + " " + note;
    });
  }
  return t.r;
}

namespace {

struct Target {
  std::string preset;
  std::string check;
  std::function<void(quadnet::Scenario&, std::mt19937_64&)> corrupt;
};

quadnet::Status run_one(const quadnet::Scenario& s, const std::string& check) {
  quadnet::Scenario one = s;
  one.checks.clear();
  for (const auto& c : s.checks)
    if (c.text == check) one.checks.push_back(c);
  if (one.checks.size() != 1) throw quadnet::DomainError("no check " + check);
  return quadnet::run_scenario(one).checks[0].status;
}

long nonzero(std::mt19937_64& rng) {
  long k = static_cast<long>(rng() % 19) - 9;
  return k == 0 ? 1 : k;
}

// Adds k * m to a named polynomial, with m a random monomial of the same bidegree.
void bump_poly(quadnet::Scenario& s, const std::string& name, std::mt19937_64& rng) {
  auto& body = s.defs.at(name).body;
  const auto bd = body.bidegree_of().degree;
  const auto basis = quadnet::monomial_basis(bd.a, bd.b, *s.vars);
  body += Polynomial::term(s.vars, body.field(), basis[rng() % basis.size()], nonzero(rng));
}

std::vector<Target> targets() {
  std::vector<Target> out;
  for (std::string name : {"B1", "B2", "B3"})
    out.push_back({"xspecial", "bundle_system(Q0, Q1, Q2, B1, B2, B3)",
                   [name](auto& s, auto& rng) { bump_poly(s, name, rng); }});
  out.push_back({"xspecial", "eliminate(Q0, Q1, Q2, Y)", [](auto& s, auto& rng) { bump_poly(s, "Y", rng); }});
  out.push_back({"xspecial", "discriminant(Q0, Q1, Q2, l0^2*l1^2*l2^2*F(l0, l1, l2))", [](auto& s, auto& rng) {
                   // Add a random octic monomial to the expected discriminant.
                   const unsigned a = rng() % 9, b = rng() % (9 - a);
                   const std::string m = "l0^" + std::to_string(a) + "*l1^" + std::to_string(b) + "*l2^" +
                                         std::to_string(8 - a - b);
                   for (auto& r : s.checks)
                     if (r.name == "discriminant") r.args[3] = "(" + r.args[3] + ") + " + std::to_string(nonzero(rng)) + "*" + m;
                 }});
  for (std::string name : {"B1", "B2", "B3"})
    out.push_back({"xsection", "bundle_system(Q0, Q1, Q2, B1, B2, B3)",
                   [name](auto& s, auto& rng) { bump_poly(s, name, rng); }});
  out.push_back({"xsection", "section(Q0, Q1, Q2, l0, l1, l2, 0, 0, 0)", [](auto& s, auto& rng) {
                   // Move one section coordinate off the section.
                   auto& c = s.checks;
                   for (auto& r : c)
                     if (r.name == "section") {
                       const std::size_t i = 3 + rng() % 6;
                       const char* mu[] = {"l0", "l1", "l2"};
                       r.args[i] = "(" + r.args[i] + ") + " + std::to_string(nonzero(rng)) + "*" + mu[rng() % 3];
                     }
                 }});
  for (std::string name : {"T1", "T2"})
    out.push_back({"lattice-sec4", name == "T1" ? "gram(Q1, T1)" : "gram(Q2, T2)", [name](auto& s, auto& rng) {
                     auto& t = s.tables.at(name);
                     const std::size_t i = rng() % 3, j = rng() % 3;
                     const mpq_class v = t.get(i, j) + nonzero(rng);
                     t.set(i, j, v);
                     t.set(j, i, v);
                   }});
  out.push_back({"prop-special", "maps_into(Y, phi, B1, B2, B3)", [](auto& s, auto& rng) {
                   auto& m = s.maps.at("phi");
                   const std::size_t i = rng() % m.components.size();
                   const auto bd = m.components[i].bidegree_of().degree;
                   const auto basis = quadnet::monomial_basis(bd.a, bd.b, *s.vars);
                   m.components[i] += Polynomial::term(s.vars, m.components[i].field(), basis[rng() % basis.size()],
                                                       nonzero(rng));
                 }});
  for (std::string chart : {"U1", "U3"})
    out.push_back({"prop-special", "chart(" + chart + ", Y, phi, B1, B2, B3)", [chart](auto& s, auto& rng) {
                     for (auto& c : s.charts) {
                       if (c.name != chart) continue;
                       // Mix one extension coordinate with another of the same block.
                       const std::size_t n = c.extension.size();
                       const bool mu_block = rng() % 2 == 0;
                       const std::size_t lo = mu_block ? 0 : 3, hi = mu_block ? 3 : n;
                       std::size_t i = lo + rng() % (hi - lo), j = lo + rng() % (hi - lo);
                       while (c.extension[j].is_zero() || j == i) j = lo + (j + 1 - lo) % (hi - lo);
                       c.extension[i] += c.extension[j].scaled(nonzero(rng));
                       c.errata.clear();
                     }
                   }});
  return out;
}

}  // namespace

SuiteResult fault_injection(int cases, std::uint64_t seed) {
  Tally t{{"fault injection"}};
  std::mt19937_64 rng(seed);
  const auto all = targets();
  std::map<std::string, quadnet::Scenario> presets;
  for (const auto& target : all)
    if (!presets.count(target.preset)) presets.emplace(target.preset, quadnet::load_preset(target.preset));
  // Every targeted check must pass on the unmodified data.
  for (const auto& target : all)
    if (run_one(presets.at(target.preset), target.check) != quadnet::Status::Pass)
      t.record(false, [&] { return "baseline " + target.preset + ": " + target.check + " does not pass"; });
  for (int i = 0; i < cases; ++i) {
    const Target& target = all[static_cast<std::size_t>(i) % all.size()];
    quadnet::Scenario s = presets.at(target.preset);
    target.corrupt(s, rng);
    const auto status = run_one(s, target.check);
    t.record(status == quadnet::Status::Fail,
             [&] { return target.preset + ": " + target.check + " still " + quadnet::to_string(status); });
  }
  return t.r;
}

std::vector<SuiteResult> all(int cases, std::uint64_t seed) {
  return {ring_axioms(cases, seed),          leibniz(cases, seed + 1),           substitution_homomorphism(cases, seed + 2),
          snf_postconditions(cases, seed + 3), spair_reduction(cases, seed + 4), fault_injection(cases, seed + 5)};
}

}  // namespace suites
