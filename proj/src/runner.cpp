#include "quadnet/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <future>
#include <mutex>
#include <sstream>
#include <thread>

#include "quadnet/bundle.hpp"
#include "quadnet/groebner.hpp"
#include "quadnet/jacobian.hpp"
#include "quadnet/lattice.hpp"
#include "quadnet/net.hpp"

#ifndef QUADNET_VERSION
#define QUADNET_VERSION "0.0.0"
#endif
#ifndef QUADNET_PRESET_DIR
#define QUADNET_PRESET_DIR "data/presets"
#endif

namespace quadnet {

namespace {

const std::vector<std::string>& registered_presets() {
  static const std::vector<std::string> names{"xspecial", "xsection", "xprime", "prop-special", "lattice-sec4"};
  return names;
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : sep) + s;
  return out;
}

// Graded pieces shared by the checks of one run. The first thread asking for
// a piece builds it; others wait on the same future.
class PieceCache {
 public:
  using Ptr = std::shared_ptr<const GradedPiece>;

  Ptr get(const QuadricNet& net, int a, int b, std::uint64_t p) {
    std::string key = join(net.vars()->names(), ",") + "|" + std::to_string(a) + "," + std::to_string(b) + "|" +
                      std::to_string(p);
    for (const auto& q : net.quadrics()) key += "|" + q.to_string();
    std::promise<Ptr> promise;
    std::shared_future<Ptr> future;
    bool owner = false;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = pieces_.find(key);
      if (it == pieces_.end()) {
        future = promise.get_future().share();
        pieces_.emplace(key, future);
        owner = true;
      } else {
        future = it->second;
      }
    }
    if (owner) {
      try {
        promise.set_value(std::make_shared<const GradedPiece>(net, a, b, PieceOptions{p, ColumnOrder::Degrevlex}));
      } catch (...) {
        promise.set_exception(std::current_exception());
      }
    }
    return future.get();
  }

 private:
  std::mutex mutex_;
  std::map<std::string, std::shared_future<Ptr>> pieces_;
};

struct Outcome {
  Status status = Status::Fail;
  std::string details;
  std::optional<std::string> witness;
};

Status pass_if(bool ok) { return ok ? Status::Pass : Status::Fail; }

class Args {
 public:
  Args(const Scenario& s, const CheckRequest& r, const RunOptions& o, PieceCache& cache)
      : scenario(s), request(r), options(o), cache_(cache) {}

  std::size_t size() const { return request.args.size(); }

  void arity(std::size_t n) const {
    if (size() != n) throw DomainError(request.name + " takes " + std::to_string(n) + " arguments, got " + std::to_string(size()));
  }
  void at_least(std::size_t n) const {
    if (size() < n)
      throw DomainError(request.name + " takes at least " + std::to_string(n) + " arguments, got " + std::to_string(size()));
  }

  const std::string& name(std::size_t i) const { return request.args.at(i); }

  Polynomial poly(std::size_t i) const { return scenario.parse(request.args.at(i), request.line, request.arg_columns.at(i)); }

  std::vector<Polynomial> polys(std::size_t from, std::size_t to) const {
    std::vector<Polynomial> out;
    for (std::size_t i = from; i < to; ++i) out.push_back(poly(i));
    return out;
  }

  long integer(std::size_t i) const {
    const std::string& a = request.args.at(i);
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(a, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != a.size()) throw DomainError("argument " + std::to_string(i + 1) + " must be an integer, got '" + a + "'");
    return v;
  }

  QuadricNet net() const { return QuadricNet({poly(0), poly(1), poly(2)}, name(0) + "," + name(1) + "," + name(2)); }

  // Main prime followed by a confirmation prime.
  std::vector<std::uint64_t> primes() const {
    const std::uint64_t confirm = options.prime == 65537 ? 65521 : 65537;
    return {options.prime, confirm};
  }

  PieceCache::Ptr piece(const QuadricNet& net, int a, int b, std::uint64_t p) const { return cache_.get(net, a, b, p); }

  const Scenario& scenario;
  const CheckRequest& request;
  const RunOptions& options;

 private:
  PieceCache& cache_;
};

std::string primes_text(const std::vector<std::uint64_t>& ps) {
  std::vector<std::string> s;
  for (auto p : ps) s.push_back(std::to_string(p));
  return join(s, ", ");
}

std::string ratio_text(const mpq_class& r) { return r == 1 ? "" : r.get_str() + " * "; }

// ---------------------------------------------------------------------------
// Nets and bundles

Outcome contains_line(const Args& a) {
  a.arity(3);
  const bool ok = contains_standard_line(a.net());
  return {pass_if(ok), ok ? "every quadric vanishes on x2 = ... = x7 = 0" : "some quadric has a term in x0, x1 alone",
          std::nullopt};
}

Outcome bundle_check(const Args& a) {
  a.arity(6);
  const BundleSystem sys = bundle_system(a.net());
  const std::array<const Polynomial*, 3> got{&sys.e1, &sys.e2, &sys.e3};
  Outcome o{Status::Pass, "", std::nullopt};
  std::vector<std::string> lines, bad;
  for (std::size_t i = 0; i < 3; ++i) {
    const Polynomial printed = a.poly(3 + i);
    const std::string label = "e" + std::to_string(i + 1);
    if (auto r = scalar_ratio(*got[i], printed)) {
      lines.push_back(label + " = " + ratio_text(*r) + a.name(3 + i));
    } else {
      o.status = Status::Fail;
      lines.push_back(label + " differs from " + a.name(3 + i));
      bad.push_back(label + " = " + got[i]->to_string());
    }
  }
  o.details = join(lines, "\n");
  if (!bad.empty()) o.witness = join(bad, "; ");
  return o;
}

Outcome section_check(const Args& a) {
  a.arity(9);
  const QuadricNet net = a.net();
  const BundleSystem sys = bundle_system(net);
  const std::vector<Polynomial> section = a.polys(3, 9);
  const SectionResult res = verify_section(sys, section);

  const auto& vars = *net.vars();
  std::map<std::size_t, Polynomial> assign;
  for (std::size_t i = 0; i < 6; ++i) assign.emplace(vars.mu_count() + 2 + i, section[i]);
  std::vector<std::string> lines;
  const std::array<const Polynomial*, 3> eqs{&sys.e1, &sys.e2, &sys.e3};
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<std::string> parts;
    for (std::size_t j = 0; j < vars.mu_count(); ++j)
      parts.push_back(vars.name(j) + "*(" + eqs[i]->partial(j).substitute(assign).to_string() + ")");
    lines.push_back("e" + std::to_string(i + 1) + ": " + join(parts, " + ") + " = " + res.residuals[i].to_string());
  }
  Outcome o{pass_if(res.ok), join(lines, "\n"), std::nullopt};
  if (!res.ok) {
    std::vector<std::string> w;
    for (std::size_t i = 0; i < 3; ++i)
      if (!res.residuals[i].is_zero()) w.push_back("e" + std::to_string(i + 1) + " -> " + res.residuals[i].to_string());
    o.witness = join(w, "; ");
  }
  return o;
}

Outcome eliminate_check(const Args& a) {
  a.arity(4);
  const BundleSystem sys = bundle_system(a.net());
  const Elimination el = eliminate_to_22(sys);
  const Polynomial printed = a.poly(3);
  std::vector<std::string> names;
  for (std::size_t v : el.eliminated) names.push_back(sys.vars()->name(v));
  std::string details = "eliminated " + join(names, ", ") + "; denominator " + el.denominator.to_string() +
                        "; removed factor " + el.content.to_string();
  if (auto r = scalar_ratio(el.result, printed))
    return {Status::Pass, details + "\nresult = " + ratio_text(*r) + a.name(3), std::nullopt};
  return {Status::Fail, details, "result " + el.result.to_string()};
}

Outcome discriminant_check(const Args& a) {
  a.arity(4);
  const Polynomial octic = discriminant_octic(bundle_system(a.net()));
  const Polynomial printed = a.poly(3);
  const auto bd = octic.bidegree_of();
  std::string details = "octic of bidegree (" + std::to_string(bd.degree.a) + "," + std::to_string(bd.degree.b) + ")";
  if (auto r = scalar_ratio(octic, printed)) return {Status::Pass, details + " = " + ratio_text(*r) + a.name(3), std::nullopt};
  return {Status::Fail, details, "octic " + octic.to_string()};
}

std::vector<std::uint64_t> smoothness_primes(const RunOptions& o) {
  std::vector<std::uint64_t> ps{101, 32003, 65537};
  if (o.prime_given) {
    ps.erase(std::remove(ps.begin(), ps.end(), o.prime), ps.end());
    ps.insert(ps.begin(), o.prime);
  }
  return ps;
}

std::string certificate_text(const SmoothnessCertificate& c) {
  std::string s = to_string(c.status) + "; primes tried: " + primes_text(c.primes_tried);
  if (c.status == SmoothnessCertificate::Status::CertifiedSmooth) {
    std::vector<std::string> pw;
    for (unsigned k : c.powers) pw.push_back(std::to_string(k));
    s += "\nsingular-locus ideal mod " + std::to_string(c.prime) + ": reduced basis of " + std::to_string(c.basis_size) +
         " elements, x_i^k in the ideal for k = " + join(pw, ",") +
         "\nsmooth reduction of a flat family certifies smoothness over Q";
  }
  return s;
}

Outcome smoothness(const Args& a) {
  a.arity(3);
  const auto c = smoothness_check_with_retry(a.net(), smoothness_primes(a.options));
  Outcome o;
  o.details = certificate_text(c);
  switch (c.status) {
    case SmoothnessCertificate::Status::CertifiedSmooth:
      o.status = Status::Pass;
      break;
    case SmoothnessCertificate::Status::Inconclusive:
      o.status = Status::Inconclusive;
      break;
    case SmoothnessCertificate::Status::SingularModP:
      o.status = Status::Fail;
      o.witness = c.witness;
      break;
  }
  return o;
}

Outcome no_certificate(const Args& a) {
  a.arity(3);
  const auto c = smoothness_check_with_retry(a.net(), smoothness_primes(a.options));
  Outcome o;
  o.details = certificate_text(c);
  if (!c.witness.empty()) o.details += "\n" + c.witness;
  switch (c.status) {
    case SmoothnessCertificate::Status::CertifiedSmooth:
      o.status = Status::Fail;
      o.witness = "certified smooth mod " + std::to_string(c.prime);
      break;
    case SmoothnessCertificate::Status::Inconclusive:
      o.status = Status::Inconclusive;
      break;
    case SmoothnessCertificate::Status::SingularModP:
      o.status = Status::Pass;
      break;
  }
  return o;
}

// ---------------------------------------------------------------------------
// Jacobian ring

struct Dim {
  std::size_t value = 0;
  std::string how;
};

// Dimension per prime, or one exact value.
std::vector<Dim> piece_dims(const Args& a, const QuadricNet& net, int i, int j, std::vector<std::uint64_t> primes) {
  std::vector<Dim> out;
  if (a.options.exact) {
    const auto cert = certify_dimension(net, i, j);
    out.push_back({cert.dimension, cert.exact ? "exact over Q (" + std::to_string(cert.primes.size()) + " primes)"
                                              : "upper bound only; lift to Q did not verify"});
    if (!cert.exact) out.push_back({cert.dimension + 1, "unverified"});
    return out;
  }
  for (auto p : primes) out.push_back({a.piece(net, i, j, p)->dimension(), "mod " + std::to_string(p)});
  return out;
}

Outcome piece_dimension(const Args& a) {
  a.at_least(6);
  const QuadricNet net = a.net();
  const int i = static_cast<int>(a.integer(3)), j = static_cast<int>(a.integer(4));
  const auto expected = static_cast<std::size_t>(a.integer(5));
  std::vector<std::uint64_t> primes;
  for (std::size_t k = 6; k < a.size(); ++k) primes.push_back(static_cast<std::uint64_t>(a.integer(k)));
  if (primes.empty()) primes = a.primes();
  const auto dims = piece_dims(a, net, i, j, primes);
  std::vector<std::string> parts;
  bool agree = true, match = true;
  for (const auto& d : dims) {
    parts.push_back(std::to_string(d.value) + " (" + d.how + ")");
    agree = agree && d.value == dims[0].value;
    match = match && d.value == expected;
  }
  Outcome o;
  o.details = "dim R(" + std::to_string(i) + "," + std::to_string(j) + ") = " + join(parts, ", ") + "; expected " +
              std::to_string(expected);
  o.status = !agree ? Status::Inconclusive : pass_if(match);
  if (!match && agree) o.witness = "dimension " + std::to_string(dims[0].value);
  return o;
}

Outcome hodge(const Args& a) {
  a.arity(3);
  const QuadricNet net = a.net();
  const std::array<std::pair<int, int>, 3> degs{{{1, 0}, {2, 2}, {3, 4}}};
  const std::array<std::size_t, 3> expected{3, 37, 3};
  std::vector<std::string> lines{"R(0,-2) = 0 (negative degree)"};
  bool agree = true, match = true;
  std::array<std::size_t, 3> first{};
  for (std::size_t k = 0; k < 3; ++k) {
    const auto dims = piece_dims(a, net, degs[k].first, degs[k].second, a.primes());
    std::vector<std::string> parts;
    for (const auto& d : dims) {
      parts.push_back(std::to_string(d.value) + " (" + d.how + ")");
      agree = agree && d.value == dims[0].value;
    }
    first[k] = dims[0].value;
    match = match && dims[0].value == expected[k];
    lines.push_back("R(" + std::to_string(degs[k].first) + "," + std::to_string(degs[k].second) + ") = " + join(parts, ", "));
  }
  lines.push_back(std::string("h^{3,1} = h^{1,3}: ") + (first[0] == first[2] ? "yes" : "no"));
  lines.push_back("expected primitive Hodge numbers 0, 3, 37, 3");
  Outcome o{!agree ? Status::Inconclusive : pass_if(match && first[0] == first[2]), join(lines, "\n"), std::nullopt};
  if (agree && !match)
    o.witness = "dimensions " + std::to_string(first[0]) + ", " + std::to_string(first[1]) + ", " + std::to_string(first[2]);
  return o;
}

Outcome basis_check(const Args& a) {
  a.at_least(6);
  const QuadricNet net = a.net();
  const int i = static_cast<int>(a.integer(3)), j = static_cast<int>(a.integer(4));
  const auto cands = a.polys(5, a.size());
  std::vector<std::string> lines;
  bool ok = true;
  for (auto p : a.primes()) {
    const auto piece = a.piece(net, i, j, p);
    const bool b = verify_basis(*piece, cands);
    ok = ok && b;
    lines.push_back("mod " + std::to_string(p) + ": dim " + std::to_string(piece->dimension()) + ", candidates " +
                    (b ? "form a basis" : "do not form a basis"));
  }
  if (ok) lines.push_back("spanning mod p implies spanning over Q");
  return {pass_if(ok), join(lines, "\n"), std::nullopt};
}

Outcome period(const Args& a) {
  a.arity(4);
  const QuadricNet net = a.net();
  const Polynomial gamma = a.poly(3);
  std::vector<std::string> lines;
  bool ok = true;
  for (auto p : a.primes()) {
    const auto src = a.piece(net, 1, 2, p);
    const auto tgt = a.piece(net, 3, 4, p);
    const ExactMatrix m = multiplication_map(*src, *tgt, gamma);
    const std::size_t r = m.rows() == 0 || m.cols() == 0 ? 0 : rank(m).rank;
    ok = ok && r == tgt->dimension();
    lines.push_back("mod " + std::to_string(p) + ": R(1,2) -> R(3,4) has rank " + std::to_string(r) + " (dims " +
                    std::to_string(src->dimension()) + " -> " + std::to_string(tgt->dimension()) + ")");
  }
  if (ok) lines.push_back("surjective mod p implies surjective over Q");
  return {pass_if(ok), join(lines, "\n"), std::nullopt};
}

// ---------------------------------------------------------------------------
// Birational map and charts

Outcome maps_into_check(const Args& a) {
  a.at_least(3);
  const Polynomial domain = a.poly(0);
  const PolyMap& map = a.scenario.map(a.name(1));
  const auto targets = a.polys(2, a.size());
  const MapsIntoResult r = maps_into(domain, map, targets);
  std::vector<std::string> lines;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const std::string lhs = a.name(2 + i) + " o " + a.name(1);
    if (r.compositions[i].is_zero())
      lines.push_back(lhs + " = 0");
    else if (r.quotients[i])
      lines.push_back(lhs + " = (" + r.quotients[i]->to_string() + ") * " + a.name(0));
    else
      lines.push_back(lhs + " is not divisible by " + a.name(0));
  }
  Outcome o{pass_if(r.ok), join(lines, "\n"), std::nullopt};
  if (r.witness) o.witness = "residual " + r.witness->to_string();
  return o;
}

Outcome indeterminacy(const Args& a) {
  a.at_least(3);
  const PolyMap& map = a.scenario.map(a.name(0));
  const Polynomial domain = a.poly(1);
  std::vector<NamedLocus> loci;
  for (std::size_t i = 2; i < a.size(); ++i) loci.push_back(a.scenario.locus(a.name(i)));
  const auto results = indeterminacy_components(map, domain, loci);
  std::vector<std::string> lines, bad;
  bool ok = true;
  for (const auto& r : results) {
    ok = ok && r.ok();
    lines.push_back(r.name + ": " + (r.on_domain ? "lies on " + a.name(1) : "not on " + a.name(1)) + "; " +
                    (r.vanishing_block ? "block (" + *r.vanishing_block + ") vanishes" : "no target block vanishes"));
    if (!r.ok()) bad.push_back(r.name);
  }
  Outcome o{pass_if(ok), join(lines, "\n"), std::nullopt};
  if (!bad.empty()) o.witness = "map defined somewhere on " + join(bad, ", ");
  return o;
}

std::string chart_details(const ChartReport& r) {
  std::vector<std::string> lines;
  auto flag = [](bool b) { return b ? "ok" : "FAILED"; };
  lines.push_back(std::string("pullback = ") + (r.unit < 0 ? "-" : "") + "(exceptional)^" + std::to_string(r.exponent) +
                  " * equation: " + flag(r.pullback_matches) + (r.equation_derived ? " (equation derived)" : ""));
  lines.push_back(std::string("equation on the exceptional divisor: ") + flag(r.exceptional_divisor_matches));
  lines.push_back(std::string("extension lands in the target: ") + flag(r.extension_lands_in_target));
  lines.push_back(std::string("extension agrees with the map: ") + flag(r.extension_agrees_with_map));
  lines.push_back(std::string("image of the exceptional divisor: ") + flag(r.exceptional_image_matches));
  if (r.undefined_locus_matches) lines.push_back(std::string("undefined locus: ") + flag(*r.undefined_locus_matches));
  for (const auto& e : r.errata_applied) lines.push_back("erratum applied: " + e);
  for (const auto& n : r.notes) lines.push_back("note: " + n);
  return join(lines, "\n");
}

Outcome chart_check(const Args& a) {
  a.at_least(4);
  std::vector<ChartSpec> chain;
  for (const ChartSpec* c = &a.scenario.chart(a.name(0));;) {
    chain.insert(chain.begin(), *c);
    if (c->parent.empty()) break;
    c = &a.scenario.chart(c->parent);
    if (chain.size() > a.scenario.charts.size()) throw DomainError("chart parents form a cycle");
  }
  const auto report =
      verify_prop_special(a.poly(1), a.scenario.map(a.name(2)), a.polys(3, a.size()), {}, chain);
  const ChartReport& r = report.charts.back();
  Outcome o{pass_if(r.pass()), chart_details(r), std::nullopt};
  if (!r.witnesses.empty()) o.witness = join(r.witnesses, "; ");
  return o;
}

Outcome prop_special(const Args& a) {
  a.at_least(3);
  const auto report =
      verify_prop_special(a.poly(0), a.scenario.map(a.name(1)), a.polys(2, a.size()), a.scenario.loci, a.scenario.charts);
  std::vector<std::string> lines{std::string("maps into target: ") + (report.maps.ok ? "ok" : "FAILED")};
  std::vector<std::string> witnesses;
  for (const auto& l : report.loci) lines.push_back("locus " + l.name + ": " + (l.ok() ? "ok" : "FAILED"));
  for (const auto& c : report.charts) {
    lines.push_back("chart " + c.name + ": " + (c.pass() ? "ok" : "FAILED") +
                    (c.errata_applied.empty() ? "" : " (" + std::to_string(c.errata_applied.size()) + " errata)"));
    for (const auto& w : c.witnesses) witnesses.push_back(c.name + ": " + w);
  }
  for (const auto& w : report.warnings) lines.push_back("warning: " + w);
  Outcome o{pass_if(report.pass()), join(lines, "\n"), std::nullopt};
  if (!witnesses.empty()) o.witness = join(witnesses, "; ");
  return o;
}

// ---------------------------------------------------------------------------
// Lattices

std::string matrix_text(const ExactMatrix& m) {
  std::vector<std::string> rows;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::vector<std::string> e;
    for (std::size_t j = 0; j < m.cols(); ++j) e.push_back(m.get(i, j).get_str());
    rows.push_back("[" + join(e, ",") + "]");
  }
  return "[" + join(rows, ",") + "]";
}

Outcome chow_class(const Args& a) {
  a.arity(2);
  const ChowClass& x = a.scenario.chow(a.name(0));
  const ChowClass& y = a.scenario.chow(a.name(1));
  const bool ok = x == y;
  Outcome o{pass_if(ok), a.name(0) + " = " + x.to_string(), std::nullopt};
  if (!ok) o.witness = a.name(1) + " = " + y.to_string();
  return o;
}

Outcome gram(const Args& a) {
  a.arity(2);
  const GramLattice g = gram_table(a.scenario.chow(a.name(0)));
  const ExactMatrix& printed = a.scenario.table(a.name(1));
  const bool ok = g.matrix == printed;
  Outcome o{pass_if(ok), "basis (" + join(g.labels, ", ") + "): " + matrix_text(g.matrix), std::nullopt};
  if (!ok) o.witness = a.name(1) + " = " + matrix_text(printed);
  return o;
}

Outcome rank_mod2(const Args& a) {
  a.arity(2);
  const GramLattice g(a.scenario.table(a.name(0)));
  const auto expected = static_cast<std::size_t>(a.integer(1));
  return {pass_if(g.rank_mod2 == expected), "rank mod 2 of " + a.name(0) + " = " + std::to_string(g.rank_mod2),
          std::nullopt};
}

Outcome discriminant_group_check(const Args& a) {
  a.at_least(2);
  const GramLattice g(a.scenario.table(a.name(0)));
  std::vector<mpz_class> expected;
  for (std::size_t i = 1; i < a.size(); ++i) expected.emplace_back(a.integer(i));
  std::string details = "elementary divisors";
  for (const auto& d : g.elementary_divisors) details += " " + d.get_str();
  details += "; discriminant group " + format_group(g.discriminant) + "; determinant " + g.det.get_str();
  return {pass_if(g.det != 0 && g.discriminant == expected), details, std::nullopt};
}

Outcome inequivalent(const Args& a) {
  a.arity(2);
  const TwoAdicReport r = two_adic_compare(GramLattice(a.scenario.table(a.name(0))), GramLattice(a.scenario.table(a.name(1))));
  std::vector<std::string> lines{
      "ranks mod 2: " + std::to_string(r.rank_mod2_a) + " vs " + std::to_string(r.rank_mod2_b),
      "discriminant groups: " + format_group(r.discriminant_a) + " vs " + format_group(r.discriminant_b),
      "verdict: " + r.verdict,
      "context: " + r.context,
  };
  return {pass_if(r.verdict == "inequivalent"), join(lines, "\n"), std::nullopt};
}

using CheckFn = std::function<Outcome(const Args&)>;

const std::map<std::string, CheckFn>& registry() {
  static const std::map<std::string, CheckFn> r{
      {"contains_line", contains_line},
      {"bundle_system", bundle_check},
      {"section", section_check},
      {"eliminate", eliminate_check},
      {"discriminant", discriminant_check},
      {"smoothness", smoothness},
      {"no_certificate", no_certificate},
      {"hodge", hodge},
      {"piece_dimension", piece_dimension},
      {"basis", basis_check},
      {"period_surjective", period},
      {"maps_into", maps_into_check},
      {"indeterminacy", indeterminacy},
      {"chart", chart_check},
      {"prop_special", prop_special},
      {"chow_class", chow_class},
      {"gram", gram},
      {"rank_mod2", rank_mod2},
      {"discriminant_group", discriminant_group_check},
      {"inequivalent", inequivalent},
  };
  return r;
}

CheckResult run_check(const Scenario& s, const CheckRequest& req, const RunOptions& o, PieceCache& cache) {
  CheckResult res;
  res.name = req.text;
  const auto start = std::chrono::steady_clock::now();
  try {
    auto it = registry().find(req.name);
    if (it == registry().end()) {
      std::vector<std::string> known;
      for (const auto& [k, v] : registry()) known.push_back(k);
      throw DomainError("unknown check '" + req.name + "'; known checks: " + join(known, ", "));
    }
    Outcome out = it->second(Args(s, req, o, cache));
    res.status = out.status;
    res.details = std::move(out.details);
    res.witness = std::move(out.witness);
  } catch (const std::exception& e) {
    res.status = Status::Fail;
    res.details = std::string("error: ") + e.what();
  }
  res.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace

UnknownPresetError::UnknownPresetError(const std::string& name)
    : Error("unknown preset '" + name + "'; valid presets: " + join(preset_names(), ", ")) {}

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass:
      return "pass";
    case Status::Fail:
      return "fail";
    case Status::Inconclusive:
      return "inconclusive";
  }
  return "fail";
}

Status Report::verdict() const {
  bool inconclusive = false;
  for (const auto& c : checks) {
    if (c.status == Status::Fail) return Status::Fail;
    inconclusive = inconclusive || c.status == Status::Inconclusive;
  }
  return inconclusive ? Status::Inconclusive : Status::Pass;
}

const char* tool_version() { return QUADNET_VERSION; }

Report run_scenario(const Scenario& scenario, const RunOptions& options) {
  Report report;
  report.version = tool_version();
  report.scenario = scenario.name;
  const std::size_t n = scenario.checks.size();
  report.checks.resize(n);
  PieceCache cache;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) report.checks[i] = run_check(scenario, scenario.checks[i], options, cache);
  };
  const std::size_t threads = std::min<std::size_t>(std::max(1u, options.jobs), n);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return report;
}

std::vector<std::string> preset_names() {
  auto names = registered_presets();
  names.push_back("all");
  return names;
}

std::filesystem::path preset_dir() {
  if (const char* env = std::getenv("QUADNET_PRESET_DIR"); env && *env) return env;
  return QUADNET_PRESET_DIR;
}

std::filesystem::path preset_path(std::string_view name) {
  const auto& names = registered_presets();
  if (std::find(names.begin(), names.end(), name) == names.end()) throw UnknownPresetError(std::string(name));
  return preset_dir() / (std::string(name) + ".scn");
}

Scenario load_preset(std::string_view name) { return load_scenario(preset_path(name)); }

Report run_preset(std::string_view name, const RunOptions& options) {
  if (name != "all") return run_scenario(load_preset(name), options);
  Report all;
  all.version = tool_version();
  all.scenario = "all";
  for (const auto& p : registered_presets()) {
    Report r = run_scenario(load_preset(p), options);
    for (auto& c : r.checks) {
      c.name = p + ": " + c.name;
      all.checks.push_back(std::move(c));
    }
  }
  return all;
}

std::string dump_preset(std::string_view name) {
  if (name == "all") throw DomainError("'all' is a collection of presets, not a single scenario");
  return load_preset(name).flattened;
}

nlohmann::ordered_json to_json(const Report& report) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["version"] = report.version;
  j["scenario"] = report.scenario;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["status"] = to_string(c.status);
    e["details"] = c.details;
    if (c.witness) e["witness"] = *c.witness;
    e["millis"] = std::round(c.millis * 1000.0) / 1000.0;
    j["checks"].push_back(std::move(e));
  }
  j["verdict"] = to_string(report.verdict());
  return j;
}

std::string to_text(const Report& report) {
  std::ostringstream out;
  out << "quadnet " << report.version << "  scenario " << report.scenario << "\n";
  std::size_t counts[3] = {0, 0, 0};
  for (Status want : {Status::Fail, Status::Inconclusive, Status::Pass}) {
    for (const auto& c : report.checks) {
      if (c.status != want) continue;
      ++counts[static_cast<int>(want)];
      const char* tag = want == Status::Pass ? "PASS" : want == Status::Fail ? "FAIL" : "INCONCLUSIVE";
      out << tag << "  " << c.name << "  [" << static_cast<long>(std::lround(c.millis)) << " ms]\n";
      std::istringstream lines(c.details);
      for (std::string line; std::getline(lines, line);) out << "      " << line << "\n";
      if (c.witness) out << "      witness: " << *c.witness << "\n";
    }
  }
  out << "verdict: " << to_string(report.verdict()) << " (" << counts[0] << " passed, " << counts[1] << " failed, "
      << counts[2] << " inconclusive)\n";
  return out.str();
}

int exit_code(const Report& report) {
  switch (report.verdict()) {
    case Status::Pass:
      return 0;
    case Status::Fail:
      return 1;
    case Status::Inconclusive:
      return 2;
  }
  return 1;
}

}  // namespace quadnet
