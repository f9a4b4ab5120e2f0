#include "quadnet/birational.hpp"

#include <algorithm>
#include <set>

#include "quadnet/error.hpp"
#include "quadnet/groebner.hpp"

namespace quadnet {

namespace {

bool zero_or_divisible(const Polynomial& f, const Polynomial& g) { return f.is_zero() || exact_divide(f, g).has_value(); }

// a and b are nonzero multiples of each other by a constant.
bool proportional(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return false;
  return a.scaled(b.leading_coefficient()) == b.scaled(a.leading_coefficient());
}

Polynomial chain_apply(Polynomial f, const std::vector<std::map<std::size_t, Polynomial>>& chain) {
  for (const auto& s : chain) f = f.substitute(s);
  return f;
}

std::string describe_field(Erratum::Field f, std::size_t index) {
  std::string s = to_string(f);
  if (f == Erratum::Field::Extension || f == Erratum::Field::Image) s += "[" + std::to_string(index + 1) + "]";
  return s;
}

}  // namespace

void PolyMap::validate() const {
  if (targets.size() != components.size()) throw DomainError("map has " + std::to_string(targets.size()) +
                                                             " targets but " + std::to_string(components.size()) +
                                                             " components");
  std::set<std::size_t> seen(targets.begin(), targets.end());
  if (seen.size() != targets.size()) throw DomainError("map lists a target coordinate twice");
  if (std::all_of(components.begin(), components.end(), [](const Polynomial& p) { return p.is_zero(); }))
    throw DomainError("map components are all zero");
}

std::map<std::size_t, Polynomial> PolyMap::assignment() const {
  std::map<std::size_t, Polynomial> a;
  for (std::size_t i = 0; i < targets.size(); ++i) a.insert_or_assign(targets[i], components[i]);
  return a;
}

Polynomial compose(const PolyMap& map, const Polynomial& f) {
  map.validate();
  std::set<std::size_t> t(map.targets.begin(), map.targets.end());
  for (std::size_t v = 0; v < f.vars()->size(); ++v)
    if (f.involves(v) && !t.count(v))
      throw DomainError("'" + f.vars()->name(v) + "' is not a target coordinate of the map");
  return f.substitute(map.assignment());
}

Polynomial division_residual(const Polynomial& f, const Polynomial& g) {
  if (g.is_zero()) throw DomainError("division by the zero polynomial");
  GroebnerBasis gb(g.vars(), g.field(), {g.monic()});
  return gb.normal_form(f);
}

MapsIntoResult maps_into(const Polynomial& domain_eq, const PolyMap& map, const std::vector<Polynomial>& target_eqs) {
  if (domain_eq.is_zero()) throw DomainError("domain equation is zero");
  MapsIntoResult r;
  r.ok = true;
  for (const auto& e : target_eqs) {
    Polynomial c = compose(map, e);
    std::optional<Polynomial> q = c.is_zero() ? std::optional<Polynomial>(Polynomial(c.vars(), c.field()))
                                              : exact_divide(c, domain_eq);
    if (!q && r.ok) {
      r.ok = false;
      r.witness = division_residual(c, domain_eq);
    }
    r.compositions.push_back(std::move(c));
    r.quotients.push_back(std::move(q));
  }
  return r;
}

std::vector<LocusResult> indeterminacy_components(const PolyMap& map, const Polynomial& domain_eq,
                                                  const std::vector<NamedLocus>& loci) {
  map.validate();
  const auto& vars = *domain_eq.vars();
  std::vector<std::size_t> mu_block, x_block;
  for (std::size_t i = 0; i < map.targets.size(); ++i) (vars.is_mu(map.targets[i]) ? mu_block : x_block).push_back(i);

  std::vector<LocusResult> out;
  for (const auto& locus : loci) {
    if (locus.generators.empty()) throw DomainError("locus '" + locus.name + "' has no equations");
    GroebnerBasis gb = buchberger(locus.generators);
    LocusResult r;
    r.name = locus.name;
    r.on_domain = ideal_member(domain_eq, gb);
    auto block_vanishes = [&](const std::vector<std::size_t>& block) {
      return !block.empty() && std::all_of(block.begin(), block.end(), [&](std::size_t i) {
        return ideal_member(map.components[i], gb);
      });
    };
    if (block_vanishes(mu_block))
      r.vanishing_block = "mu-block";
    else if (block_vanishes(x_block))
      r.vanishing_block = "x-block";
    out.push_back(std::move(r));
  }
  return out;
}

std::string to_string(Erratum::Field f) {
  switch (f) {
    case Erratum::Field::Equation:
      return "equation";
    case Erratum::Field::ExceptionalLocus:
      return "exceptional_locus";
    case Erratum::Field::Extension:
      return "extension";
    case Erratum::Field::Image:
      return "image";
  }
  return "?";
}

ChartSpec effective_chart(const ChartSpec& chart) {
  ChartSpec c = chart;
  for (const auto& e : chart.errata) {
    switch (e.field) {
      case Erratum::Field::Equation:
        c.equation = e.corrected;
        break;
      case Erratum::Field::ExceptionalLocus:
        c.exceptional_locus = e.corrected;
        break;
      case Erratum::Field::Extension:
        c.extension.at(e.index) = e.corrected;
        break;
      case Erratum::Field::Image:
        c.image.at(e.index) = e.corrected;
        break;
    }
  }
  c.errata.clear();
  return c;
}

bool ChartReport::pass() const {
  return pullback_matches && exceptional_divisor_matches && extension_lands_in_target && extension_agrees_with_map &&
         exceptional_image_matches && undefined_locus_matches.value_or(true);
}

ChartReport verify_chart(const ChartSpec& chart, const ChartContext& ctx) {
  if (!chart.exceptional) throw DomainError("chart " + chart.name + " has no exceptional divisor");
  if (chart.extension.empty()) throw DomainError("chart " + chart.name + " has no extension");
  if (chart.image.empty()) throw DomainError("chart " + chart.name + " has no exceptional image");
  ctx.map.validate();
  if (chart.extension.size() != ctx.map.targets.size() || chart.image.size() != ctx.map.targets.size())
    throw DomainError("chart " + chart.name + ": extension and image need one entry per target coordinate");

  ChartReport r;
  r.name = chart.name;
  const Polynomial& exc = *chart.exceptional;

  auto errata_for = [&](Erratum::Field f) {
    std::vector<const Erratum*> v;
    for (const auto& e : chart.errata)
      if (e.field == f) v.push_back(&e);
    return v;
  };
  auto record = [&](const Erratum& e, const Polynomial& printed) {
    r.errata_applied.push_back(describe_field(e.field, e.index) + ": printed " + printed.to_string() + " -> " +
                               e.corrected.to_string() + (e.note.empty() ? "" : " (" + e.note + ")"));
  };
  auto unused = [&](Erratum::Field f) {
    for (const Erratum* e : errata_for(f))
      r.notes.push_back("erratum for " + describe_field(f, e->index) + " not needed: printed data verifies");
  };

  // (1) pullback = unit * exc^k * equation
  const Polynomial pullback = ctx.domain_eq.substitute(chart.substitution);
  auto match = [&](const Polynomial& eq) -> bool {
    if (eq.is_zero()) return false;
    Polynomial power = Polynomial::constant(eq.vars(), eq.field(), 1);
    for (unsigned k = 0; k <= 8; ++k, power *= exc) {
      const Polynomial target = power * eq;
      for (int unit : {1, -1}) {
        if (pullback == target.scaled(unit)) {
          r.exponent = k;
          r.unit = unit;
          return true;
        }
      }
    }
    return false;
  };
  Polynomial eq(pullback.vars(), pullback.field());
  if (chart.equation) {
    eq = *chart.equation;
    if (match(eq)) {
      r.pullback_matches = true;
      unused(Erratum::Field::Equation);
    } else {
      for (const Erratum* e : errata_for(Erratum::Field::Equation)) {
        if (match(e->corrected)) {
          r.pullback_matches = true;
          record(*e, eq);
          eq = e->corrected;
          break;
        }
      }
      if (!r.pullback_matches) r.witnesses.push_back("pullback " + pullback.to_string() + " is not a unit times a power of " + exc.to_string() + " times the chart equation");
    }
  } else {
    Polynomial q = pullback;
    unsigned k = 0;
    while (!q.is_zero() && k < 64) {
      auto d = exact_divide(q, exc);
      if (!d) break;
      q = std::move(*d);
      ++k;
    }
    eq = q;
    r.exponent = k;
    r.equation_derived = true;
    r.pullback_matches = !q.is_zero();
    r.notes.push_back("equation not printed; derived as pullback / (" + exc.to_string() + ")^" + std::to_string(k) + " = " + q.to_string());
    if (!r.pullback_matches) r.witnesses.push_back("pullback vanishes identically");
  }
  r.equation = eq;

  // (2) the equation restricted to the exceptional divisor
  if (!exc.substitute(chart.specialization).is_zero()) {
    r.witnesses.push_back("specialization does not kill the exceptional factor " + exc.to_string());
  } else if (!chart.exceptional_locus) {
    r.exceptional_divisor_matches = true;
    r.notes.push_back("exceptional divisor equation not printed");
  } else {
    const Polynomial restricted = eq.substitute(chart.specialization);
    if (proportional(restricted, *chart.exceptional_locus)) {
      r.exceptional_divisor_matches = true;
      unused(Erratum::Field::ExceptionalLocus);
    } else {
      for (const Erratum* e : errata_for(Erratum::Field::ExceptionalLocus)) {
        if (proportional(restricted, e->corrected)) {
          r.exceptional_divisor_matches = true;
          record(*e, *chart.exceptional_locus);
          break;
        }
      }
      if (!r.exceptional_divisor_matches)
        r.witnesses.push_back("equation on the exceptional divisor is " + restricted.to_string());
    }
  }

  // (3), (4) extension: lands in the target and agrees with the map
  const auto& vars = *ctx.domain_eq.vars();
  std::vector<std::size_t> mu_block, x_block;
  for (std::size_t i = 0; i < ctx.map.targets.size(); ++i)
    (vars.is_mu(ctx.map.targets[i]) ? mu_block : x_block).push_back(i);
  std::vector<Polynomial> pulled;
  for (const auto& c : ctx.map.components) pulled.push_back(chain_apply(c, ctx.chain).substitute(chart.substitution));

  struct ExtOutcome {
    bool lands = true;
    bool agrees = true;
    std::vector<std::string> witnesses;
  };
  auto check_extension = [&](const std::vector<Polynomial>& ext) {
    ExtOutcome o;
    PolyMap m{ctx.map.targets, ext};
    const auto a = m.assignment();
    for (std::size_t i = 0; i < ctx.target_eqs.size(); ++i) {
      const Polynomial c = ctx.target_eqs[i].substitute(a);
      if (!zero_or_divisible(c, eq)) {
        o.lands = false;
        o.witnesses.push_back("target equation " + std::to_string(i + 1) + " composed with the extension leaves residual " +
                              division_residual(c, eq).to_string());
      }
    }
    for (const auto* block : {&mu_block, &x_block}) {
      auto nonzero_mod_eq = [&](const std::vector<Polynomial>& v) {
        return std::any_of(block->begin(), block->end(), [&](std::size_t i) { return !zero_or_divisible(v[i], eq); });
      };
      if (!nonzero_mod_eq(ext) || !nonzero_mod_eq(pulled)) {
        o.agrees = false;
        o.witnesses.push_back("a coordinate block of the extension vanishes on the chart");
        continue;
      }
      for (std::size_t a1 = 0; a1 < block->size(); ++a1)
        for (std::size_t b1 = a1 + 1; b1 < block->size(); ++b1) {
          const std::size_t i = (*block)[a1], j = (*block)[b1];
          const Polynomial minor = ext[i] * pulled[j] - ext[j] * pulled[i];
          if (!zero_or_divisible(minor, eq)) {
            o.agrees = false;
            o.witnesses.push_back("extension not proportional to the map at coordinates " + std::to_string(i + 1) +
                                  "," + std::to_string(j + 1));
          }
        }
    }
    return o;
  };

  std::vector<Polynomial> ext = chart.extension;
  ExtOutcome eo = check_extension(ext);
  const auto ext_errata = errata_for(Erratum::Field::Extension);
  if ((!eo.lands || !eo.agrees) && !ext_errata.empty()) {
    std::vector<Polynomial> corrected = ext;
    for (const Erratum* e : ext_errata) corrected.at(e->index) = e->corrected;
    ExtOutcome co = check_extension(corrected);
    if (co.lands && co.agrees) {
      for (const Erratum* e : ext_errata) record(*e, ext.at(e->index));
      ext = std::move(corrected);
      eo = co;
    }
  } else if (!ext_errata.empty()) {
    unused(Erratum::Field::Extension);
  }
  r.extension_lands_in_target = eo.lands;
  r.extension_agrees_with_map = eo.agrees;
  r.witnesses.insert(r.witnesses.end(), eo.witnesses.begin(), eo.witnesses.end());

  // (5) image of the exceptional divisor
  auto restrict_ext = [&](const Polynomial& p) { return p.substitute(chart.specialization).substitute(chart.dehomogenize); };
  std::vector<Polynomial> got;
  for (const auto& c : ext) got.push_back(restrict_ext(c));
  auto image_mismatch = [&](const std::vector<Polynomial>& img) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < img.size(); ++i)
      if (got[i] != img[i].substitute(chart.dehomogenize)) return i;
    return std::nullopt;
  };
  std::vector<Polynomial> img = chart.image;
  auto bad = image_mismatch(img);
  const auto img_errata = errata_for(Erratum::Field::Image);
  if (bad && !img_errata.empty()) {
    std::vector<Polynomial> corrected = img;
    for (const Erratum* e : img_errata) corrected.at(e->index) = e->corrected;
    if (!image_mismatch(corrected)) {
      for (const Erratum* e : img_errata) record(*e, img.at(e->index));
      bad.reset();
    }
  } else if (!bad && !img_errata.empty()) {
    unused(Erratum::Field::Image);
  }
  r.exceptional_image_matches = !bad.has_value();
  if (bad)
    r.witnesses.push_back("image coordinate " + std::to_string(*bad + 1) + " is " + got[*bad].to_string() +
                          ", printed " + img[*bad].substitute(chart.dehomogenize).to_string());
  if (!chart.dehomogenize.empty()) {
    std::string d;
    for (const auto& [v, p] : chart.dehomogenize) d += (d.empty() ? "" : ", ") + vars.name(v) + " = " + p.to_string();
    r.notes.push_back("image compared in the affine chart " + d);
  }

  // (6) locus where the extension is undefined
  if (!chart.undefined_locus.empty()) {
    GroebnerBasis gb = buchberger(chart.undefined_locus);
    auto vanishes = [&](const std::vector<std::size_t>& block) {
      return !block.empty() &&
             std::all_of(block.begin(), block.end(), [&](std::size_t i) { return ideal_member(ext[i], gb); });
    };
    r.undefined_locus_matches = vanishes(mu_block) || vanishes(x_block);
    if (!*r.undefined_locus_matches) r.witnesses.push_back("extension does not degenerate on the printed undefined locus");
  }
  return r;
}

bool PropSpecialReport::pass() const {
  return maps.ok && std::all_of(loci.begin(), loci.end(), [](const LocusResult& l) { return l.ok(); }) &&
         std::all_of(charts.begin(), charts.end(), [](const ChartReport& c) { return c.pass(); });
}

PropSpecialReport verify_prop_special(const Polynomial& base_eq, const PolyMap& map,
                                      const std::vector<Polynomial>& target_eqs, const std::vector<NamedLocus>& loci,
                                      const std::vector<ChartSpec>& charts) {
  PropSpecialReport report;
  report.maps = maps_into(base_eq, map, target_eqs);
  report.loci = indeterminacy_components(map, base_eq, loci);
  if (charts.empty()) report.warnings.push_back("no charts given; chart verification is vacuous");

  struct Done {
    Polynomial equation;
    std::vector<std::map<std::size_t, Polynomial>> chain;
  };
  std::map<std::string, Done> done;
  for (const auto& chart : charts) {
    ChartContext ctx{base_eq, {}, map, target_eqs};
    if (!chart.parent.empty()) {
      auto it = done.find(chart.parent);
      if (it == done.end())
        throw DomainError("chart " + chart.name + " refers to unknown or later parent '" + chart.parent + "'");
      ctx.domain_eq = it->second.equation;
      ctx.chain = it->second.chain;
    }
    ChartReport cr = verify_chart(chart, ctx);
    auto chain = ctx.chain;
    chain.push_back(chart.substitution);
    done.insert_or_assign(chart.name, Done{cr.equation.value_or(Polynomial(base_eq.vars(), base_eq.field())), std::move(chain)});
    report.charts.push_back(std::move(cr));
  }
  return report;
}

}  // namespace quadnet
