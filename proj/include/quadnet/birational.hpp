#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "quadnet/polynomial.hpp"

namespace quadnet {

/// A rational map given by one polynomial per target coordinate. Source and
/// target coordinates live in one shared variable table; `targets` lists the
/// target coordinates (global indices) in order.
struct PolyMap {
  std::vector<std::size_t> targets;
  std::vector<Polynomial> components;

  /// Throws DomainError on a length mismatch, duplicate targets or an
  /// all-zero map.
  void validate() const;
  std::map<std::size_t, Polynomial> assignment() const;
};

/// f with each target coordinate replaced by its component. Throws
/// DomainError if f involves a variable that is not a target coordinate.
Polynomial compose(const PolyMap& map, const Polynomial& f);

/// Remainder of f under division by the single polynomial g (zero iff g | f).
Polynomial division_residual(const Polynomial& f, const Polynomial& g);

struct MapsIntoResult {
  bool ok = false;
  std::vector<Polynomial> compositions;
  /// compositions[i] / domain_eq when divisible.
  std::vector<std::optional<Polynomial>> quotients;
  /// Residual of the first failing composition.
  std::optional<Polynomial> witness;
};

/// Every composed target equation is zero or divisible by domain_eq.
MapsIntoResult maps_into(const Polynomial& domain_eq, const PolyMap& map, const std::vector<Polynomial>& target_eqs);

struct LocusResult {
  std::string name;
  /// Target coordinates of the block whose components all vanish, if any.
  std::optional<std::string> vanishing_block;
  /// The domain equation lies in the locus ideal.
  bool on_domain = false;
  bool ok() const { return vanishing_block.has_value() && on_domain; }
};

struct NamedLocus {
  std::string name;
  std::vector<Polynomial> generators;
};

/// For each locus: membership of the domain equation and of the map's
/// components in the locus ideal (Groebner basis over the locus field). A
/// map into a product of projective spaces is undefined where all
/// coordinates of one factor vanish; the factors are the mu-block and
/// x-block targets.
std::vector<LocusResult> indeterminacy_components(const PolyMap& map, const Polynomial& domain_eq,
                                                  const std::vector<NamedLocus>& loci);

/// Printed data in a chart that is replaced by a corrected expression.
struct Erratum {
  enum class Field { Equation, ExceptionalLocus, Extension, Image };
  Field field = Field::Equation;
  /// Coordinate position (0-based) for Extension/Image.
  std::size_t index = 0;
  Polynomial corrected;
  std::string note;
};

std::string to_string(Erratum::Field f);

/// One blow-up chart as printed: a change of variables on the parent
/// (the base hypersurface or another chart), the strict-transform equation,
/// the extension of the map and the image of the exceptional divisor.
struct ChartSpec {
  std::string name;
  /// Name of the parent chart, or empty for the base hypersurface.
  std::string parent;
  std::map<std::size_t, Polynomial> substitution;
  /// Equation of the exceptional divisor in the chart (a single factor).
  std::optional<Polynomial> exceptional;
  /// Restriction to the exceptional divisor, e.g. l2 -> 0 or l0 -> l1.
  std::map<std::size_t, Polynomial> specialization;
  /// Printed strict-transform equation; derived from the pullback if absent.
  std::optional<Polynomial> equation;
  /// Printed equation cutting the exceptional divisor inside the chart.
  std::optional<Polynomial> exceptional_locus;
  /// Components in the order of the map's targets.
  std::vector<Polynomial> extension;
  std::vector<Polynomial> image;
  /// Affine chart applied before comparing images, e.g. l0 -> 1.
  std::map<std::size_t, Polynomial> dehomogenize;
  /// Printed locus where the extension is not defined (optional).
  std::vector<Polynomial> undefined_locus;
  std::vector<Erratum> errata;
};

/// The chart with every erratum applied and the errata list cleared.
ChartSpec effective_chart(const ChartSpec& chart);

struct ChartContext {
  /// Effective equation of the parent.
  Polynomial domain_eq;
  /// Substitutions from the base hypersurface down to the parent, in order.
  std::vector<std::map<std::size_t, Polynomial>> chain;
  PolyMap map;
  std::vector<Polynomial> target_eqs;
};

struct ChartReport {
  std::string name;
  bool pullback_matches = false;
  unsigned exponent = 0;
  int unit = 1;
  bool equation_derived = false;
  /// Equation used downstream (printed, corrected or derived).
  std::optional<Polynomial> equation;

  bool exceptional_divisor_matches = false;
  bool extension_lands_in_target = false;
  bool extension_agrees_with_map = false;
  bool exceptional_image_matches = false;
  std::optional<bool> undefined_locus_matches;

  std::vector<std::string> errata_applied;
  std::vector<std::string> notes;
  std::vector<std::string> witnesses;

  bool pass() const;
};

/// Runs every check on one chart. Printed data is tried first; an erratum
/// is used (and listed) only when the printed data fails.
ChartReport verify_chart(const ChartSpec& chart, const ChartContext& context);

struct PropSpecialReport {
  MapsIntoResult maps;
  std::vector<LocusResult> loci;
  std::vector<ChartReport> charts;
  std::vector<std::string> warnings;
  bool pass() const;
};

/// maps_into, indeterminacy_components and verify_chart for every chart.
/// Charts must be listed after their parents.
PropSpecialReport verify_prop_special(const Polynomial& base_eq, const PolyMap& map,
                                      const std::vector<Polynomial>& target_eqs, const std::vector<NamedLocus>& loci,
                                      const std::vector<ChartSpec>& charts);

}  // namespace quadnet
