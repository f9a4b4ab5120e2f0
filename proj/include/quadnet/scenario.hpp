#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "quadnet/birational.hpp"
#include "quadnet/lattice.hpp"
#include "quadnet/linalg.hpp"
#include "quadnet/parser.hpp"

namespace quadnet {

/// `check NAME(ARG, ...)` with the raw argument text and its location.
struct CheckRequest {
  std::string name;
  std::vector<std::string> args;
  std::vector<std::size_t> arg_columns;
  std::size_t line = 0;
  std::string text;
};

/// A parsed scenario file. Line-oriented format:
///
///   scenario NAME
///   vars mu: a b c
///   vars x: x0 x1 ...
///   poly NAME = EXPR
///   func NAME(p, q, ...) = EXPR
///   map NAME: t1 t2 ... = c1, c2, ...
///   locus NAME = g1, g2, ...
///   chart NAME ... end            (see parse_chart_line in scenario.cpp)
///   chow NAME in P<a>xP<b> = ci (d,e) (d,e) ...   |   = EXPR in g1, g2
///   table NAME = [[...], ...]
///   include FILE
///   check NAME(ARG, ...)
///
/// `#` starts a comment. Both `vars` lines precede every other declaration
/// that mentions variables.
struct Scenario {
  std::string name;
  VarTablePtr vars;
  Definitions defs;
  std::map<std::string, PolyMap> maps;
  std::vector<NamedLocus> loci;
  /// Parent-first order (as declared).
  std::vector<ChartSpec> charts;
  std::map<std::string, ChowClass> classes;
  std::map<std::string, ExactMatrix> tables;
  std::vector<CheckRequest> checks;
  /// Source with includes inlined; parses back to the same scenario.
  std::string flattened;

  /// Expression in the scenario's variables and definitions.
  Polynomial parse(std::string_view expr, std::size_t line = 1, std::size_t column = 0) const;
  /// Throws DomainError for unknown names.
  const PolyMap& map(std::string_view name) const;
  const NamedLocus& locus(std::string_view name) const;
  const ChartSpec& chart(std::string_view name) const;
  const ChowClass& chow(std::string_view name) const;
  const ExactMatrix& table(std::string_view name) const;
};

/// Throws ParseError with the line and column of the offending text.
/// `base` resolves relative include paths.
Scenario parse_scenario(std::string_view text, const std::filesystem::path& base = {});
Scenario load_scenario(const std::filesystem::path& path);

/// Splits on commas outside parentheses and brackets. Columns are 0-based
/// offsets of each trimmed piece within `text`.
std::vector<std::string> split_top_level(std::string_view text, std::vector<std::size_t>* columns = nullptr);

}  // namespace quadnet
