#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "quadnet/polynomial.hpp"

namespace quadnet {

/// Parses a polynomial expression:
///
///   expr   := ['+'|'-'] term (('+'|'-') term)*
///   term   := factor (('*' | '/') factor)*      divisor must be an integer
///   factor := atom ['^' INT]
///   atom   := INT | VAR | NAME | NAME '(' expr (',' expr)* ')' | '(' expr ')'
///
/// NAME refers to an entry of `defs`: a plain name expands to the stored
/// polynomial, a call substitutes the arguments for its parameters.
///
/// Whitespace is insignificant. Errors carry 1-based line/column relative to
/// `src`, shifted by `line`/`column_offset` when the text is embedded in a
/// larger file.
struct Definition {
  /// Parameter variables (global indices); empty for a plain name.
  std::vector<std::size_t> params;
  Polynomial body;
};
using Definitions = std::map<std::string, Definition, std::less<>>;

Polynomial parse_polynomial(std::string_view src, const VarTablePtr& vars,
                            Field field = Field::rationals(), std::size_t line = 1,
                            std::size_t column_offset = 0, const Definitions* defs = nullptr);

}  // namespace quadnet
