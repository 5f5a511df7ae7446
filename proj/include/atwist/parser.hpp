#pragma once

#include <functional>
#include <string_view>

#include "atwist/expr.hpp"

namespace atwist {

/// Resolves an identifier to an expression, or returns false to signal that
/// the name is unknown. The manifest layer plugs named scalars in here;
/// plain expression parsing only knows chart coordinates and "i".
using NameResolver = std::function<bool(std::string_view name, ScalarExpr& out)>;

/// Recursive-descent parser for the expression grammar
///
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := base ('^' signed-integer)?
///   base   := number | 'i' | identifier | fname '(' expr ')' | '(' expr ')' | '-' base
///   fname  := 'exp' | 'ln' | 'sin' | 'cos' | 'conj'
///
/// Identifiers resolve to chart coordinates first, then through `extra`.
/// Unknown identifiers raise ParseError(UnknownIdentifier). All location
/// information is 1-based; `line` and `col0` offset it so errors from inside
/// manifest files point at file coordinates.
ScalarExpr parse_expression(std::string_view text, const Chart& chart,
                            const NameResolver& extra = {}, int line = 1, int col0 = 0);

} // namespace atwist
