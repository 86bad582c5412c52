#pragma once

#include <string>

#include "dirac/model.hpp"

namespace dirac {

// Parse a model file (line-oriented DSL). Throws SyntaxError,
// UndeclaredSymbol, or ArityMismatch.
Model parse_model(const std::string& text);

// Parse an inline expression against a model's symbol scope.
Expr parse_expr(const std::string& text, const Model& scope);

} // namespace dirac
