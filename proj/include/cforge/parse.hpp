#pragma once

#include <string>

#include "cforge/ast.hpp"

namespace cforge {

// Parses a textual contract. Throws ParseError with line/column on syntax
// errors, duplicate declarations and unknown sorts.
ContractSpec parse_contract(const std::string& text);

// Convenience for tests: parses a standalone expression.
ExprPtr parse_expression(const std::string& text);

}  // namespace cforge
