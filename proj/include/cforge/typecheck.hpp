#pragma once

#include "cforge/ast.hpp"

namespace cforge {

// A contract whose assumptions, guarantees and node bodies are call-free,
// constant-folded and sort-annotated.
struct TypedContract {
  ContractSpec spec;
};

// Inlines node calls (builtins included), sort-checks every expression and
// enforces the linearity restriction on multiplication. Throws SortError on
// sort mismatches, nonlinear multiplication, recursive nodes and unknown
// identifiers.
//
// Builtins:
//   rising_edge(x)    ==  x -> (x and not pre x)
//   initially_true(x) ==  x -> true
TypedContract typecheck_and_expand(const ContractSpec& spec);

// True when no Call node remains anywhere in the contract.
bool fully_expanded(const ContractSpec& spec);

}  // namespace cforge
