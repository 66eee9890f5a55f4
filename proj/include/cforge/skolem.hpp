#pragma once

#include <string>
#include <vector>

#include "cforge/queries.hpp"
#include "cforge/smt.hpp"
#include "cforge/term.hpp"

namespace cforge {

// Piecewise witness for the existentials of a forall-exists formula.
// Partitions apply first-match: the guard of the first partition satisfied
// by the universal assignment selects the assignments. Invariants:
//   coverage:  premise /\ not(guard_1 \/ ... \/ guard_m) is unsat
//   soundness: for each j, guard_j /\ premise /\ not conclusion[assign_j] is unsat
struct SkolemPartition {
  TermPtr guard;  // over universals
  std::vector<std::pair<IndexedSymbol, TermPtr>> assigns;  // exvar -> term over universals
};

struct SkolemRelation {
  std::vector<SkolemPartition> partitions;

  // Per-existential nested ite (first-match, last partition as default).
  std::map<IndexedSymbol, TermPtr> as_substitution() const;

  // Nested-ite s-expression dump.
  std::string dump() const;
};

enum class AeValTag : uint8_t { Valid, Invalid, Unknown };

struct AeValOutcome {
  AeValTag tag = AeValTag::Unknown;
  SkolemRelation skolem;   // Valid
  Model counter_model;     // Invalid: universal assignment with no witness
  std::string reason;      // Unknown
  int iterations = 0;
};

class UnsupportedCoefficient : public Error {
 public:
  explicit UnsupportedCoefficient(const std::string& atom)
      : Error("existential variable has non-unit coefficient in atom " + atom) {}
};

struct MbpResult {
  TermPtr projection;  // quantifier-free, over universals, implied by phi's witness
  std::vector<std::pair<IndexedSymbol, TermPtr>> witness;
};

// Model-based projection: given m |= phi, eliminates `exvars` from phi by
// selecting an implicant under m, substituting equality-defined variables and
// resolving the rest against their tightest model bound. Throws
// UnsupportedCoefficient when an existential occurs with |coefficient| != 1.
MbpResult mbp_project(const Model& m, const std::vector<SymbolDecl>& exvars,
                      const TermPtr& phi);

// Decides validity of the query and extracts a Skolem relation, enumerating
// model-based projections of the conclusion until the premise is covered.
// Valid outcomes have coverage and soundness re-verified on the solver before
// they are returned. Throws SolverError on process failures.
AeValOutcome ae_val(const ForallExistsFormula& q, Solver& solver);
AeValOutcome ae_val(const ForallExistsFormula& q, const SolverConfig& config);

}  // namespace cforge
