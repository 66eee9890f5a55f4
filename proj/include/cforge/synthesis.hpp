#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cforge/realizability.hpp"
#include "cforge/skolem.hpp"
#include "cforge/system.hpp"

namespace cforge {

// A realizability proof turned into executable material: a concrete initial
// state, one Skolem relation per base step, and the recurrence Skolem from
// the extend check at depth k.
struct SynthesisPlan {
  int k = 0;
  std::vector<std::pair<std::string, Value>> gi_witness;  // all state vars
  std::vector<SkolemRelation> base_skolems;               // steps 1..k
  SkolemRelation extend_skolem;
};

struct SynthesisOutcome {
  Verdict verdict;
  std::optional<SynthesisPlan> plan;  // present iff verdict is Realizable
};

SynthesisOutcome synthesize(const ContractSystem& sys, int max_k,
                            Solver& solver);
SynthesisOutcome synthesize(const ContractSystem& sys, int max_k,
                            const SolverConfig& config);

struct IrVar {
  std::string name;
  Sort sort = Sort::Bool;
};

struct IrBranch {
  TermPtr guard;  // over history references; null for the default branch
  std::vector<std::pair<std::string, TermPtr>> assigns;  // every state var once
};

// First-match guarded assignment tree; the last branch is the default and
// also carries the last partition's guard for match accounting.
struct IrBlock {
  std::vector<IrBranch> branches;
};

struct ImplIR {
  std::string contract_name;
  int history_len = 1;  // K = k+1
  std::vector<IrVar> state_vars;
  std::vector<IrVar> inputs;
  std::vector<std::string> outputs;
  std::vector<std::pair<std::string, Value>> init_assign;
  std::vector<IrBlock> step_blocks;  // base steps 1..k
  IrBlock loop_block;
};

struct EmittedProgram {
  std::string source;
  std::string language = "c";
};

// Maps each Skolem relation onto history arrays: a symbol at index i inside
// a depth-n block becomes history element n - i of its variable.
ImplIR plan_to_ir(const SynthesisPlan& plan, const ContractSystem& sys);

// Single-file C program over 64-bit integers; reads one whitespace-separated
// input valuation per step, prints the outputs after each step.
EmittedProgram emit_program(const ImplIR& ir);

}  // namespace cforge
