#pragma once

#include <string>
#include <vector>

#include "cforge/term.hpp"
#include "cforge/typecheck.hpp"

namespace cforge {

enum class VarRole : uint8_t { InputMirror, Output, Register, InitFlag };

struct SysVar {
  std::string name;
  Sort sort = Sort::Bool;
  VarRole role = VarRole::Output;
  ExprPtr pre_source;  // for registers: the expression under `pre`
};

struct LabeledTerm {
  std::string label;
  TermPtr term;
};

// The lowered contract: assumption A(s, i), initial predicate G_I(s) and
// transition predicate G_T(s, i, s'). Formula templates are indexed with
// state plane 0 (= s), input plane 0 (= i) and state plane 1 (= s'); they
// are instantiated at other depths by index shifting.
//
// The state vector holds one mirror per input (kept equal to the current
// input by frame constraints in G_T), the declared outputs, one register per
// syntactically distinct `pre e` and the init flag `%init` (true exactly in
// initial states).
struct ContractSystem {
  std::string name;
  std::vector<std::pair<std::string, Sort>> inputs;
  std::vector<SysVar> state_vars;

  std::vector<LabeledTerm> assumption_parts;  // over s@0, i@0
  std::vector<LabeledTerm> initial_parts;     // over s@0
  std::vector<LabeledTerm> transition_parts;  // over s@0, i@0, s@1

  TermPtr assumption() const;
  TermPtr initial() const;
  TermPtr transition() const;

  std::vector<SymbolDecl> state_decls(int index) const;
  std::vector<SymbolDecl> input_decls(int index) const;
  const SysVar* find_state(const std::string& name) const;
  size_t register_count() const;
  std::vector<std::string> output_names() const;
};

ContractSystem lower(const TypedContract& contract);

// Name of the init-flag state variable.
inline const char* kInitFlag = "%init";

}  // namespace cforge
