#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "cforge/parse.hpp"
#include "cforge/smt.hpp"
#include "cforge/system.hpp"
#include "cforge/typecheck.hpp"

namespace cftest {

inline std::string repo_root() { return CFORGE_REPO_ROOT; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string contract_text(const std::string& name) {
  return slurp(repo_root() + "/tests/contracts/" + name);
}

inline cforge::SolverConfig test_solver_config(int timeout_ms = 60000) {
  cforge::SolverConfig cfg = cforge::default_solver_config();
  cfg.timeout_ms = timeout_ms;
  return cfg;
}

inline cforge::ContractSystem system_of(const std::string& text) {
  return cforge::lower(cforge::typecheck_and_expand(cforge::parse_contract(text)));
}

inline cforge::ContractSystem system_of_file(const std::string& name) {
  return system_of(contract_text(name));
}

// Searches a term tree for a structurally equal subterm.
inline bool contains_subterm(const cforge::TermPtr& haystack,
                             const cforge::TermPtr& needle) {
  if (cforge::term_eq(haystack, needle)) return true;
  for (const auto& k : haystack->kids)
    if (contains_subterm(k, needle)) return true;
  return false;
}

}  // namespace cftest
