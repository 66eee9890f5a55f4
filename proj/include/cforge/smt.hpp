#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cforge/queries.hpp"
#include "cforge/term.hpp"

namespace cforge {

struct SolverConfig {
  std::vector<std::string> command;  // argv of an SMT-LIB v2 solver process
  int timeout_ms = 60000;
  std::string logic_quantifier_free = "QF_LIA";
  std::string logic_quantified = "LIA";
};

// Resolves the solver command: CONTRACT_FORGE_SOLVER when set, else `z3 -in`.
SolverConfig default_solver_config();
std::vector<std::string> split_command(const std::string& line);

struct Model {
  std::map<IndexedSymbol, Value> values;

  Value get(const IndexedSymbol& sym) const {
    auto it = values.find(sym);
    if (it == values.end())
      throw InternalError("model: no value for " + sym.str());
    return it->second;
  }
};

enum class SolverStatus : uint8_t { Sat, Unsat, Unknown, Timeout, ProcessError };

const char* to_string(SolverStatus s);

struct SolverResult {
  SolverStatus status = SolverStatus::ProcessError;
  std::optional<Model> model;  // present iff status == Sat and a model was requested
  std::string diagnostics;
};

struct EmitOptions {
  std::string logic;
  bool check_sat = true;
};

// Deterministic SMT-LIB v2 rendering: declarations in the given order, one
// assertion, optional (check-sat).
std::string emit_smtlib(const std::vector<SymbolDecl>& decls,
                        const TermPtr& assertion, const EmitOptions& opts);

// The query as a single quantified validity assertion:
//   (assert (forall U (=> premise (exists E conclusion))))
std::string emit_validity_script(const ForallExistsFormula& q,
                                 const std::string& logic);

// The query's negation: declare U, assert premise, assert (forall E (not C)).
// The script is satisfiable exactly when the query is not valid; a model
// gives the violating universal assignment.
std::string emit_negation_script(const ForallExistsFormula& q,
                                 const std::string& logic);

// Parses (get-model) output; symbols absent from the output default to
// 0 / false so the model is total over `decls`.
Model parse_model_output(const std::string& text,
                         const std::vector<SymbolDecl>& decls);

// One solver child process. Scripts are self-contained batches; the session
// separates them with (reset), which is not observable in results. The child
// is reaped on destruction.
class Solver {
 public:
  explicit Solver(SolverConfig config);
  ~Solver();
  Solver(const Solver&) = delete;
  Solver& operator=(const Solver&) = delete;

  // Runs one script. When `decls_for_model` is non-null and the script is
  // satisfiable, issues (get-model) and attaches the parsed model.
  SolverResult check(const std::string& script,
                     const std::vector<SymbolDecl>* decls_for_model = nullptr);

  const SolverConfig& config() const { return config_; }

 private:
  struct Exchange {
    bool ok = false;
    bool timed_out = false;
    std::string text;
  };

  void spawn();
  void shutdown();
  Exchange transact(const std::string& payload, long long deadline_ms);

  SolverConfig config_;
  long long pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  bool used_ = false;
};

// Single-shot convenience: spawn, run one script, tear down.
SolverResult check(const SolverConfig& config, const std::string& script,
                   const std::vector<SymbolDecl>* decls_for_model = nullptr);

}  // namespace cforge
