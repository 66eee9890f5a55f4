#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cforge/realizability.hpp"
#include "cforge/synthesis.hpp"
#include "cforge/system.hpp"

namespace cforge {

struct Violation {
  int step = 0;
  std::string label;
  std::string kind;  // "guarantee-initial" | "guarantee-transition"
};

struct RunReport {
  int steps = 0;
  Trace trace;
  std::vector<Violation> violations;
  long long default_branch_firings = 0;
  std::optional<int> assumption_breach_step;
};

using Valuation = std::vector<std::pair<std::string, Value>>;

// Executes an ImplIR step by step over its history arrays. Owns its copy of
// the IR, so temporaries are safe to construct from.
class Interpreter {
 public:
  explicit Interpreter(ImplIR ir);

  // Consumes one input valuation (all declared inputs) and runs the step /
  // loop block for the current step index.
  void step(const Valuation& inputs);

  int steps_done() const { return steps_; }
  Valuation current_state() const;
  long long default_branch_firings() const { return default_firings_; }

  // One line per executed step: output values space-separated, bools as 0/1.
  const std::vector<std::string>& output_lines() const { return lines_; }

  // Frames with outgoing-input convention; last frame has empty inputs.
  Trace trace() const;

 private:
  Value eval(const TermPtr& t) const;

  ImplIR ir_;
  std::vector<std::vector<Value>> state_hist_;  // [var][depth]
  std::vector<std::vector<Value>> input_hist_;
  std::map<std::string, size_t> state_pos_;
  std::map<std::string, size_t> input_pos_;
  int steps_ = 0;
  long long default_firings_ = 0;
  std::vector<std::string> lines_;
  std::vector<TraceFrame> frames_;
};

// Runs the whole stream; the report's violation list is left empty (pair
// with monitor() to check the trace against the contract).
RunReport interpret(const ImplIR& ir, const std::vector<Valuation>& stream);

// Replays a trace against the lowered system: G_I on frame 0, then A and
// every labeled G_T conjunct per transition. Monitoring stops at the first
// assumption-violating step (noted in the report).
RunReport monitor(const ContractSystem& sys, const Trace& trace);

struct DomainBounds {
  std::map<std::string, std::pair<mpz_class, mpz_class>> per_var;
  std::pair<mpz_class, mpz_class> fallback{-16, 16};

  std::pair<mpz_class, mpz_class> get(const std::string& name) const {
    auto it = per_var.find(name);
    return it == per_var.end() ? fallback : it->second;
  }
};

class AssumptionUnsatisfiable : public Error {
 public:
  using Error::Error;
};

// Inputs satisfying A(state, .): rejection-samples uniformly within bounds
// (100 attempts), then asks the solver for a model. Throws
// AssumptionUnsatisfiable when A has no model at this state.
Valuation gen_valid_inputs(const ContractSystem& sys, const Valuation& state,
                           std::mt19937_64& rng, const DomainBounds& bounds,
                           Solver* solver);

class SpaceTooLarge : public Error {
 public:
  using Error::Error;
};

enum class GameResult : uint8_t { Realizable, Unrealizable };

// Brute-force realizability over the bounded domain: greatest fixpoint of
// the viability operator, then intersection with G_I. Guard: at most 1e7
// state-input pairs.
GameResult bounded_game_solve(const ContractSystem& sys,
                              const DomainBounds& bounds);

}  // namespace cforge
