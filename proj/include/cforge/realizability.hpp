#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cforge/skolem.hpp"
#include "cforge/system.hpp"

namespace cforge {

enum class VerdictTag : uint8_t { Realizable, Unrealizable, Unknown };

// One trace frame: the state at this step plus the inputs consumed *from*
// this frame (empty on the last frame of an execution trace; on a
// counterexample trace the last frame carries the inputs that admit no
// successor).
struct TraceFrame {
  int step = 0;
  std::vector<std::pair<std::string, Value>> inputs;
  std::vector<std::pair<std::string, Value>> state;
};

struct Trace {
  std::vector<TraceFrame> frames;
};

struct Verdict {
  VerdictTag tag = VerdictTag::Unknown;
  int k = 0;
  Trace trace;        // Unrealizable: failing chain, length k+1
  std::string reason; // Unknown
};

const char* to_string(VerdictTag t);

enum class CheckEngine : uint8_t {
  Skolem,         // both checks decided by ae_val
  QuantifiedSmt,  // negate-and-check-unsat on the quantified query
};

// The k-induction loop: for k = 0..max_k run BaseCheck'(k) then
// ExtendCheck(k). Unsatisfiable G_I short-circuits to Unrealizable(0) with an
// empty trace. The per-k checks run in lockstep; verdicts are deterministic
// given a deterministic solver.
Verdict check_realizability(const ContractSystem& sys, int max_k,
                            Solver& solver,
                            CheckEngine engine = CheckEngine::Skolem);
Verdict check_realizability(const ContractSystem& sys, int max_k,
                            const SolverConfig& config,
                            CheckEngine engine = CheckEngine::Skolem);

// Unrolls a BaseCheck'(k) counter-model into a trace of k+1 frames.
Trace trace_from_model(const ContractSystem& sys, const Model& m, int k);

}  // namespace cforge
