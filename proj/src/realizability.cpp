#include "cforge/realizability.hpp"

namespace cforge {

const char* to_string(VerdictTag t) {
  switch (t) {
    case VerdictTag::Realizable: return "realizable";
    case VerdictTag::Unrealizable: return "unrealizable";
    case VerdictTag::Unknown: return "unknown";
  }
  return "?";
}

Trace trace_from_model(const ContractSystem& sys, const Model& m, int k) {
  Trace tr;
  for (int j = 0; j <= k; ++j) {
    TraceFrame f;
    f.step = j;
    for (const auto& v : sys.state_vars)
      f.state.emplace_back(v.name, m.get({v.name, j, Plane::State}));
    for (const auto& [n, s] : sys.inputs) {
      (void)s;
      f.inputs.emplace_back(n, m.get({n, j, Plane::Input}));
    }
    tr.frames.push_back(std::move(f));
  }
  return tr;
}

namespace {

// Validity of a forall-exists query via its negation: the negation script is
// satisfiable exactly when the query is invalid, and a model of it is the
// offending universal assignment.
AeValOutcome quantified_engine(const ForallExistsFormula& q, Solver& solver) {
  AeValOutcome out;
  SolverResult r = solver.check(
      emit_negation_script(q, solver.config().logic_quantified),
      &q.universals);
  switch (r.status) {
    case SolverStatus::Unsat:
      out.tag = AeValTag::Valid;  // no relation extracted on this path
      return out;
    case SolverStatus::Sat:
      out.tag = AeValTag::Invalid;
      out.counter_model = *r.model;
      return out;
    case SolverStatus::Timeout:
    case SolverStatus::Unknown:
      out.tag = AeValTag::Unknown;
      out.reason = "quantified query: solver " +
                   std::string(to_string(r.status));
      return out;
    case SolverStatus::ProcessError:
      throw SolverError("solver failure during '" + q.description +
                        "': " + r.diagnostics);
  }
  return out;
}

AeValOutcome decide(const ForallExistsFormula& q, Solver& solver,
                    CheckEngine engine) {
  return engine == CheckEngine::Skolem ? ae_val(q, solver)
                                       : quantified_engine(q, solver);
}

}  // namespace

Verdict check_realizability(const ContractSystem& sys, int max_k,
                            Solver& solver, CheckEngine engine) {
  Verdict v;
  if (max_k < 0) throw Error("max_k must be nonnegative");

  // Existence gate: BaseCheck' is vacuous when no initial state exists, but
  // realizability requires one.
  {
    SolverResult r = solver.check(
        emit_smtlib(sys.state_decls(0), sys.initial(),
                    {solver.config().logic_quantifier_free, true}));
    if (r.status == SolverStatus::ProcessError)
      throw SolverError("solver failure on the initial-state gate: " +
                        r.diagnostics);
    if (r.status == SolverStatus::Timeout || r.status == SolverStatus::Unknown) {
      v.tag = VerdictTag::Unknown;
      v.reason = "initial-state satisfiability: solver " +
                 std::string(to_string(r.status));
      return v;
    }
    if (r.status == SolverStatus::Unsat) {
      v.tag = VerdictTag::Unrealizable;
      v.k = 0;
      return v;  // empty trace: no initial state at all
    }
  }

  for (int k = 0; k <= max_k; ++k) {
    AeValOutcome base = decide(build_base_check_prime(sys, k), solver, engine);
    if (base.tag == AeValTag::Invalid) {
      v.tag = VerdictTag::Unrealizable;
      v.k = k;
      v.trace = trace_from_model(sys, base.counter_model, k);
      return v;
    }
    if (base.tag == AeValTag::Unknown) {
      v.tag = VerdictTag::Unknown;
      v.k = k;
      v.reason = "base check: " + base.reason;
      return v;
    }
    AeValOutcome ext = decide(build_extend_check(sys, k), solver, engine);
    if (ext.tag == AeValTag::Valid) {
      v.tag = VerdictTag::Realizable;
      v.k = k;
      return v;
    }
    if (ext.tag == AeValTag::Unknown) {
      v.tag = VerdictTag::Unknown;
      v.k = k;
      v.reason = "extend check: " + ext.reason;
      return v;
    }
    // Invalid extend check: some reachable-shaped chain is not extendable at
    // this depth; retry deeper.
  }
  v.tag = VerdictTag::Unknown;
  v.k = max_k;
  v.reason = "depth bound exhausted (max_k = " + std::to_string(max_k) + ")";
  return v;
}

Verdict check_realizability(const ContractSystem& sys, int max_k,
                            const SolverConfig& config, CheckEngine engine) {
  Solver solver(config);
  return check_realizability(sys, max_k, solver, engine);
}

}  // namespace cforge
