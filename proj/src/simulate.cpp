#include <sstream>

#include "cforge/simulate.hpp"

namespace cforge {

Interpreter::Interpreter(ImplIR ir) : ir_(std::move(ir)) {
  const size_t K = static_cast<size_t>(ir_.history_len);
  for (size_t i = 0; i < ir_.state_vars.size(); ++i) {
    state_pos_[ir_.state_vars[i].name] = i;
    const Value zero = ir_.state_vars[i].sort == Sort::Bool
                           ? Value::of_bool(false)
                           : Value::of_int(0);
    state_hist_.emplace_back(K, zero);
  }
  for (size_t i = 0; i < ir_.inputs.size(); ++i) {
    input_pos_[ir_.inputs[i].name] = i;
    const Value zero = ir_.inputs[i].sort == Sort::Bool ? Value::of_bool(false)
                                                        : Value::of_int(0);
    input_hist_.emplace_back(K, zero);
  }
  // Init block: witness into element 0, then shift.
  for (const auto& [name, val] : ir_.init_assign)
    state_hist_[state_pos_.at(name)][0] = val;
  for (auto& h : state_hist_)
    for (size_t d = h.size() - 1; d > 0; --d) h[d] = h[d - 1];
  TraceFrame f0;
  f0.step = 0;
  f0.state = current_state();
  frames_.push_back(std::move(f0));
}

Value Interpreter::eval(const TermPtr& t) const {
  SymbolEnv no_syms = [](const IndexedSymbol& s) -> Value {
    throw InternalError("interpret: raw symbol " + s.str());
  };
  HistEnv henv = [&](const HistRef& h) -> Value {
    const auto& hist = h.plane == Plane::State
                           ? state_hist_[state_pos_.at(h.var)]
                           : input_hist_[input_pos_.at(h.var)];
    if (h.depth < 0 || static_cast<size_t>(h.depth) >= hist.size())
      throw InternalError("interpret: history depth out of range");
    return hist[static_cast<size_t>(h.depth)];
  };
  return eval_term(t, no_syms, &henv);
}

void Interpreter::step(const Valuation& inputs) {
  if (inputs.size() != ir_.inputs.size())
    throw Error("interpret: input valuation arity mismatch");
  frames_.back().inputs = inputs;

  // read_inputs: shift, then current values into element 0.
  for (auto& h : input_hist_)
    for (size_t d = h.size() - 1; d > 0; --d) h[d] = h[d - 1];
  for (const auto& [name, val] : inputs) {
    auto it = input_pos_.find(name);
    if (it == input_pos_.end())
      throw Error("interpret: unknown input " + name);
    input_hist_[it->second][0] = val;
  }

  const int j = steps_ + 1;
  const IrBlock& block =
      j <= static_cast<int>(ir_.step_blocks.size())
          ? ir_.step_blocks[static_cast<size_t>(j - 1)]
          : ir_.loop_block;

  const IrBranch* chosen = nullptr;
  for (const auto& br : block.branches) {
    if (eval(br.guard).b) {
      chosen = &br;
      break;
    }
  }
  if (!chosen) {
    // No guard fired: take the default (= last partition's assignments).
    default_firings_++;
    chosen = &block.branches.back();
  }

  std::vector<Value> next;
  next.reserve(chosen->assigns.size());
  for (const auto& [name, term] : chosen->assigns) {
    (void)name;
    next.push_back(eval(term));
  }
  for (auto& h : state_hist_)
    for (size_t d = h.size() - 1; d > 0; --d) h[d] = h[d - 1];
  for (size_t i = 0; i < next.size(); ++i)
    state_hist_[state_pos_.at(chosen->assigns[i].first)][0] = next[i];

  steps_++;
  std::ostringstream line;
  for (size_t i = 0; i < ir_.outputs.size(); ++i) {
    if (i) line << ' ';
    const Value& v = state_hist_[state_pos_.at(ir_.outputs[i])][0];
    line << (v.sort == Sort::Bool ? (v.b ? "1" : "0") : v.z.get_str());
  }
  lines_.push_back(line.str());

  TraceFrame f;
  f.step = steps_;
  f.state = current_state();
  frames_.push_back(std::move(f));
}

Valuation Interpreter::current_state() const {
  Valuation v;
  for (const auto& var : ir_.state_vars)
    v.emplace_back(var.name, state_hist_[state_pos_.at(var.name)][0]);
  return v;
}

Trace Interpreter::trace() const {
  Trace t;
  t.frames = frames_;
  return t;
}

RunReport interpret(const ImplIR& ir, const std::vector<Valuation>& stream) {
  Interpreter interp(ir);
  for (const auto& inputs : stream) interp.step(inputs);
  RunReport r;
  r.steps = interp.steps_done();
  r.trace = interp.trace();
  r.default_branch_firings = interp.default_branch_firings();
  return r;
}

namespace {

SymbolEnv frame_env(const TraceFrame* prev, const Valuation* inputs,
                    const TraceFrame* next) {
  return [prev, inputs, next](const IndexedSymbol& s) -> Value {
    const Valuation* vals = nullptr;
    if (s.plane == Plane::Input) {
      vals = inputs;
    } else if (s.index == 0) {
      vals = prev ? &prev->state : nullptr;
    } else if (s.index == 1) {
      vals = next ? &next->state : nullptr;
    }
    if (vals) {
      for (const auto& [n, v] : *vals)
        if (n == s.name) return v;
    }
    throw InternalError("monitor: no value for " + s.str());
  };
}

}  // namespace

RunReport monitor(const ContractSystem& sys, const Trace& trace) {
  RunReport r;
  r.trace = trace;
  if (trace.frames.empty()) return r;
  r.steps = static_cast<int>(trace.frames.size()) - 1;

  const SymbolEnv init_env = frame_env(&trace.frames[0], nullptr, nullptr);
  for (const auto& part : sys.initial_parts) {
    if (!eval_term(part.term, init_env).b)
      r.violations.push_back({0, part.label, "guarantee-initial"});
  }

  for (size_t j = 0; j + 1 < trace.frames.size(); ++j) {
    const TraceFrame& cur = trace.frames[j];
    const TraceFrame& nxt = trace.frames[j + 1];
    if (cur.inputs.empty() && !sys.inputs.empty()) break;
    const SymbolEnv env = frame_env(&cur, &cur.inputs, &nxt);
    bool assumption_ok = true;
    for (const auto& part : sys.assumption_parts) {
      if (!eval_term(part.term, env).b) {
        assumption_ok = false;
        break;
      }
    }
    if (!assumption_ok) {
      // The contract promises nothing from here on.
      r.assumption_breach_step = static_cast<int>(j);
      break;
    }
    for (const auto& part : sys.transition_parts) {
      if (!eval_term(part.term, env).b)
        r.violations.push_back({static_cast<int>(j) + 1, part.label,
                                "guarantee-transition"});
    }
  }
  return r;
}

Valuation gen_valid_inputs(const ContractSystem& sys, const Valuation& state,
                           std::mt19937_64& rng, const DomainBounds& bounds,
                           Solver* solver) {
  SymbolEnv state_env = [&](const IndexedSymbol& s) -> Value {
    if (s.plane == Plane::State && s.index == 0) {
      for (const auto& [n, v] : state)
        if (n == s.name) return v;
    }
    throw InternalError("gen_valid_inputs: no value for " + s.str());
  };

  auto satisfies = [&](const Valuation& candidate) {
    SymbolEnv env = [&](const IndexedSymbol& s) -> Value {
      if (s.plane == Plane::Input) {
        for (const auto& [n, v] : candidate)
          if (n == s.name) return v;
      }
      return state_env(s);
    };
    for (const auto& part : sys.assumption_parts)
      if (!eval_term(part.term, env).b) return false;
    return true;
  };

  for (int attempt = 0; attempt < 100; ++attempt) {
    Valuation candidate;
    for (const auto& [n, s] : sys.inputs) {
      if (s == Sort::Bool) {
        candidate.emplace_back(n, Value::of_bool((rng() & 1) != 0));
      } else {
        const auto [lo, hi] = bounds.get(n);
        // Sampling domain is assumed to fit in 64 bits; assumption
        // satisfaction is what actually matters.
        std::uniform_int_distribution<long long> dist(lo.get_si(),
                                                      hi.get_si());
        candidate.emplace_back(
            n, Value::of_int(mpz_class(std::to_string(dist(rng)))));
      }
    }
    if (satisfies(candidate)) return candidate;
  }

  // Rejection failed; ask the solver for any assumption-satisfying input.
  if (!solver)
    throw AssumptionUnsatisfiable(
        "no assumption-satisfying inputs found by sampling and no solver "
        "provided");
  std::vector<TermPtr> parts;
  for (const auto& v : sys.state_vars) {
    Value val = Value::of_bool(false);
    bool found = false;
    for (const auto& [n, x] : state)
      if (n == v.name) {
        val = x;
        found = true;
      }
    if (!found) throw InternalError("gen_valid_inputs: incomplete state");
    parts.push_back(tb::eq(tb::sym({v.name, 0, Plane::State}, v.sort),
                           v.sort == Sort::Bool ? tb::bool_const(val.b)
                                                : tb::int_const(val.z)));
  }
  parts.push_back(sys.assumption());
  std::vector<SymbolDecl> decls = sys.state_decls(0);
  for (const auto& d : sys.input_decls(0)) decls.push_back(d);
  SolverResult res = solver->check(
      emit_smtlib(decls, tb::and_(std::move(parts)),
                  {solver->config().logic_quantifier_free, true}),
      &decls);
  if (res.status == SolverStatus::Unsat)
    throw AssumptionUnsatisfiable(
        "the assumption has no model at the current state");
  if (res.status != SolverStatus::Sat)
    throw SolverError("input generation: solver " +
                      std::string(to_string(res.status)) + " " +
                      res.diagnostics);
  Valuation out;
  for (const auto& [n, s] : sys.inputs)
    out.emplace_back(n, res.model->get({n, 0, Plane::Input}));
  return out;
}

}  // namespace cforge
