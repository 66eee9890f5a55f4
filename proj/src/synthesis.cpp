#include "cforge/synthesis.hpp"

namespace cforge {

namespace {

Value eval_ground(const TermPtr& t) {
  return eval_term(t, [](const IndexedSymbol& s) -> Value {
    throw InternalError("expected a ground term, found " + s.str());
  });
}

SkolemRelation expect_valid(AeValOutcome o, const std::string& what) {
  if (o.tag != AeValTag::Valid)
    throw InternalError("synthesis invariant breach: " + what +
                        " no longer valid after a realizable verdict" +
                        (o.reason.empty() ? "" : " (" + o.reason + ")"));
  return std::move(o.skolem);
}

}  // namespace

SynthesisOutcome synthesize(const ContractSystem& sys, int max_k,
                            Solver& solver) {
  SynthesisOutcome out;
  out.verdict = check_realizability(sys, max_k, solver);
  if (out.verdict.tag != VerdictTag::Realizable) return out;
  const int k = out.verdict.k;

  SynthesisPlan plan;
  plan.k = k;

  // Concrete initial state: the witness query is universal-free, so its
  // single partition assigns constants.
  SkolemRelation gi =
      expect_valid(ae_val(build_gi_witness_query(sys), solver), "G_I witness");
  if (gi.partitions.empty())
    throw InternalError("G_I witness produced no partition");
  std::map<std::string, Value> gi_vals;
  for (const auto& [sym, term] : gi.partitions.front().assigns)
    gi_vals[sym.name] = eval_ground(term);
  for (const auto& v : sys.state_vars) {
    auto it = gi_vals.find(v.name);
    Value val = it != gi_vals.end()
                    ? it->second
                    : (v.sort == Sort::Bool ? Value::of_bool(false)
                                            : Value::of_int(0));
    plan.gi_witness.emplace_back(v.name, val);
  }

  for (int j = 1; j <= k; ++j)
    plan.base_skolems.push_back(
        expect_valid(ae_val(build_base_check_prime(sys, j - 1), solver),
                     "base step " + std::to_string(j)));
  plan.extend_skolem = expect_valid(
      ae_val(build_extend_check(sys, k), solver), "extend step");

  out.plan = std::move(plan);
  return out;
}

SynthesisOutcome synthesize(const ContractSystem& sys, int max_k,
                            const SolverConfig& config) {
  Solver solver(config);
  return synthesize(sys, max_k, solver);
}

namespace {

// Rewrites symbols to history references relative to the block's current
// frame index: state/input index i becomes history element frame - i.
TermPtr to_history(const TermPtr& t, int frame, int history_len) {
  if (t->kind == TermKind::Sym) {
    const int depth = frame - t->sym.index;
    if (depth < 0 || depth >= history_len)
      throw InternalError("unmapped symbol in plan: " + t->sym.str() +
                          " at frame " + std::to_string(frame));
    return tb::hist({t->sym.plane, t->sym.name, depth}, t->sort);
  }
  if (t->kids.empty()) return t;
  std::vector<TermPtr> kids;
  bool changed = false;
  for (const auto& kid : t->kids) {
    TermPtr nk = to_history(kid, frame, history_len);
    changed |= nk.get() != kid.get();
    kids.push_back(std::move(nk));
  }
  if (!changed) return t;
  switch (t->kind) {
    case TermKind::Add: return tb::add(std::move(kids));
    case TermKind::Neg: return tb::neg(kids[0]);
    case TermKind::Mul: return tb::mul(kids[0], kids[1]);
    case TermKind::Ite: return tb::ite(kids[0], kids[1], kids[2]);
    case TermKind::Not: return tb::not_(kids[0]);
    case TermKind::And: return tb::and_(std::move(kids));
    case TermKind::Or: return tb::or_(std::move(kids));
    case TermKind::Cmp: return tb::cmp(t->cmp, kids[0], kids[1]);
    default:
      throw InternalError("to_history: unexpected kind");
  }
}

IrBlock relation_to_block(const SkolemRelation& rel,
                          const ContractSystem& sys, int frame,
                          int history_len) {
  if (rel.partitions.empty()) {
    // Vacuously valid check (unsatisfiable premise): the step can never be
    // reached by assumption-satisfying inputs. Emit a total default branch
    // that holds the state and clears the init flag.
    IrBranch br;
    br.guard = tb::bool_const(true);
    for (const auto& v : sys.state_vars) {
      if (v.role == VarRole::InitFlag)
        br.assigns.emplace_back(v.name, tb::bool_const(false));
      else
        br.assigns.emplace_back(v.name,
                                tb::hist({Plane::State, v.name, 0}, v.sort));
    }
    IrBlock block;
    block.branches.push_back(std::move(br));
    return block;
  }
  IrBlock block;
  for (const auto& p : rel.partitions) {
    IrBranch br;
    br.guard = to_history(p.guard, frame, history_len);
    std::map<std::string, TermPtr> by_name;
    for (const auto& [sym, term] : p.assigns)
      by_name[sym.name] = to_history(term, frame, history_len);
    for (const auto& v : sys.state_vars) {
      auto it = by_name.find(v.name);
      if (it == by_name.end())
        throw InternalError("plan_to_ir: state variable " + v.name +
                            " unassigned in a partition");
      br.assigns.emplace_back(v.name, it->second);
    }
    block.branches.push_back(std::move(br));
  }
  return block;
}

}  // namespace

ImplIR plan_to_ir(const SynthesisPlan& plan, const ContractSystem& sys) {
  ImplIR ir;
  ir.contract_name = sys.name;
  ir.history_len = plan.k + 1;
  for (const auto& v : sys.state_vars) ir.state_vars.push_back({v.name, v.sort});
  for (const auto& [n, s] : sys.inputs) ir.inputs.push_back({n, s});
  ir.outputs = sys.output_names();
  ir.init_assign = plan.gi_witness;

  if (static_cast<int>(plan.base_skolems.size()) != plan.k)
    throw InternalError("plan_to_ir: base skolem count mismatch");
  for (int j = 1; j <= plan.k; ++j)
    ir.step_blocks.push_back(relation_to_block(plan.base_skolems[j - 1], sys,
                                               j - 1, ir.history_len));
  ir.loop_block =
      relation_to_block(plan.extend_skolem, sys, plan.k, ir.history_len);
  return ir;
}

}  // namespace cforge
