#include "cforge/system.hpp"

#include <map>

namespace cforge {

TermPtr ContractSystem::assumption() const {
  std::vector<TermPtr> ts;
  for (const auto& p : assumption_parts) ts.push_back(p.term);
  return tb::and_(std::move(ts));
}

TermPtr ContractSystem::initial() const {
  std::vector<TermPtr> ts;
  for (const auto& p : initial_parts) ts.push_back(p.term);
  return tb::and_(std::move(ts));
}

TermPtr ContractSystem::transition() const {
  std::vector<TermPtr> ts;
  for (const auto& p : transition_parts) ts.push_back(p.term);
  return tb::and_(std::move(ts));
}

std::vector<SymbolDecl> ContractSystem::state_decls(int index) const {
  std::vector<SymbolDecl> ds;
  ds.reserve(state_vars.size());
  for (const auto& v : state_vars)
    ds.push_back({IndexedSymbol{v.name, index, Plane::State}, v.sort});
  return ds;
}

std::vector<SymbolDecl> ContractSystem::input_decls(int index) const {
  std::vector<SymbolDecl> ds;
  ds.reserve(inputs.size());
  for (const auto& [n, s] : inputs)
    ds.push_back({IndexedSymbol{n, index, Plane::Input}, s});
  return ds;
}

const SysVar* ContractSystem::find_state(const std::string& name) const {
  for (const auto& v : state_vars)
    if (v.name == name) return &v;
  return nullptr;
}

size_t ContractSystem::register_count() const {
  size_t n = 0;
  for (const auto& v : state_vars)
    if (v.role == VarRole::Register) n++;
  return n;
}

std::vector<std::string> ContractSystem::output_names() const {
  std::vector<std::string> ns;
  for (const auto& v : state_vars)
    if (v.role == VarRole::Output) ns.push_back(v.name);
  return ns;
}

namespace {

// Lowering context. Registers are keyed by the structure of the expression
// under `pre`; identical occurrences share one register.
class Lowerer {
 public:
  explicit Lowerer(const TypedContract& contract) : spec_(contract.spec) {
    sys_.name = spec_.name;
    sys_.inputs = spec_.inputs;
    for (const auto& [n, s] : spec_.inputs)
      sys_.state_vars.push_back({n, s, VarRole::InputMirror, nullptr});
    for (const auto& [n, s] : spec_.outputs)
      sys_.state_vars.push_back({n, s, VarRole::Output, nullptr});
    for (const auto& a : spec_.assumptions) discover_registers(a.expr);
    for (const auto& g : spec_.guarantees) discover_registers(g.expr);
    sys_.state_vars.push_back({kInitFlag, Sort::Bool, VarRole::InitFlag, nullptr});
  }

  ContractSystem run() {
    for (size_t i = 0; i < spec_.assumptions.size(); ++i) {
      const auto& a = spec_.assumptions[i];
      sys_.assumption_parts.push_back(
          {a.label.value_or("assumption-" + std::to_string(i)),
           assume_mode(a.expr)});
    }
    for (size_t i = 0; i < spec_.guarantees.size(); ++i) {
      const auto& g = spec_.guarantees[i];
      const std::string label =
          g.label.value_or("guarantee-" + std::to_string(i));
      sys_.initial_parts.push_back({label, init_mode(g.expr)});
      sys_.transition_parts.push_back({label, step_mode(g.expr)});
    }
    // Initial states carry the init flag; it is cleared by every transition.
    sys_.initial_parts.push_back({"%init initial", init_flag(0)});
    for (const auto& key : reg_order_) {
      const RegInfo& reg = registers_.at(key);
      sys_.transition_parts.push_back(
          {reg.name + " update",
           tb::eq(tb::sym({reg.name, 1, Plane::State}, reg.sort),
                  step_mode(reg.source))});
    }
    for (const auto& [n, s] : spec_.inputs)
      sys_.transition_parts.push_back(
          {"frame " + n, tb::eq(tb::sym({n, 1, Plane::State}, s),
                                tb::sym({n, 0, Plane::Input}, s))});
    sys_.transition_parts.push_back({"%init step", tb::not_(init_flag(1))});
    return std::move(sys_);
  }

 private:
  struct RegInfo {
    std::string name;
    Sort sort;
    ExprPtr source;
  };

  TermPtr init_flag(int index) const {
    return tb::sym({kInitFlag, index, Plane::State}, Sort::Bool);
  }

  // Post-order so registers for nested `pre` exist before their enclosing
  // occurrence is translated.
  void discover_registers(const ExprPtr& e) {
    for (const auto& k : e->kids) discover_registers(k);
    if (e->kind == ExprKind::Pre) {
      const std::string key = print_expr(e->kids[0]);
      if (registers_.count(key)) return;
      RegInfo info;
      info.name = "%reg" + std::to_string(registers_.size());
      info.sort = e->kids[0]->sort.value();
      info.source = e->kids[0];
      reg_order_.push_back(key);
      registers_.emplace(key, info);
      sys_.state_vars.push_back(
          {info.name, info.sort, VarRole::Register, info.source});
    }
  }

  const RegInfo& register_for(const ExprPtr& under_pre) const {
    auto it = registers_.find(print_expr(under_pre));
    if (it == registers_.end())
      throw InternalError("lower: register not discovered");
    return it->second;
  }

  enum class Mode { Init, Step, Assume };

  TermPtr translate(const ExprPtr& e, Mode mode) {
    switch (e->kind) {
      case ExprKind::IntLit: return tb::int_const(e->ival);
      case ExprKind::BoolLit: return tb::bool_const(e->bval);
      case ExprKind::Var: {
        const Sort s = e->sort.value();
        if (spec_.is_input(e->name)) {
          // Initial-mode reads go through the (unconstrained) mirror; the
          // other modes read the current input directly.
          if (mode == Mode::Init) return tb::sym({e->name, 0, Plane::State}, s);
          return tb::sym({e->name, 0, Plane::Input}, s);
        }
        // Outputs: the constrained instant is s' in step mode, s at the
        // initial instant, and the previous state inside assumptions.
        const int idx = mode == Mode::Step ? 1 : 0;
        return tb::sym({e->name, idx, Plane::State}, s);
      }
      case ExprKind::Pre:
        return tb::sym({register_for(e->kids[0]).name, 0, Plane::State},
                       e->sort.value());
      case ExprKind::Arrow:
        switch (mode) {
          case Mode::Init: return translate(e->kids[0], mode);
          case Mode::Step: return translate(e->kids[1], mode);
          case Mode::Assume:
            // Resolved against the previous state's init flag so A keeps
            // its (s, i) signature.
            return tb::ite(init_flag(0), translate(e->kids[0], mode),
                           translate(e->kids[1], mode));
        }
        break;
      case ExprKind::Not: return tb::not_(translate(e->kids[0], mode));
      case ExprKind::Negate: return tb::neg(translate(e->kids[0], mode));
      case ExprKind::Add:
        return tb::add({translate(e->kids[0], mode), translate(e->kids[1], mode)});
      case ExprKind::Sub:
        return tb::sub(translate(e->kids[0], mode), translate(e->kids[1], mode));
      case ExprKind::Mul:
        return tb::mul(translate(e->kids[0], mode), translate(e->kids[1], mode));
      case ExprKind::Lt:
        return tb::cmp(CmpOp::Lt, translate(e->kids[0], mode),
                       translate(e->kids[1], mode));
      case ExprKind::Le:
        return tb::cmp(CmpOp::Le, translate(e->kids[0], mode),
                       translate(e->kids[1], mode));
      case ExprKind::Eq:
        return tb::eq(translate(e->kids[0], mode), translate(e->kids[1], mode));
      case ExprKind::Ge:
        return tb::cmp(CmpOp::Ge, translate(e->kids[0], mode),
                       translate(e->kids[1], mode));
      case ExprKind::Gt:
        return tb::cmp(CmpOp::Gt, translate(e->kids[0], mode),
                       translate(e->kids[1], mode));
      case ExprKind::And:
        return tb::and_({translate(e->kids[0], mode), translate(e->kids[1], mode)});
      case ExprKind::Or:
        return tb::or_({translate(e->kids[0], mode), translate(e->kids[1], mode)});
      case ExprKind::Implies:
        return tb::implies(translate(e->kids[0], mode),
                           translate(e->kids[1], mode));
      case ExprKind::Ite:
        return tb::ite(translate(e->kids[0], mode), translate(e->kids[1], mode),
                       translate(e->kids[2], mode));
      case ExprKind::Call:
        throw InternalError("lower: call survived expansion");
    }
    throw InternalError("lower: unhandled kind");
  }

  TermPtr init_mode(const ExprPtr& e) { return translate(e, Mode::Init); }
  TermPtr step_mode(const ExprPtr& e) { return translate(e, Mode::Step); }
  TermPtr assume_mode(const ExprPtr& e) { return translate(e, Mode::Assume); }

  const ContractSpec& spec_;
  ContractSystem sys_;
  std::map<std::string, RegInfo> registers_;
  std::vector<std::string> reg_order_;
};

}  // namespace

ContractSystem lower(const TypedContract& contract) {
  return Lowerer(contract).run();
}

}  // namespace cforge
