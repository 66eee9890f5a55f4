#include "cforge/typecheck.hpp"

#include <map>

namespace cforge {

namespace {

bool is_builtin(const std::string& name) {
  return name == "rising_edge" || name == "initially_true";
}

ExprPtr substitute_params(const ExprPtr& e,
                          const std::map<std::string, ExprPtr>& args) {
  if (e->kind == ExprKind::Var) {
    auto it = args.find(e->name);
    return it == args.end() ? e : it->second;
  }
  if (e->kids.empty()) return e;
  Expr copy = *e;
  for (auto& k : copy.kids) k = substitute_params(k, args);
  return std::make_shared<const Expr>(std::move(copy));
}

ExprPtr expand_builtin(const std::string& name, const ExprPtr& arg,
                       SourcePos pos) {
  if (name == "rising_edge") {
    // x -> (x and not pre x)
    return eb::binary(
        ExprKind::Arrow, arg,
        eb::binary(ExprKind::And, arg,
                   eb::unary(ExprKind::Not, eb::unary(ExprKind::Pre, arg, pos),
                             pos),
                   pos),
        pos);
  }
  // initially_true: x -> true
  return eb::binary(ExprKind::Arrow, arg, eb::bool_lit(true, pos), pos);
}

class Checker {
 public:
  explicit Checker(const ContractSpec& spec) : spec_(spec) {}

  TypedContract run() {
    TypedContract out;
    out.spec.name = spec_.name;
    out.spec.inputs = spec_.inputs;
    out.spec.outputs = spec_.outputs;

    for (const auto& nd : spec_.nodes) {
      if (is_builtin(nd.name))
        throw SortError(nd.pos, "node name '" + nd.name + "' is a builtin");
      if (spec_.var_sort(nd.name))
        throw SortError(nd.pos,
                        "node '" + nd.name + "' collides with a variable");
      NodeDef expanded = nd;
      expanded.body = expand(nd.body, &nd);
      Sort got = check(expanded.body, &nd, false);
      if (got != nd.result)
        throw SortError(nd.pos, "node '" + nd.name + "' body has sort " +
                                    to_string(got) + ", declared " +
                                    to_string(nd.result));
      expanded.body = fold(expanded.body);
      check_linear(expanded.body);
      expanded.body = annotate(expanded.body, &nd);
      nodes_.push_back(std::move(expanded));
    }
    out.spec.nodes = nodes_;

    auto do_items = [&](const std::vector<LabeledExpr>& in,
                        const char* what) {
      std::vector<LabeledExpr> result;
      for (const auto& le : in) {
        LabeledExpr r;
        r.label = le.label;
        r.expr = expand(le.expr, nullptr);
        Sort got = check(r.expr, nullptr, true);
        if (got != Sort::Bool)
          throw SortError(le.expr->pos,
                          std::string(what) + " expression must be bool");
        r.expr = fold(r.expr);
        check_linear(r.expr);
        r.expr = annotate(r.expr, nullptr);
        result.push_back(std::move(r));
      }
      return result;
    };
    out.spec.assumptions = do_items(spec_.assumptions, "assume");
    out.spec.guarantees = do_items(spec_.guarantees, "guarantee");
    return out;
  }

 private:
  // Inlines calls. Inside node bodies (node != nullptr) temporal operators
  // and builtin calls are rejected; only previously checked nodes may be
  // called, which rules out recursion.
  ExprPtr expand(const ExprPtr& e, const NodeDef* node) {
    if (e->kind == ExprKind::Call) {
      if (is_builtin(e->name)) {
        if (node)
          throw SortError(e->pos, "builtin '" + e->name +
                                      "' not allowed inside a node body");
        if (e->kids.size() != 1)
          throw SortError(e->pos, "'" + e->name + "' takes one argument");
        return expand(expand_builtin(e->name, expand(e->kids[0], node), e->pos),
                      node);
      }
      const NodeDef* callee = nullptr;
      for (const auto& nd : nodes_)
        if (nd.name == e->name) callee = &nd;
      if (!callee) {
        for (const auto& nd : spec_.nodes)
          if (nd.name == e->name)
            throw SortError(e->pos, "recursive node reference '" + e->name +
                                        "' (nodes may only call earlier nodes)");
        throw SortError(e->pos, "unknown node '" + e->name + "'");
      }
      if (callee->params.size() != e->kids.size())
        throw SortError(e->pos, "node '" + e->name + "' expects " +
                                    std::to_string(callee->params.size()) +
                                    " arguments");
      std::map<std::string, ExprPtr> args;
      for (size_t i = 0; i < e->kids.size(); ++i) {
        ExprPtr a = expand(e->kids[i], node);
        Sort got = check(a, node, node == nullptr);
        if (got != callee->params[i].second)
          throw SortError(e->kids[i]->pos,
                          "argument " + std::to_string(i + 1) + " of '" +
                              e->name + "' has sort " + to_string(got) +
                              ", expected " +
                              to_string(callee->params[i].second));
        args[callee->params[i].first] = std::move(a);
      }
      return substitute_params(callee->body, args);
    }
    if ((e->kind == ExprKind::Pre || e->kind == ExprKind::Arrow) && node)
      throw SortError(e->pos, "temporal operator not allowed inside a node body");
    if (e->kids.empty()) return e;
    Expr copy = *e;
    for (auto& k : copy.kids) k = expand(k, node);
    return std::make_shared<const Expr>(std::move(copy));
  }

  Sort check(const ExprPtr& e, const NodeDef* node, bool temporal_ok) {
    auto want = [&](const ExprPtr& kid, Sort s, const char* ctx) {
      Sort got = check(kid, node, temporal_ok);
      if (got != s)
        throw SortError(kid->pos, std::string(ctx) + " operand has sort " +
                                      to_string(got) + ", expected " +
                                      to_string(s));
    };
    switch (e->kind) {
      case ExprKind::IntLit: return Sort::Int;
      case ExprKind::BoolLit: return Sort::Bool;
      case ExprKind::Var: {
        if (node) {
          for (const auto& [pn, ps] : node->params)
            if (pn == e->name) return ps;
          throw SortError(e->pos, "unknown identifier '" + e->name +
                                      "' (node bodies reference only parameters)");
        }
        if (auto s = spec_.var_sort(e->name)) return *s;
        throw SortError(e->pos, "unknown identifier '" + e->name + "'");
      }
      case ExprKind::Not:
        want(e->kids[0], Sort::Bool, "not");
        return Sort::Bool;
      case ExprKind::Negate:
        want(e->kids[0], Sort::Int, "unary minus");
        return Sort::Int;
      case ExprKind::Add:
      case ExprKind::Sub:
      case ExprKind::Mul:
        want(e->kids[0], Sort::Int, "arithmetic");
        want(e->kids[1], Sort::Int, "arithmetic");
        return Sort::Int;
      case ExprKind::Lt:
      case ExprKind::Le:
      case ExprKind::Ge:
      case ExprKind::Gt:
        want(e->kids[0], Sort::Int, "comparison");
        want(e->kids[1], Sort::Int, "comparison");
        return Sort::Bool;
      case ExprKind::Eq: {
        Sort a = check(e->kids[0], node, temporal_ok);
        Sort b = check(e->kids[1], node, temporal_ok);
        if (a != b)
          throw SortError(e->pos, "'=' operands have different sorts");
        return Sort::Bool;
      }
      case ExprKind::And:
      case ExprKind::Or:
      case ExprKind::Implies:
        want(e->kids[0], Sort::Bool, "logical");
        want(e->kids[1], Sort::Bool, "logical");
        return Sort::Bool;
      case ExprKind::Ite: {
        want(e->kids[0], Sort::Bool, "if");
        Sort t = check(e->kids[1], node, temporal_ok);
        Sort f = check(e->kids[2], node, temporal_ok);
        if (t != f)
          throw SortError(e->pos, "if branches have different sorts");
        return t;
      }
      case ExprKind::Pre: {
        if (!temporal_ok)
          throw SortError(e->pos, "'pre' not allowed here");
        return check(e->kids[0], node, temporal_ok);
      }
      case ExprKind::Arrow: {
        if (!temporal_ok)
          throw SortError(e->pos, "'->' not allowed here");
        Sort a = check(e->kids[0], node, temporal_ok);
        Sort b = check(e->kids[1], node, temporal_ok);
        if (a != b)
          throw SortError(e->pos, "'->' operands have different sorts");
        return a;
      }
      case ExprKind::Call:
        throw InternalError("check: call survived expansion");
    }
    throw InternalError("check: unhandled kind");
  }

  // Folds fully-literal subexpressions so that e.g. 2*3*x stays linear.
  ExprPtr fold(const ExprPtr& e) {
    if (e->kids.empty()) return e;
    std::vector<ExprPtr> kids;
    kids.reserve(e->kids.size());
    for (const auto& k : e->kids) kids.push_back(fold(k));
    auto lit = [](const ExprPtr& k) { return k->kind == ExprKind::IntLit; };
    auto blit = [](const ExprPtr& k) { return k->kind == ExprKind::BoolLit; };
    switch (e->kind) {
      case ExprKind::Add:
        if (lit(kids[0]) && lit(kids[1]))
          return eb::int_lit(kids[0]->ival + kids[1]->ival, e->pos);
        break;
      case ExprKind::Sub:
        if (lit(kids[0]) && lit(kids[1]))
          return eb::int_lit(kids[0]->ival - kids[1]->ival, e->pos);
        break;
      case ExprKind::Mul:
        if (lit(kids[0]) && lit(kids[1]))
          return eb::int_lit(kids[0]->ival * kids[1]->ival, e->pos);
        break;
      case ExprKind::Negate:
        if (lit(kids[0])) return eb::int_lit(-kids[0]->ival, e->pos);
        break;
      case ExprKind::Not:
        if (blit(kids[0])) return eb::bool_lit(!kids[0]->bval, e->pos);
        break;
      case ExprKind::And:
        if (blit(kids[0]) && blit(kids[1]))
          return eb::bool_lit(kids[0]->bval && kids[1]->bval, e->pos);
        break;
      case ExprKind::Or:
        if (blit(kids[0]) && blit(kids[1]))
          return eb::bool_lit(kids[0]->bval || kids[1]->bval, e->pos);
        break;
      default:
        break;
    }
    Expr copy = *e;
    copy.kids = std::move(kids);
    return std::make_shared<const Expr>(std::move(copy));
  }

  void check_linear(const ExprPtr& e) {
    if (e->kind == ExprKind::Mul) {
      if (e->kids[0]->kind != ExprKind::IntLit &&
          e->kids[1]->kind != ExprKind::IntLit)
        throw SortError(e->pos,
                        "nonlinear multiplication (one operand must be a "
                        "literal)");
    }
    for (const auto& k : e->kids) check_linear(k);
  }

  ExprPtr annotate(const ExprPtr& e, const NodeDef* node) {
    Expr copy = *e;
    for (auto& k : copy.kids) k = annotate(k, node);
    ExprPtr rebuilt = std::make_shared<const Expr>(std::move(copy));
    return eb::with_sort(rebuilt, check(rebuilt, node, true));
  }

  const ContractSpec& spec_;
  std::vector<NodeDef> nodes_;
};

}  // namespace

TypedContract typecheck_and_expand(const ContractSpec& spec) {
  return Checker(spec).run();
}

namespace {
bool expr_expanded(const ExprPtr& e) {
  if (e->kind == ExprKind::Call) return false;
  for (const auto& k : e->kids)
    if (!expr_expanded(k)) return false;
  return true;
}
}  // namespace

bool fully_expanded(const ContractSpec& spec) {
  for (const auto& nd : spec.nodes)
    if (!expr_expanded(nd.body)) return false;
  for (const auto& a : spec.assumptions)
    if (!expr_expanded(a.expr)) return false;
  for (const auto& g : spec.guarantees)
    if (!expr_expanded(g.expr)) return false;
  return true;
}

}  // namespace cforge
