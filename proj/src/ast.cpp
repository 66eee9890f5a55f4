#include "cforge/ast.hpp"

#include <sstream>

namespace cforge {

namespace eb {

ExprPtr int_lit(mpz_class v, SourcePos pos) {
  Expr e;
  e.kind = ExprKind::IntLit;
  e.ival = std::move(v);
  e.pos = pos;
  return std::make_shared<const Expr>(std::move(e));
}

ExprPtr bool_lit(bool v, SourcePos pos) {
  Expr e;
  e.kind = ExprKind::BoolLit;
  e.bval = v;
  e.pos = pos;
  return std::make_shared<const Expr>(std::move(e));
}

ExprPtr var(std::string name, SourcePos pos) {
  Expr e;
  e.kind = ExprKind::Var;
  e.name = std::move(name);
  e.pos = pos;
  return std::make_shared<const Expr>(std::move(e));
}

ExprPtr unary(ExprKind k, ExprPtr a, SourcePos pos) {
  Expr e;
  e.kind = k;
  e.kids = {std::move(a)};
  e.pos = pos;
  return std::make_shared<const Expr>(std::move(e));
}

ExprPtr binary(ExprKind k, ExprPtr a, ExprPtr b, SourcePos pos) {
  Expr e;
  e.kind = k;
  e.kids = {std::move(a), std::move(b)};
  e.pos = pos;
  return std::make_shared<const Expr>(std::move(e));
}

ExprPtr ite(ExprPtr c, ExprPtr t, ExprPtr el, SourcePos pos) {
  Expr e;
  e.kind = ExprKind::Ite;
  e.kids = {std::move(c), std::move(t), std::move(el)};
  e.pos = pos;
  return std::make_shared<const Expr>(std::move(e));
}

ExprPtr call(std::string name, std::vector<ExprPtr> args, SourcePos pos) {
  Expr e;
  e.kind = ExprKind::Call;
  e.name = std::move(name);
  e.kids = std::move(args);
  e.pos = pos;
  return std::make_shared<const Expr>(std::move(e));
}

ExprPtr with_sort(const ExprPtr& e, Sort s) {
  Expr copy = *e;
  copy.sort = s;
  return std::make_shared<const Expr>(std::move(copy));
}

}  // namespace eb

const NodeDef* ContractSpec::find_node(const std::string& n) const {
  for (const auto& nd : nodes)
    if (nd.name == n) return &nd;
  return nullptr;
}

std::optional<Sort> ContractSpec::var_sort(const std::string& n) const {
  for (const auto& [name, sort] : inputs)
    if (name == n) return sort;
  for (const auto& [name, sort] : outputs)
    if (name == n) return sort;
  return std::nullopt;
}

bool ContractSpec::is_input(const std::string& n) const {
  for (const auto& [name, sort] : inputs)
    if (name == n) return true;
  return false;
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case ExprKind::IntLit:
      if (a->ival != b->ival) return false;
      break;
    case ExprKind::BoolLit:
      if (a->bval != b->bval) return false;
      break;
    case ExprKind::Var:
    case ExprKind::Call:
      if (a->name != b->name) return false;
      break;
    default:
      break;
  }
  if (a->kids.size() != b->kids.size()) return false;
  for (size_t i = 0; i < a->kids.size(); ++i)
    if (!expr_equal(a->kids[i], b->kids[i])) return false;
  return true;
}

bool spec_equal(const ContractSpec& a, const ContractSpec& b) {
  if (a.name != b.name || a.inputs != b.inputs || a.outputs != b.outputs)
    return false;
  if (a.nodes.size() != b.nodes.size()) return false;
  for (size_t i = 0; i < a.nodes.size(); ++i) {
    const auto& x = a.nodes[i];
    const auto& y = b.nodes[i];
    if (x.name != y.name || x.params != y.params || x.result != y.result ||
        !expr_equal(x.body, y.body))
      return false;
  }
  auto items_equal = [](const std::vector<LabeledExpr>& xs,
                        const std::vector<LabeledExpr>& ys) {
    if (xs.size() != ys.size()) return false;
    for (size_t i = 0; i < xs.size(); ++i)
      if (xs[i].label != ys[i].label || !expr_equal(xs[i].expr, ys[i].expr))
        return false;
    return true;
  };
  return items_equal(a.assumptions, b.assumptions) &&
         items_equal(a.guarantees, b.guarantees);
}

namespace {

// Precedence levels, loosest first; mirrors the parser.
int prec(ExprKind k) {
  switch (k) {
    // if-then-else extends maximally to the right, so it binds loosest.
    case ExprKind::Ite: return 1;
    case ExprKind::Arrow: return 1;
    case ExprKind::Implies: return 2;
    case ExprKind::Or: return 3;
    case ExprKind::And: return 4;
    case ExprKind::Not: return 5;
    case ExprKind::Lt:
    case ExprKind::Le:
    case ExprKind::Eq:
    case ExprKind::Ge:
    case ExprKind::Gt: return 6;
    case ExprKind::Add:
    case ExprKind::Sub: return 7;
    case ExprKind::Mul: return 8;
    case ExprKind::Negate:
    case ExprKind::Pre: return 9;
    default: return 10;
  }
}

void print(std::ostringstream& os, const ExprPtr& e, int min_prec) {
  const int p = prec(e->kind);
  const bool paren = p < min_prec;
  if (paren) os << "(";
  auto bin = [&](const char* op, bool right_assoc) {
    // Left-assoc ops require a tighter right child; right-assoc the mirror.
    print(os, e->kids[0], right_assoc ? p + 1 : p);
    os << " " << op << " ";
    print(os, e->kids[1], right_assoc ? p : p + 1);
  };
  switch (e->kind) {
    case ExprKind::IntLit: os << e->ival.get_str(); break;
    case ExprKind::BoolLit: os << (e->bval ? "true" : "false"); break;
    case ExprKind::Var: os << e->name; break;
    case ExprKind::Arrow: bin("->", true); break;
    case ExprKind::Implies: bin("=>", true); break;
    case ExprKind::Or: bin("or", false); break;
    case ExprKind::And: bin("and", false); break;
    case ExprKind::Not:
      os << "not ";
      print(os, e->kids[0], p);
      break;
    case ExprKind::Lt: bin("<", false); break;
    case ExprKind::Le: bin("<=", false); break;
    case ExprKind::Eq: bin("=", false); break;
    case ExprKind::Ge: bin(">=", false); break;
    case ExprKind::Gt: bin(">", false); break;
    case ExprKind::Add: bin("+", false); break;
    case ExprKind::Sub: bin("-", false); break;
    case ExprKind::Mul: bin("*", false); break;
    case ExprKind::Negate:
      // p + 1 so that --x never prints (it would lex as a comment).
      os << "-";
      print(os, e->kids[0], p + 1);
      break;
    case ExprKind::Pre:
      os << "pre ";
      print(os, e->kids[0], p);
      break;
    case ExprKind::Ite:
      os << "if ";
      print(os, e->kids[0], 1);
      os << " then ";
      print(os, e->kids[1], 1);
      os << " else ";
      print(os, e->kids[2], 1);
      break;
    case ExprKind::Call:
      os << e->name << "(";
      for (size_t i = 0; i < e->kids.size(); ++i) {
        if (i) os << ", ";
        print(os, e->kids[i], 1);
      }
      os << ")";
      break;
  }
  if (paren) os << ")";
}

std::string quote(const std::string& s) {
  std::string r = "\"";
  for (char c : s) {
    if (c == '"') r += "\"\"";
    else r += c;
  }
  return r + "\"";
}

}  // namespace

std::string print_expr(const ExprPtr& e) {
  std::ostringstream os;
  print(os, e, 0);
  return os.str();
}

std::string print_contract(const ContractSpec& spec) {
  std::ostringstream os;
  os << "contract " << spec.name << " {\n";
  for (const auto& [n, s] : spec.inputs)
    os << "  input " << n << ": " << (s == Sort::Int ? "int" : "bool") << ";\n";
  for (const auto& [n, s] : spec.outputs)
    os << "  output " << n << ": " << (s == Sort::Int ? "int" : "bool")
       << ";\n";
  for (const auto& nd : spec.nodes) {
    os << "  node " << nd.name << "(";
    for (size_t i = 0; i < nd.params.size(); ++i) {
      if (i) os << ", ";
      os << nd.params[i].first << ": "
         << (nd.params[i].second == Sort::Int ? "int" : "bool");
    }
    os << "): " << (nd.result == Sort::Int ? "int" : "bool") << " = "
       << print_expr(nd.body) << ";\n";
  }
  for (const auto& a : spec.assumptions) {
    os << "  assume ";
    if (a.label) os << quote(*a.label) << " ";
    os << print_expr(a.expr) << ";\n";
  }
  for (const auto& g : spec.guarantees) {
    os << "  guarantee ";
    if (g.label) os << quote(*g.label) << " ";
    os << print_expr(g.expr) << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace cforge
