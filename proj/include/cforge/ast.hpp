#pragma once

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cforge/diag.hpp"
#include "cforge/term.hpp"

namespace cforge {

enum class ExprKind : uint8_t {
  IntLit,
  BoolLit,
  Var,
  Not,
  Negate,
  Add,
  Sub,
  Mul,
  Lt,
  Le,
  Eq,
  Ge,
  Gt,
  And,
  Or,
  Implies,
  Ite,
  Pre,
  Arrow,   // a -> b : a at the initial instant, b afterwards
  Call,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprKind kind;
  mpz_class ival;               // IntLit
  bool bval = false;            // BoolLit
  std::string name;             // Var / Call
  std::vector<ExprPtr> kids;
  SourcePos pos;
  std::optional<Sort> sort;     // filled in by the typechecker
};

namespace eb {
ExprPtr int_lit(mpz_class v, SourcePos pos = {});
ExprPtr bool_lit(bool v, SourcePos pos = {});
ExprPtr var(std::string name, SourcePos pos = {});
ExprPtr unary(ExprKind k, ExprPtr a, SourcePos pos = {});
ExprPtr binary(ExprKind k, ExprPtr a, ExprPtr b, SourcePos pos = {});
ExprPtr ite(ExprPtr c, ExprPtr t, ExprPtr e, SourcePos pos = {});
ExprPtr call(std::string name, std::vector<ExprPtr> args, SourcePos pos = {});
ExprPtr with_sort(const ExprPtr& e, Sort s);
}  // namespace eb

struct NodeDef {
  std::string name;
  std::vector<std::pair<std::string, Sort>> params;
  Sort result = Sort::Bool;
  ExprPtr body;
  SourcePos pos;
};

struct LabeledExpr {
  std::optional<std::string> label;
  ExprPtr expr;
};

struct ContractSpec {
  std::string name;
  std::vector<std::pair<std::string, Sort>> inputs;
  std::vector<std::pair<std::string, Sort>> outputs;
  std::vector<NodeDef> nodes;
  std::vector<LabeledExpr> assumptions;
  std::vector<LabeledExpr> guarantees;

  const NodeDef* find_node(const std::string& n) const;
  std::optional<Sort> var_sort(const std::string& n) const;
  bool is_input(const std::string& n) const;
};

// Structural equality, ignoring positions and sort annotations.
bool expr_equal(const ExprPtr& a, const ExprPtr& b);
bool spec_equal(const ContractSpec& a, const ContractSpec& b);

// Pretty-printing; print_contract output re-parses to an equal ContractSpec.
std::string print_expr(const ExprPtr& e);
std::string print_contract(const ContractSpec& spec);

}  // namespace cforge
