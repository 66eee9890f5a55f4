#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cforge {

enum class Sort : uint8_t { Int, Bool };

inline const char* to_string(Sort s) { return s == Sort::Int ? "Int" : "Bool"; }

// A contract variable at a concrete unrolling index. State-plane symbols are
// rendered `name$index`, input-plane symbols `name@index`; both are plain
// SMT-LIB simple symbols.
enum class Plane : uint8_t { State, Input };

struct IndexedSymbol {
  std::string name;
  int index = 0;
  Plane plane = Plane::State;

  auto operator<=>(const IndexedSymbol&) const = default;
  std::string str() const {
    return name + (plane == Plane::State ? "$" : "@") + std::to_string(index);
  }
};

// Inverse of IndexedSymbol::str. Returns nullopt on malformed text.
std::optional<IndexedSymbol> parse_indexed_symbol(const std::string& text);

struct SymbolDecl {
  IndexedSymbol sym;
  Sort sort = Sort::Int;
  bool operator==(const SymbolDecl&) const = default;
};

// Runtime value: Int values are arbitrary precision.
struct Value {
  Sort sort = Sort::Bool;
  bool b = false;
  mpz_class z;

  static Value of_bool(bool v) {
    Value r;
    r.sort = Sort::Bool;
    r.b = v;
    return r;
  }
  static Value of_int(mpz_class v) {
    Value r;
    r.sort = Sort::Int;
    r.z = std::move(v);
    return r;
  }
  bool operator==(const Value& o) const {
    if (sort != o.sort) return false;
    return sort == Sort::Bool ? b == o.b : z == o.z;
  }
  std::string str() const {
    return sort == Sort::Bool ? (b ? "true" : "false") : z.get_str();
  }
};

// Reference into a synthesized implementation's history arrays: element 0 is
// the current value, element d the value d steps back. Only appears in
// implementation IR, never in solver-bound formulas.
struct HistRef {
  Plane plane = Plane::State;
  std::string var;
  int depth = 0;
  auto operator<=>(const HistRef&) const = default;
};

enum class TermKind : uint8_t {
  IntConst,
  BoolConst,
  Sym,
  Hist,
  Add,   // n-ary
  Neg,   // unary minus
  Mul,   // binary; at least one side an IntConst (linearity)
  Ite,   // cond, then, else; then/else share a sort
  Not,
  And,   // n-ary
  Or,    // n-ary
  Cmp,   // comparison / equality; Eq is also boolean iff
};

enum class CmpOp : uint8_t { Lt, Le, Eq, Ge, Gt };

class Term;
using TermPtr = std::shared_ptr<const Term>;

class Term {
 public:
  TermKind kind;
  Sort sort;
  mpz_class ival;      // IntConst
  bool bval = false;   // BoolConst
  IndexedSymbol sym;   // Sym
  HistRef hist;        // Hist
  CmpOp cmp = CmpOp::Eq;
  std::vector<TermPtr> kids;
  size_t hash = 0;

  bool is_const() const {
    return kind == TermKind::IntConst || kind == TermKind::BoolConst;
  }
};

bool term_eq(const TermPtr& a, const TermPtr& b);

struct TermHash {
  size_t operator()(const TermPtr& t) const { return t ? t->hash : 0; }
};
struct TermEq {
  bool operator()(const TermPtr& a, const TermPtr& b) const {
    return term_eq(a, b);
  }
};

// Builders. `implies` is normalized to or(not a, b) and `distinct` to
// not(eq) so downstream passes only see the core kinds.
namespace tb {
TermPtr int_const(mpz_class v);
TermPtr bool_const(bool v);
TermPtr sym(IndexedSymbol s, Sort sort);
TermPtr hist(HistRef h, Sort sort);
TermPtr add(std::vector<TermPtr> kids);
TermPtr sub(TermPtr a, TermPtr b);
TermPtr neg(TermPtr a);
TermPtr mul(TermPtr a, TermPtr b);
TermPtr ite(TermPtr c, TermPtr t, TermPtr e);
TermPtr not_(TermPtr a);
TermPtr and_(std::vector<TermPtr> kids);
TermPtr or_(std::vector<TermPtr> kids);
TermPtr implies(TermPtr a, TermPtr b);
TermPtr cmp(CmpOp op, TermPtr a, TermPtr b);
TermPtr eq(TermPtr a, TermPtr b);
TermPtr distinct(TermPtr a, TermPtr b);
}  // namespace tb

using SymbolEnv = std::function<Value(const IndexedSymbol&)>;
using HistEnv = std::function<Value(const HistRef&)>;

// Evaluates a term under an environment. `hist_env` may be null when the
// term contains no history references.
Value eval_term(const TermPtr& t, const SymbolEnv& env,
                const HistEnv* hist_env = nullptr);

// Rebuilds `t` with every symbol index shifted by the per-plane delta.
TermPtr shift_indices(const TermPtr& t, int state_delta, int input_delta);

// Capture-free substitution of symbols by terms.
TermPtr substitute(const TermPtr& t,
                   const std::map<IndexedSymbol, TermPtr>& map);

void collect_symbols(const TermPtr& t, std::set<IndexedSymbol>& out);
bool contains_symbol_of(const TermPtr& t, const std::set<IndexedSymbol>& vars);

// Bottom-up constant folding (pure; keeps non-constant structure intact).
TermPtr simplify(const TermPtr& t);

// Debug / dump rendering in SMT-LIB concrete syntax.
std::string term_to_smt2(const TermPtr& t);

}  // namespace cforge
