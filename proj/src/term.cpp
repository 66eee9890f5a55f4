#include "cforge/term.hpp"

#include <sstream>

#include "cforge/diag.hpp"

namespace cforge {

std::optional<IndexedSymbol> parse_indexed_symbol(const std::string& text) {
  auto try_split = [&](char sep, Plane plane) -> std::optional<IndexedSymbol> {
    auto pos = text.rfind(sep);
    if (pos == std::string::npos || pos == 0 || pos + 1 >= text.size())
      return std::nullopt;
    const std::string digits = text.substr(pos + 1);
    for (char c : digits)
      if (!isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    IndexedSymbol s;
    s.name = text.substr(0, pos);
    s.index = std::stoi(digits);
    s.plane = plane;
    return s;
  };
  // '@' never occurs in variable names, '$' only as the separator.
  if (auto s = try_split('@', Plane::Input)) return s;
  return try_split('$', Plane::State);
}

namespace {

size_t mix(size_t h, size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

size_t compute_hash(const Term& t) {
  size_t h = static_cast<size_t>(t.kind) * 1315423911u;
  switch (t.kind) {
    case TermKind::IntConst:
      h = mix(h, std::hash<std::string>()(t.ival.get_str()));
      break;
    case TermKind::BoolConst:
      h = mix(h, t.bval ? 2u : 1u);
      break;
    case TermKind::Sym:
      h = mix(h, std::hash<std::string>()(t.sym.name));
      h = mix(h, static_cast<size_t>(t.sym.index));
      h = mix(h, static_cast<size_t>(t.sym.plane));
      break;
    case TermKind::Hist:
      h = mix(h, std::hash<std::string>()(t.hist.var));
      h = mix(h, static_cast<size_t>(t.hist.depth));
      h = mix(h, static_cast<size_t>(t.hist.plane));
      break;
    case TermKind::Cmp:
      h = mix(h, static_cast<size_t>(t.cmp));
      break;
    default:
      break;
  }
  for (const auto& k : t.kids) h = mix(h, k->hash);
  return h;
}

TermPtr make(Term t) {
  t.hash = compute_hash(t);
  return std::make_shared<const Term>(std::move(t));
}

}  // namespace

bool term_eq(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->hash != b->hash || a->kind != b->kind || a->sort != b->sort)
    return false;
  switch (a->kind) {
    case TermKind::IntConst:
      if (a->ival != b->ival) return false;
      break;
    case TermKind::BoolConst:
      if (a->bval != b->bval) return false;
      break;
    case TermKind::Sym:
      if (a->sym != b->sym) return false;
      break;
    case TermKind::Hist:
      if (a->hist != b->hist) return false;
      break;
    case TermKind::Cmp:
      if (a->cmp != b->cmp) return false;
      break;
    default:
      break;
  }
  if (a->kids.size() != b->kids.size()) return false;
  for (size_t i = 0; i < a->kids.size(); ++i)
    if (!term_eq(a->kids[i], b->kids[i])) return false;
  return true;
}

namespace tb {

TermPtr int_const(mpz_class v) {
  Term t;
  t.kind = TermKind::IntConst;
  t.sort = Sort::Int;
  t.ival = std::move(v);
  return make(std::move(t));
}

TermPtr bool_const(bool v) {
  Term t;
  t.kind = TermKind::BoolConst;
  t.sort = Sort::Bool;
  t.bval = v;
  return make(std::move(t));
}

TermPtr sym(IndexedSymbol s, Sort sort) {
  Term t;
  t.kind = TermKind::Sym;
  t.sort = sort;
  t.sym = std::move(s);
  return make(std::move(t));
}

TermPtr hist(HistRef h, Sort sort) {
  Term t;
  t.kind = TermKind::Hist;
  t.sort = sort;
  t.hist = std::move(h);
  return make(std::move(t));
}

TermPtr add(std::vector<TermPtr> kids) {
  if (kids.size() == 1) return kids[0];
  Term t;
  t.kind = TermKind::Add;
  t.sort = Sort::Int;
  t.kids = std::move(kids);
  return make(std::move(t));
}

TermPtr sub(TermPtr a, TermPtr b) { return add({std::move(a), neg(std::move(b))}); }

TermPtr neg(TermPtr a) {
  Term t;
  t.kind = TermKind::Neg;
  t.sort = Sort::Int;
  t.kids = {std::move(a)};
  return make(std::move(t));
}

TermPtr mul(TermPtr a, TermPtr b) {
  // Keep the literal side first when there is one.
  if (b->kind == TermKind::IntConst && a->kind != TermKind::IntConst)
    std::swap(a, b);
  Term t;
  t.kind = TermKind::Mul;
  t.sort = Sort::Int;
  t.kids = {std::move(a), std::move(b)};
  return make(std::move(t));
}

TermPtr ite(TermPtr c, TermPtr th, TermPtr el) {
  Term t;
  t.kind = TermKind::Ite;
  t.sort = th->sort;
  t.kids = {std::move(c), std::move(th), std::move(el)};
  return make(std::move(t));
}

TermPtr not_(TermPtr a) {
  Term t;
  t.kind = TermKind::Not;
  t.sort = Sort::Bool;
  t.kids = {std::move(a)};
  return make(std::move(t));
}

TermPtr and_(std::vector<TermPtr> kids) {
  if (kids.empty()) return bool_const(true);
  if (kids.size() == 1) return kids[0];
  Term t;
  t.kind = TermKind::And;
  t.sort = Sort::Bool;
  t.kids = std::move(kids);
  return make(std::move(t));
}

TermPtr or_(std::vector<TermPtr> kids) {
  if (kids.empty()) return bool_const(false);
  if (kids.size() == 1) return kids[0];
  Term t;
  t.kind = TermKind::Or;
  t.sort = Sort::Bool;
  t.kids = std::move(kids);
  return make(std::move(t));
}

TermPtr implies(TermPtr a, TermPtr b) {
  return or_({not_(std::move(a)), std::move(b)});
}

TermPtr cmp(CmpOp op, TermPtr a, TermPtr b) {
  Term t;
  t.kind = TermKind::Cmp;
  t.sort = Sort::Bool;
  t.cmp = op;
  t.kids = {std::move(a), std::move(b)};
  return make(std::move(t));
}

TermPtr eq(TermPtr a, TermPtr b) { return cmp(CmpOp::Eq, std::move(a), std::move(b)); }

TermPtr distinct(TermPtr a, TermPtr b) {
  return not_(eq(std::move(a), std::move(b)));
}

}  // namespace tb

Value eval_term(const TermPtr& t, const SymbolEnv& env, const HistEnv* hist_env) {
  switch (t->kind) {
    case TermKind::IntConst:
      return Value::of_int(t->ival);
    case TermKind::BoolConst:
      return Value::of_bool(t->bval);
    case TermKind::Sym:
      return env(t->sym);
    case TermKind::Hist:
      if (!hist_env)
        throw InternalError("history reference evaluated without history");
      return (*hist_env)(t->hist);
    case TermKind::Add: {
      mpz_class acc = 0;
      for (const auto& k : t->kids) acc += eval_term(k, env, hist_env).z;
      return Value::of_int(acc);
    }
    case TermKind::Neg:
      return Value::of_int(-eval_term(t->kids[0], env, hist_env).z);
    case TermKind::Mul:
      return Value::of_int(eval_term(t->kids[0], env, hist_env).z *
                           eval_term(t->kids[1], env, hist_env).z);
    case TermKind::Ite:
      return eval_term(t->kids[0], env, hist_env).b
                 ? eval_term(t->kids[1], env, hist_env)
                 : eval_term(t->kids[2], env, hist_env);
    case TermKind::Not:
      return Value::of_bool(!eval_term(t->kids[0], env, hist_env).b);
    case TermKind::And: {
      for (const auto& k : t->kids)
        if (!eval_term(k, env, hist_env).b) return Value::of_bool(false);
      return Value::of_bool(true);
    }
    case TermKind::Or: {
      for (const auto& k : t->kids)
        if (eval_term(k, env, hist_env).b) return Value::of_bool(true);
      return Value::of_bool(false);
    }
    case TermKind::Cmp: {
      const Value a = eval_term(t->kids[0], env, hist_env);
      const Value b = eval_term(t->kids[1], env, hist_env);
      if (t->cmp == CmpOp::Eq && a.sort == Sort::Bool)
        return Value::of_bool(a.b == b.b);
      switch (t->cmp) {
        case CmpOp::Lt: return Value::of_bool(a.z < b.z);
        case CmpOp::Le: return Value::of_bool(a.z <= b.z);
        case CmpOp::Eq: return Value::of_bool(a.z == b.z);
        case CmpOp::Ge: return Value::of_bool(a.z >= b.z);
        case CmpOp::Gt: return Value::of_bool(a.z > b.z);
      }
      break;
    }
  }
  throw InternalError("eval_term: unhandled kind");
}

namespace {

TermPtr rebuild(const TermPtr& t, std::vector<TermPtr> kids) {
  Term n = *t;
  n.kids = std::move(kids);
  n.hash = 0;
  Term copy = std::move(n);
  copy.hash = compute_hash(copy);
  return std::make_shared<const Term>(std::move(copy));
}

}  // namespace

TermPtr shift_indices(const TermPtr& t, int state_delta, int input_delta) {
  if (t->kind == TermKind::Sym) {
    IndexedSymbol s = t->sym;
    s.index += (s.plane == Plane::State ? state_delta : input_delta);
    return tb::sym(std::move(s), t->sort);
  }
  if (t->kids.empty()) return t;
  std::vector<TermPtr> kids;
  kids.reserve(t->kids.size());
  bool changed = false;
  for (const auto& k : t->kids) {
    TermPtr nk = shift_indices(k, state_delta, input_delta);
    changed |= nk.get() != k.get();
    kids.push_back(std::move(nk));
  }
  return changed ? rebuild(t, std::move(kids)) : t;
}

TermPtr substitute(const TermPtr& t,
                   const std::map<IndexedSymbol, TermPtr>& map) {
  if (t->kind == TermKind::Sym) {
    auto it = map.find(t->sym);
    return it == map.end() ? t : it->second;
  }
  if (t->kids.empty()) return t;
  std::vector<TermPtr> kids;
  kids.reserve(t->kids.size());
  bool changed = false;
  for (const auto& k : t->kids) {
    TermPtr nk = substitute(k, map);
    changed |= nk.get() != k.get();
    kids.push_back(std::move(nk));
  }
  return changed ? rebuild(t, std::move(kids)) : t;
}

void collect_symbols(const TermPtr& t, std::set<IndexedSymbol>& out) {
  if (t->kind == TermKind::Sym) {
    out.insert(t->sym);
    return;
  }
  for (const auto& k : t->kids) collect_symbols(k, out);
}

bool contains_symbol_of(const TermPtr& t, const std::set<IndexedSymbol>& vars) {
  if (t->kind == TermKind::Sym) return vars.count(t->sym) > 0;
  for (const auto& k : t->kids)
    if (contains_symbol_of(k, vars)) return true;
  return false;
}

TermPtr simplify(const TermPtr& t) {
  if (t->kids.empty()) return t;
  std::vector<TermPtr> kids;
  kids.reserve(t->kids.size());
  for (const auto& k : t->kids) kids.push_back(simplify(k));

  auto all_const = [&] {
    for (const auto& k : kids)
      if (!k->is_const()) return false;
    return true;
  };

  switch (t->kind) {
    case TermKind::Add:
      if (all_const()) {
        mpz_class acc = 0;
        for (const auto& k : kids) acc += k->ival;
        return tb::int_const(acc);
      }
      break;
    case TermKind::Neg:
      if (kids[0]->kind == TermKind::IntConst) return tb::int_const(-kids[0]->ival);
      break;
    case TermKind::Mul:
      if (all_const()) return tb::int_const(kids[0]->ival * kids[1]->ival);
      if (kids[0]->kind == TermKind::IntConst) {
        if (kids[0]->ival == 0) return tb::int_const(0);
        if (kids[0]->ival == 1) return kids[1];
      }
      break;
    case TermKind::Ite:
      if (kids[0]->kind == TermKind::BoolConst)
        return kids[0]->bval ? kids[1] : kids[2];
      break;
    case TermKind::Not:
      if (kids[0]->kind == TermKind::BoolConst)
        return tb::bool_const(!kids[0]->bval);
      break;
    case TermKind::And: {
      std::vector<TermPtr> keep;
      for (const auto& k : kids) {
        if (k->kind == TermKind::BoolConst) {
          if (!k->bval) return tb::bool_const(false);
          continue;
        }
        keep.push_back(k);
      }
      return tb::and_(std::move(keep));
    }
    case TermKind::Or: {
      std::vector<TermPtr> keep;
      for (const auto& k : kids) {
        if (k->kind == TermKind::BoolConst) {
          if (k->bval) return tb::bool_const(true);
          continue;
        }
        keep.push_back(k);
      }
      return tb::or_(std::move(keep));
    }
    case TermKind::Cmp:
      if (all_const()) {
        if (t->cmp == CmpOp::Eq && kids[0]->sort == Sort::Bool)
          return tb::bool_const(kids[0]->bval == kids[1]->bval);
        const mpz_class& a = kids[0]->ival;
        const mpz_class& b = kids[1]->ival;
        switch (t->cmp) {
          case CmpOp::Lt: return tb::bool_const(a < b);
          case CmpOp::Le: return tb::bool_const(a <= b);
          case CmpOp::Eq: return tb::bool_const(a == b);
          case CmpOp::Ge: return tb::bool_const(a >= b);
          case CmpOp::Gt: return tb::bool_const(a > b);
        }
      }
      break;
    default:
      break;
  }
  return rebuild(t, std::move(kids));
}

std::string term_to_smt2(const TermPtr& t) {
  std::ostringstream os;
  std::function<void(const TermPtr&)> go = [&](const TermPtr& u) {
    switch (u->kind) {
      case TermKind::IntConst:
        if (u->ival < 0)
          os << "(- " << mpz_class(-u->ival).get_str() << ")";
        else
          os << u->ival.get_str();
        return;
      case TermKind::BoolConst:
        os << (u->bval ? "true" : "false");
        return;
      case TermKind::Sym:
        os << u->sym.str();
        return;
      case TermKind::Hist:
        os << (u->hist.plane == Plane::State ? "(hist " : "(in ") << u->hist.var
           << " " << u->hist.depth << ")";
        return;
      default:
        break;
    }
    const char* op = nullptr;
    switch (u->kind) {
      case TermKind::Add: op = "+"; break;
      case TermKind::Neg: op = "-"; break;
      case TermKind::Mul: op = "*"; break;
      case TermKind::Ite: op = "ite"; break;
      case TermKind::Not: op = "not"; break;
      case TermKind::And: op = "and"; break;
      case TermKind::Or: op = "or"; break;
      case TermKind::Cmp:
        switch (u->cmp) {
          case CmpOp::Lt: op = "<"; break;
          case CmpOp::Le: op = "<="; break;
          case CmpOp::Eq: op = "="; break;
          case CmpOp::Ge: op = ">="; break;
          case CmpOp::Gt: op = ">"; break;
        }
        break;
      default:
        throw InternalError("term_to_smt2: unhandled kind");
    }
    os << "(" << op;
    for (const auto& k : u->kids) {
      os << " ";
      go(k);
    }
    os << ")";
  };
  go(t);
  return os.str();
}

}  // namespace cforge
