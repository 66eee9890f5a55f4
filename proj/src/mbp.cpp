#include <algorithm>
#include <unordered_set>

#include "cforge/skolem.hpp"

namespace cforge {

namespace {

struct Literal {
  TermPtr atom;   // Cmp over ite-free linear terms, or a Bool Sym
  bool positive;
  TermPtr as_term() const { return positive ? atom : tb::not_(atom); }
};

class CubeExtractor {
 public:
  CubeExtractor(const Model& m) : m_(m) {}

  std::vector<Literal> run(const TermPtr& phi) {
    collect(phi, true);
    return std::move(lits_);
  }

 private:
  Value ev(const TermPtr& t) const {
    return eval_term(t, [&](const IndexedSymbol& s) { return m_.get(s); });
  }

  // Rebuilds an Int term with every ite replaced by the branch the model
  // selects, emitting the branch condition as cube literals.
  TermPtr strip_int_ites(const TermPtr& t) {
    if (t->kind == TermKind::Ite) {
      const bool c = ev(t->kids[0]).b;
      collect(t->kids[0], c);
      return strip_int_ites(t->kids[c ? 1 : 2]);
    }
    if (t->kids.empty()) return t;
    std::vector<TermPtr> kids;
    bool changed = false;
    for (const auto& k : t->kids) {
      TermPtr nk = strip_int_ites(k);
      changed |= nk.get() != k.get();
      kids.push_back(std::move(nk));
    }
    if (!changed) return t;
    switch (t->kind) {
      case TermKind::Add: return tb::add(std::move(kids));
      case TermKind::Neg: return tb::neg(kids[0]);
      case TermKind::Mul: return tb::mul(kids[0], kids[1]);
      default:
        throw InternalError("strip_int_ites: unexpected kind");
    }
  }

  void push(TermPtr atom, bool positive) {
    TermPtr key = positive ? atom : tb::not_(atom);
    if (!seen_.insert(key).second) return;
    lits_.push_back({std::move(atom), positive});
  }

  // Emits literals whose conjunction implies `t == pol` and holds under m.
  void collect(const TermPtr& t, bool pol) {
    switch (t->kind) {
      case TermKind::BoolConst:
        if (t->bval != pol)
          throw InternalError("cube extraction: constant contradicts model");
        return;
      case TermKind::Sym:
        push(t, pol);
        return;
      case TermKind::Not:
        collect(t->kids[0], !pol);
        return;
      case TermKind::And: {
        if (pol) {
          for (const auto& k : t->kids) collect(k, true);
          return;
        }
        for (const auto& k : t->kids) {
          if (!ev(k).b) {
            collect(k, false);
            return;
          }
        }
        throw InternalError("cube extraction: model does not falsify and");
      }
      case TermKind::Or: {
        if (!pol) {
          for (const auto& k : t->kids) collect(k, false);
          return;
        }
        for (const auto& k : t->kids) {
          if (ev(k).b) {
            collect(k, true);
            return;
          }
        }
        throw InternalError("cube extraction: model does not satisfy or");
      }
      case TermKind::Ite: {
        const bool c = ev(t->kids[0]).b;
        collect(t->kids[0], c);
        collect(t->kids[c ? 1 : 2], pol);
        return;
      }
      case TermKind::Cmp: {
        if (t->cmp == CmpOp::Eq && t->kids[0]->sort == Sort::Bool) {
          // iff: descend into both sides with their model polarities.
          const bool va = ev(t->kids[0]).b;
          const bool vb = ev(t->kids[1]).b;
          if ((va == vb) != pol)
            throw InternalError("cube extraction: iff contradicts model");
          collect(t->kids[0], va);
          collect(t->kids[1], vb);
          return;
        }
        push(tb::cmp(t->cmp, strip_int_ites(t->kids[0]),
                     strip_int_ites(t->kids[1])),
             pol);
        return;
      }
      default:
        throw InternalError("cube extraction: non-boolean kind");
    }
  }

  const Model& m_;
  std::vector<Literal> lits_;
  std::unordered_set<TermPtr, TermHash, TermEq> seen_;
};

// Sum of integer monomials with a constant offset.
struct LinearForm {
  std::map<IndexedSymbol, mpz_class> coeffs;
  mpz_class constant = 0;

  void add(const LinearForm& o, const mpz_class& scale) {
    constant += o.constant * scale;
    for (const auto& [s, c] : o.coeffs) {
      coeffs[s] += c * scale;
      if (coeffs[s] == 0) coeffs.erase(s);
    }
  }
};

LinearForm linearize(const TermPtr& t) {
  LinearForm lf;
  switch (t->kind) {
    case TermKind::IntConst:
      lf.constant = t->ival;
      return lf;
    case TermKind::Sym:
      lf.coeffs[t->sym] = 1;
      return lf;
    case TermKind::Add:
      for (const auto& k : t->kids) lf.add(linearize(k), 1);
      return lf;
    case TermKind::Neg:
      lf.add(linearize(t->kids[0]), -1);
      return lf;
    case TermKind::Mul: {
      const TermPtr& a = t->kids[0];
      const TermPtr& b = t->kids[1];
      if (a->kind == TermKind::IntConst) {
        lf.add(linearize(b), a->ival);
        return lf;
      }
      if (b->kind == TermKind::IntConst) {
        lf.add(linearize(a), b->ival);
        return lf;
      }
      throw InternalError("linearize: nonlinear multiplication");
    }
    default:
      throw InternalError("linearize: unexpected kind");
  }
}

TermPtr build_term(const LinearForm& lf) {
  std::vector<TermPtr> parts;
  for (const auto& [s, c] : lf.coeffs) {
    TermPtr v = tb::sym(s, Sort::Int);
    if (c == 1)
      parts.push_back(std::move(v));
    else if (c == -1)
      parts.push_back(tb::neg(std::move(v)));
    else
      parts.push_back(tb::mul(tb::int_const(c), std::move(v)));
  }
  if (lf.constant != 0 || parts.empty())
    parts.push_back(tb::int_const(lf.constant));
  return tb::add(std::move(parts));
}

enum class Rel : uint8_t { EqR, LeR, GeR };  // after model-resolving != and strict ops

struct XBound {
  Rel rel;
  TermPtr term;  // x (rel) term, x-free
};

}  // namespace

MbpResult mbp_project(const Model& m, const std::vector<SymbolDecl>& exvars,
                      const TermPtr& phi) {
  MbpResult out;
  std::set<IndexedSymbol> exset;
  for (const auto& d : exvars) exset.insert(d.sym);

  auto ev = [&](const TermPtr& t) {
    return eval_term(t, [&](const IndexedSymbol& s) { return m.get(s); });
  };

  std::vector<Literal> cube = CubeExtractor(m).run(phi);

  // Boolean existentials: literal selection under the model.
  std::map<IndexedSymbol, TermPtr> wit;
  std::vector<Literal> pending;
  for (auto& lit : cube) {
    if (lit.atom->kind == TermKind::Sym && exset.count(lit.atom->sym)) {
      wit[lit.atom->sym] = tb::bool_const(lit.positive);
      continue;
    }
    pending.push_back(std::move(lit));
  }
  for (const auto& d : exvars)
    if (d.sort == Sort::Bool && !wit.count(d.sym))
      wit[d.sym] = tb::bool_const(false);

  // Integer existentials, in declaration order.
  for (const auto& d : exvars) {
    if (d.sort != Sort::Int) continue;
    const IndexedSymbol& x = d.sym;
    std::set<IndexedSymbol> only_x{x};

    std::vector<Literal> rest;
    std::vector<XBound> bounds;
    for (auto& lit : pending) {
      if (!contains_symbol_of(lit.atom, only_x)) {
        rest.push_back(std::move(lit));
        continue;
      }
      LinearForm lf = linearize(lit.atom->kids[0]);
      lf.add(linearize(lit.atom->kids[1]), -1);
      auto cit = lf.coeffs.find(x);
      if (cit == lf.coeffs.end())
        throw InternalError("mbp: coefficient vanished");
      const mpz_class c = cit->second;
      if (c != 1 && c != -1)
        throw UnsupportedCoefficient(term_to_smt2(lit.as_term()));
      lf.coeffs.erase(cit);
      // c*x + r (op) 0  ==>  x (op') t where t = -r/c.
      LinearForm tf;
      tf.add(lf, c == 1 ? -1 : 1);
      CmpOp base = lit.atom->cmp;
      bool positive = lit.positive;
      // lhs-rhs (base) 0; negation flips the operator.
      auto flip_neg = [](CmpOp o) {
        switch (o) {
          case CmpOp::Lt: return CmpOp::Ge;
          case CmpOp::Le: return CmpOp::Gt;
          case CmpOp::Ge: return CmpOp::Lt;
          case CmpOp::Gt: return CmpOp::Le;
          case CmpOp::Eq: return CmpOp::Eq;  // handled separately
        }
        return CmpOp::Eq;
      };
      bool is_neq = false;
      CmpOp o = base;
      if (!positive) {
        if (base == CmpOp::Eq)
          is_neq = true;
        else
          o = flip_neg(base);
      }
      // Negative coefficient mirrors the relation.
      if (c == -1 && !is_neq) {
        switch (o) {
          case CmpOp::Lt: o = CmpOp::Gt; break;
          case CmpOp::Le: o = CmpOp::Ge; break;
          case CmpOp::Ge: o = CmpOp::Le; break;
          case CmpOp::Gt: o = CmpOp::Lt; break;
          case CmpOp::Eq: break;
        }
      }
      TermPtr t = build_term(tf);
      if (is_neq) {
        // Resolve against the model: x < t or x > t.
        const mpz_class xv = m.get(x).z;
        const mpz_class tv = ev(t).z;
        if (xv == tv) throw InternalError("mbp: model violates disequality");
        o = xv < tv ? CmpOp::Lt : CmpOp::Gt;
      }
      // Integer tightening of strict bounds.
      if (o == CmpOp::Lt) {
        t = simplify(tb::sub(t, tb::int_const(1)));
        o = CmpOp::Le;
      } else if (o == CmpOp::Gt) {
        t = simplify(tb::add({t, tb::int_const(1)}));
        o = CmpOp::Ge;
      }
      Rel rel = o == CmpOp::Eq ? Rel::EqR : (o == CmpOp::Le ? Rel::LeR : Rel::GeR);
      bounds.push_back({rel, std::move(t)});
    }
    pending = std::move(rest);

    if (bounds.empty()) {
      wit[x] = tb::int_const(0);
      continue;
    }

    // Witness selection: first equality, else greatest lower bound under the
    // model, else least upper bound.
    TermPtr chosen;
    size_t chosen_idx = bounds.size();
    for (size_t i = 0; i < bounds.size(); ++i) {
      if (bounds[i].rel == Rel::EqR) {
        chosen = bounds[i].term;
        chosen_idx = i;
        break;
      }
    }
    if (!chosen) {
      std::optional<mpz_class> best;
      for (size_t i = 0; i < bounds.size(); ++i) {
        if (bounds[i].rel != Rel::GeR) continue;
        mpz_class v = ev(bounds[i].term).z;
        if (!best || v > *best) {
          best = v;
          chosen = bounds[i].term;
          chosen_idx = i;
        }
      }
    }
    if (!chosen) {
      std::optional<mpz_class> best;
      for (size_t i = 0; i < bounds.size(); ++i) {
        if (bounds[i].rel != Rel::LeR) continue;
        mpz_class v = ev(bounds[i].term).z;
        if (!best || v < *best) {
          best = v;
          chosen = bounds[i].term;
          chosen_idx = i;
        }
      }
    }
    if (!chosen) throw InternalError("mbp: no bound chosen");
    wit[x] = chosen;

    // Residual constraints linking the chosen term to the other bounds.
    for (size_t i = 0; i < bounds.size(); ++i) {
      if (i == chosen_idx) continue;
      TermPtr cons;
      switch (bounds[i].rel) {
        case Rel::EqR: cons = tb::eq(chosen, bounds[i].term); break;
        case Rel::LeR: cons = tb::cmp(CmpOp::Le, chosen, bounds[i].term); break;
        case Rel::GeR: cons = tb::cmp(CmpOp::Ge, chosen, bounds[i].term); break;
      }
      cons = simplify(cons);
      if (cons->kind == TermKind::BoolConst) {
        if (!cons->bval) throw InternalError("mbp: residual constraint false");
        continue;
      }
      pending.push_back({cons, true});
    }
  }

  // Eliminations may chain: substitute later witnesses into earlier ones.
  std::vector<IndexedSymbol> order;
  for (const auto& d : exvars) order.push_back(d.sym);
  for (size_t i = order.size(); i-- > 0;) {
    std::map<IndexedSymbol, TermPtr> later;
    for (size_t j = i + 1; j < order.size(); ++j)
      later[order[j]] = wit.at(order[j]);
    wit[order[i]] = simplify(substitute(wit.at(order[i]), later));
  }
  for (const auto& [x, t] : wit) {
    (void)x;
    if (contains_symbol_of(t, exset))
      throw InternalError("mbp: witness still references an existential");
  }

  std::vector<TermPtr> proj_parts;
  for (const auto& lit : pending) {
    if (contains_symbol_of(lit.atom, exset))
      throw InternalError("mbp: residual atom references an existential");
    proj_parts.push_back(lit.as_term());
  }
  out.projection = simplify(tb::and_(std::move(proj_parts)));
  for (const auto& d : exvars) out.witness.emplace_back(d.sym, wit.at(d.sym));
  return out;
}

}  // namespace cforge
