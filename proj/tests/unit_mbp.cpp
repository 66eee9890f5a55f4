#include <doctest.h>

#include <random>

#include "cforge/skolem.hpp"
#include "test_support.hpp"

using namespace cforge;

namespace {

const IndexedSymbol X{"x", 0, Plane::State};
const IndexedSymbol Y{"y", 1, Plane::State};
const IndexedSymbol W{"w", 0, Plane::State};
const IndexedSymbol B{"b", 1, Plane::State};

TermPtr xs() { return tb::sym(X, Sort::Int); }
TermPtr ys() { return tb::sym(Y, Sort::Int); }
TermPtr ws() { return tb::sym(W, Sort::Int); }
TermPtr bs() { return tb::sym(B, Sort::Bool); }

Model model_of(std::initializer_list<std::pair<IndexedSymbol, Value>> vs) {
  Model m;
  for (const auto& [s, v] : vs) m.values[s] = v;
  return m;
}

// Solver check that `projection => phi[witness]` is valid.
void check_projection_entails(Solver& solver, const MbpResult& r,
                              const TermPtr& phi,
                              const std::vector<SymbolDecl>& universals) {
  std::map<IndexedSymbol, TermPtr> sub;
  for (const auto& [s, t] : r.witness) sub[s] = t;
  const TermPtr subst = substitute(phi, sub);
  SolverResult res = solver.check(emit_smtlib(
      universals, tb::and_({r.projection, tb::not_(subst)}), {"QF_LIA", true}));
  CHECK(res.status == SolverStatus::Unsat);
}

}  // namespace

TEST_CASE("mbp: greatest lower bound under the model") {
  // y >= x /\ y >= 0 at x=5 (y=5): witness y := x, projection x >= 0.
  const TermPtr phi = tb::and_({tb::cmp(CmpOp::Ge, ys(), xs()),
                                tb::cmp(CmpOp::Ge, ys(), tb::int_const(0))});
  Model m = model_of({{X, Value::of_int(5)}, {Y, Value::of_int(5)}});
  MbpResult r = mbp_project(m, {{Y, Sort::Int}}, phi);
  REQUIRE(r.witness.size() == 1);
  CHECK(term_eq(r.witness[0].second, xs()));
  CHECK(term_eq(r.projection, tb::cmp(CmpOp::Ge, xs(), tb::int_const(0))));

  Solver solver(cftest::test_solver_config());
  check_projection_entails(solver, r, phi, {{X, Sort::Int}});
}

TEST_CASE("mbp: equality substitution") {
  // y = x + 1 at x=2: projection true, witness y := x + 1.
  const TermPtr phi = tb::eq(ys(), tb::add({xs(), tb::int_const(1)}));
  Model m = model_of({{X, Value::of_int(2)}, {Y, Value::of_int(3)}});
  MbpResult r = mbp_project(m, {{Y, Sort::Int}}, phi);
  CHECK(r.projection->kind == TermKind::BoolConst);
  CHECK(r.projection->bval);
  CHECK(term_eq(r.witness[0].second, tb::add({xs(), tb::int_const(1)})));
}

TEST_CASE("mbp: boolean literal selection") {
  // b \/ x > 0 at x=0, b=true: projection true, witness b := true.
  const TermPtr phi =
      tb::or_({bs(), tb::cmp(CmpOp::Gt, xs(), tb::int_const(0))});
  Model m = model_of({{X, Value::of_int(0)}, {B, Value::of_bool(true)}});
  MbpResult r = mbp_project(m, {{B, Sort::Bool}}, phi);
  CHECK(r.projection->kind == TermKind::BoolConst);
  CHECK(r.projection->bval);
  REQUIRE(r.witness.size() == 1);
  CHECK(r.witness[0].second->bval);
}

TEST_CASE("mbp: non-unit coefficient is reported with the atom") {
  const TermPtr phi = tb::eq(tb::mul(tb::int_const(2), ys()), xs());
  Model m = model_of({{X, Value::of_int(4)}, {Y, Value::of_int(2)}});
  try {
    mbp_project(m, {{Y, Sort::Int}}, phi);
    FAIL("expected UnsupportedCoefficient");
  } catch (const UnsupportedCoefficient& e) {
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
}

TEST_CASE("mbp: upper bounds and unconstrained variables") {
  // Only upper bounds: least upper bound chosen.
  const TermPtr phi = tb::and_({tb::cmp(CmpOp::Le, ys(), xs()),
                                tb::cmp(CmpOp::Lt, ys(), ws())});
  Model m = model_of({{X, Value::of_int(3)},
                      {W, Value::of_int(10)},
                      {Y, Value::of_int(1)}});
  MbpResult r = mbp_project(m, {{Y, Sort::Int}}, phi);
  // min(x, w-1) under m is x = 3.
  CHECK(term_eq(r.witness[0].second, xs()));
  Solver solver(cftest::test_solver_config());
  check_projection_entails(solver, r, phi,
                           {{X, Sort::Int}, {W, Sort::Int}});

  // No occurrence at all: witness defaults to 0.
  MbpResult r2 = mbp_project(m, {{Y, Sort::Int}},
                             tb::cmp(CmpOp::Ge, xs(), tb::int_const(0)));
  CHECK(term_eq(r2.witness[0].second, tb::int_const(0)));
}

TEST_CASE("mbp: disequality resolved by the model side") {
  const TermPtr phi = tb::distinct(ys(), xs());
  Model low = model_of({{X, Value::of_int(5)}, {Y, Value::of_int(1)}});
  MbpResult r1 = mbp_project(low, {{Y, Sort::Int}}, phi);
  // y < x side: witness is the upper bound x - 1.
  CHECK(term_eq(simplify(r1.witness[0].second),
                simplify(tb::sub(xs(), tb::int_const(1)))));
  Model high = model_of({{X, Value::of_int(5)}, {Y, Value::of_int(9)}});
  MbpResult r2 = mbp_project(high, {{Y, Sort::Int}}, phi);
  CHECK(term_eq(simplify(r2.witness[0].second),
                simplify(tb::add({xs(), tb::int_const(1)}))));
}

TEST_CASE("mbp: int-valued ite is lifted by the model") {
  // y = ite(b, x, w): the chosen branch follows the model's b.
  const TermPtr phi = tb::eq(ys(), tb::ite(bs(), xs(), ws()));
  Model m = model_of({{X, Value::of_int(7)},
                      {W, Value::of_int(2)},
                      {B, Value::of_bool(false)},
                      {Y, Value::of_int(2)}});
  MbpResult r = mbp_project(m, {{Y, Sort::Int}}, phi);
  CHECK(term_eq(r.witness[0].second, ws()));
  CHECK(cftest::contains_subterm(r.projection, bs()));  // guard literal kept
}

TEST_CASE("property: random conjunctions project soundly") {
  std::mt19937_64 rng(77);
  Solver solver(cftest::test_solver_config());
  const std::vector<SymbolDecl> universals{{X, Sort::Int}, {W, Sort::Int}};
  const std::vector<SymbolDecl> exvars{{Y, Sort::Int}, {B, Sort::Bool}};
  std::vector<SymbolDecl> all = universals;
  for (const auto& d : exvars) all.push_back(d);

  auto rand_linear = [&]() -> TermPtr {
    std::vector<TermPtr> parts;
    if (rng() % 2) parts.push_back(xs());
    if (rng() % 2) parts.push_back(tb::neg(ws()));
    parts.push_back(tb::int_const(static_cast<long>(rng() % 9) - 4));
    return tb::add(std::move(parts));
  };
  auto rand_atom = [&]() -> TermPtr {
    const TermPtr lhs = rng() % 2 ? ys() : tb::add({ys(), rand_linear()});
    switch (rng() % 4) {
      case 0: return tb::cmp(CmpOp::Ge, lhs, rand_linear());
      case 1: return tb::cmp(CmpOp::Le, lhs, rand_linear());
      case 2: return tb::eq(lhs, rand_linear());
      default: return tb::or_({bs(), tb::cmp(CmpOp::Gt, lhs, rand_linear())});
    }
  };

  int tested = 0;
  for (int i = 0; i < 60; ++i) {
    std::vector<TermPtr> conj;
    const int n = 1 + static_cast<int>(rng() % 3);
    for (int j = 0; j < n; ++j) conj.push_back(rand_atom());
    const TermPtr phi = tb::and_(conj);
    SolverResult sat =
        solver.check(emit_smtlib(all, phi, {"QF_LIA", true}), &all);
    if (sat.status != SolverStatus::Sat) continue;
    tested++;
    MbpResult r = mbp_project(*sat.model, exvars, phi);
    // The driving model satisfies its own projection.
    const Value pv = eval_term(
        r.projection, [&](const IndexedSymbol& s) { return sat.model->get(s); });
    CHECK(pv.b);
    // Projection implies phi under the witness.
    check_projection_entails(solver, r, phi, universals);
    // Projection is over universals only.
    std::set<IndexedSymbol> free;
    collect_symbols(r.projection, free);
    for (const auto& s : free)
      CHECK((s == X || s == W));
  }
  CHECK(tested >= 30);
}
