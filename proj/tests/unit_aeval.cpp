#include <doctest.h>

#include "cforge/skolem.hpp"
#include "test_support.hpp"

using namespace cforge;

namespace {

const IndexedSymbol X{"x", 0, Plane::State};
const IndexedSymbol Y{"y", 1, Plane::State};

TermPtr xs() { return tb::sym(X, Sort::Int); }
TermPtr ys() { return tb::sym(Y, Sort::Int); }

ForallExistsFormula make_query(TermPtr premise, TermPtr conclusion) {
  ForallExistsFormula q;
  q.description = "test";
  q.universals = {{X, Sort::Int}};
  q.existentials = {{Y, Sort::Int}};
  q.premise = std::move(premise);
  q.conclusion = std::move(conclusion);
  return q;
}

// premise => conclusion[relation] must be valid for the nested-ite relation.
void check_substitute_back(Solver& solver, const ForallExistsFormula& q,
                           const SkolemRelation& rel) {
  const TermPtr subst = substitute(q.conclusion, rel.as_substitution());
  SolverResult r = solver.check(emit_smtlib(
      q.universals, tb::and_({q.premise, tb::not_(subst)}), {"QF_LIA", true}));
  CHECK(r.status == SolverStatus::Unsat);
}

}  // namespace

TEST_CASE("ae_val: equality witness, single partition") {
  Solver solver(cftest::test_solver_config());
  ForallExistsFormula q = make_query(
      tb::bool_const(true), tb::eq(ys(), tb::add({xs(), tb::int_const(1)})));
  AeValOutcome o = ae_val(q, solver);
  REQUIRE(o.tag == AeValTag::Valid);
  REQUIRE(o.skolem.partitions.size() == 1);
  CHECK(term_eq(o.skolem.partitions[0].guard, tb::bool_const(true)));
  CHECK(term_eq(o.skolem.partitions[0].assigns[0].second,
                tb::add({xs(), tb::int_const(1)})));
  check_substitute_back(solver, q, o.skolem);
}

TEST_CASE("ae_val: two-sided max splits into partitions") {
  Solver solver(cftest::test_solver_config());
  ForallExistsFormula q = make_query(
      tb::bool_const(true),
      tb::and_({tb::cmp(CmpOp::Ge, ys(), xs()),
                tb::cmp(CmpOp::Ge, ys(), tb::int_const(0))}));
  AeValOutcome o = ae_val(q, solver);
  REQUIRE(o.tag == AeValTag::Valid);
  CHECK(o.skolem.partitions.size() >= 2);
  check_substitute_back(solver, q, o.skolem);
}

TEST_CASE("ae_val: unsatisfiable conclusion is invalid with a counter-model") {
  Solver solver(cftest::test_solver_config());
  ForallExistsFormula q = make_query(tb::bool_const(true),
                                     tb::and_({tb::cmp(CmpOp::Gt, ys(), xs()),
                                               tb::cmp(CmpOp::Lt, ys(), xs())}));
  AeValOutcome o = ae_val(q, solver);
  REQUIRE(o.tag == AeValTag::Invalid);
  CHECK(o.counter_model.values.count(X) == 1);
}

TEST_CASE("ae_val: premise restricts the counter-example search") {
  Solver solver(cftest::test_solver_config());
  // Only valid under the premise x >= 0: y with x <= y <= x is y := x,
  // but for x < 0 the conclusion also demands y >= 0 -- impossible, except
  // the premise rules those x out.
  ForallExistsFormula q = make_query(
      tb::cmp(CmpOp::Ge, xs(), tb::int_const(0)),
      tb::and_({tb::cmp(CmpOp::Ge, ys(), xs()), tb::cmp(CmpOp::Le, ys(), xs()),
                tb::cmp(CmpOp::Ge, ys(), tb::int_const(0))}));
  AeValOutcome o = ae_val(q, solver);
  REQUIRE(o.tag == AeValTag::Valid);
  check_substitute_back(solver, q, o.skolem);

  // Without the premise the same query is invalid, and the counter-model
  // satisfies the (trivial) premise while admitting no witness.
  ForallExistsFormula q2 = make_query(tb::bool_const(true), q.conclusion);
  AeValOutcome o2 = ae_val(q2, solver);
  REQUIRE(o2.tag == AeValTag::Invalid);
  CHECK(o2.counter_model.get(X).z < 0);
}

TEST_CASE("ae_val: vacuous premise yields zero partitions") {
  Solver solver(cftest::test_solver_config());
  ForallExistsFormula q =
      make_query(tb::bool_const(false), tb::eq(ys(), xs()));
  q.premise = tb::and_({tb::cmp(CmpOp::Gt, xs(), tb::int_const(0)),
                        tb::cmp(CmpOp::Lt, xs(), tb::int_const(0))});
  AeValOutcome o = ae_val(q, solver);
  REQUIRE(o.tag == AeValTag::Valid);
  CHECK(o.skolem.partitions.empty());
}

TEST_CASE("ae_val: unsupported coefficient surfaces as Unknown") {
  Solver solver(cftest::test_solver_config());
  ForallExistsFormula q = make_query(
      tb::bool_const(true), tb::eq(tb::mul(tb::int_const(2), ys()), xs()));
  AeValOutcome o = ae_val(q, solver);
  CHECK(o.tag == AeValTag::Unknown);
  CHECK(o.reason.find("coefficient") != std::string::npos);
}

TEST_CASE("ae_val: deterministic partition lists") {
  Solver solver(cftest::test_solver_config());
  ForallExistsFormula q = make_query(
      tb::bool_const(true),
      tb::and_({tb::cmp(CmpOp::Ge, ys(), xs()),
                tb::cmp(CmpOp::Ge, ys(), tb::int_const(0))}));
  AeValOutcome a = ae_val(q, solver);
  AeValOutcome b = ae_val(q, solver);
  REQUIRE(a.tag == AeValTag::Valid);
  REQUIRE(b.tag == AeValTag::Valid);
  CHECK(a.skolem.dump() == b.skolem.dump());
}

TEST_CASE("ae_val: boolean existentials") {
  Solver solver(cftest::test_solver_config());
  const IndexedSymbol B{"b", 1, Plane::State};
  ForallExistsFormula q;
  q.description = "bool";
  q.universals = {{X, Sort::Int}};
  q.existentials = {{B, Sort::Bool}};
  q.premise = tb::bool_const(true);
  // b <-> x > 0 always has a witness.
  q.conclusion = tb::eq(tb::sym(B, Sort::Bool),
                        tb::cmp(CmpOp::Gt, xs(), tb::int_const(0)));
  AeValOutcome o = ae_val(q, solver);
  REQUIRE(o.tag == AeValTag::Valid);
  CHECK(o.skolem.partitions.size() == 2);  // one per polarity of x > 0
  check_substitute_back(solver, q, o.skolem);
}
