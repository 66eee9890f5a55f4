#include <doctest.h>

#include "cforge/queries.hpp"
#include "test_support.hpp"

using namespace cforge;

namespace {

// Counts syntactically distinct `pre e` occurrences, the independent oracle
// for the register count.
void distinct_pres(const ExprPtr& e, std::vector<std::string>& keys) {
  for (const auto& k : e->kids) distinct_pres(k, keys);
  if (e->kind == ExprKind::Pre) {
    std::string key = print_expr(e->kids[0]);
    for (const auto& existing : keys)
      if (existing == key) return;
    keys.push_back(std::move(key));
  }
}

size_t oracle_register_count(const std::string& text) {
  TypedContract tc = typecheck_and_expand(parse_contract(text));
  std::vector<std::string> keys;
  for (const auto& a : tc.spec.assumptions) distinct_pres(a.expr, keys);
  for (const auto& g : tc.spec.guarantees) distinct_pres(g.expr, keys);
  return keys.size();
}

}  // namespace

TEST_CASE("lower: one register per distinct pre occurrence") {
  const std::string text =
      "contract C { output z: int; guarantee z = (0 -> pre z); }";
  ContractSystem sys = cftest::system_of(text);
  CHECK(sys.register_count() == 1);
  CHECK(oracle_register_count(text) == 1);

  // G_T contains reg' = z' and the guarantee occurrence reads reg.
  const TermPtr reg_next = tb::sym({"%reg0", 1, Plane::State}, Sort::Int);
  const TermPtr z_next = tb::sym({"z", 1, Plane::State}, Sort::Int);
  const TermPtr reg_cur = tb::sym({"%reg0", 0, Plane::State}, Sort::Int);
  bool found_update = false;
  bool found_read = false;
  for (const auto& part : sys.transition_parts) {
    if (term_eq(part.term, tb::eq(reg_next, z_next))) found_update = true;
    if (term_eq(part.term, tb::eq(z_next, reg_cur))) found_read = true;
  }
  CHECK(found_update);
  CHECK(found_read);
}

TEST_CASE("lower: stateless fig1 has no registers and the expected vector") {
  ContractSystem sys = cftest::system_of_file("fig1.ctr");
  CHECK(sys.register_count() == 0);
  REQUIRE(sys.state_vars.size() == 4);
  CHECK(sys.state_vars[0].name == "x");
  CHECK(sys.state_vars[0].role == VarRole::InputMirror);
  CHECK(sys.state_vars[1].name == "y");
  CHECK(sys.state_vars[2].name == "z");
  CHECK(sys.state_vars[2].role == VarRole::Output);
  CHECK(sys.state_vars[3].name == "%init");
  CHECK(sys.state_vars[3].role == VarRole::InitFlag);
}

TEST_CASE("lower: microwave registers match the syntactic-pre oracle") {
  const std::string text = cftest::contract_text("microwave.ctr");
  ContractSystem sys = cftest::system_of(text);
  CHECK(sys.register_count() == oracle_register_count(text));
  CHECK(sys.register_count() == 3);
}

TEST_CASE("lower: assumption arrows resolve against the previous init flag") {
  ContractSystem sys = cftest::system_of(
      "contract C { input x: int; output z: bool; assume true -> x > pre x; "
      "guarantee z; }");
  REQUIRE(sys.assumption_parts.size() == 1);
  const TermPtr a = sys.assumption_parts[0].term;
  REQUIRE(a->kind == TermKind::Ite);
  CHECK(term_eq(a->kids[0], tb::sym({"%init", 0, Plane::State}, Sort::Bool)));
  std::set<IndexedSymbol> free;
  collect_symbols(a, free);
  for (const auto& s : free) {
    // A(s, i): previous state and current input only.
    CHECK(s.index == 0);
  }
}

TEST_CASE("queries: extend check n=0 is the empty chain") {
  ContractSystem sys = cftest::system_of_file("fig1.ctr");
  ForallExistsFormula q = build_extend_check(sys, 0);
  CHECK(q.universals.size() == sys.state_vars.size() + sys.inputs.size());
  CHECK(q.existentials.size() == sys.state_vars.size());
  // Premise contains x <> y over step-0 inputs.
  const TermPtr neq = tb::distinct(tb::sym({"x", 0, Plane::Input}, Sort::Int),
                                   tb::sym({"y", 0, Plane::Input}, Sort::Int));
  CHECK(cftest::contains_subterm(q.premise, neq));
}

TEST_CASE("queries: symbol-count invariant across depths") {
  for (const char* file : {"fig1.ctr", "microwave.ctr"}) {
    ContractSystem sys = cftest::system_of_file(file);
    const size_t ns = sys.state_vars.size();
    const size_t ni = sys.inputs.size();
    for (int n = 0; n <= 3; ++n) {
      ForallExistsFormula q = build_extend_check(sys, n);
      CHECK(q.universals.size() ==
            (static_cast<size_t>(n) + 1) * ns + (static_cast<size_t>(n) + 1) * ni);
      CHECK(q.existentials.size() == ns);
      q.validate();  // no stray symbols
      ForallExistsFormula b = build_base_check_prime(sys, n);
      CHECK(b.universals.size() == q.universals.size());
      b.validate();
    }
  }
}

TEST_CASE("queries: n=1 has one intermediate state and two input copies") {
  ContractSystem sys = cftest::system_of_file("fig1.ctr");
  ForallExistsFormula q = build_extend_check(sys, 1);
  int state_copies = 0, input_copies = 0;
  std::set<int> state_indices, input_indices;
  for (const auto& d : q.universals) {
    if (d.sym.plane == Plane::State) state_indices.insert(d.sym.index);
    else input_indices.insert(d.sym.index);
    (void)state_copies;
    (void)input_copies;
  }
  CHECK(state_indices == std::set<int>{0, 1});
  CHECK(input_indices == std::set<int>{0, 1});
  for (const auto& d : q.existentials) CHECK(d.sym.index == 2);
}

TEST_CASE("queries: base check k=1 includes G_I, A twice, G_T once") {
  ContractSystem sys = cftest::system_of_file("microwave.ctr");
  ForallExistsFormula b = build_base_check_prime(sys, 1);
  // Premise shape: and(G_I, and(A@0, G_T@0, A@1)).
  REQUIRE(b.premise->kind == TermKind::And);
  REQUIRE(b.premise->kids.size() == 2);
  CHECK(term_eq(b.premise->kids[0], sys.initial()));
  const TermPtr chain = b.premise->kids[1];
  REQUIRE(chain->kind == TermKind::And);
  REQUIRE(chain->kids.size() == 3);
  CHECK(term_eq(chain->kids[0], sys.assumption()));
  CHECK(term_eq(chain->kids[1], sys.transition()));
  CHECK(term_eq(chain->kids[2], shift_indices(sys.assumption(), 1, 1)));
  CHECK(term_eq(build_extend_check(sys, 1).conclusion,
                shift_indices(sys.transition(), 1, 1)));
}

TEST_CASE("queries: gi witness query shape") {
  ContractSystem sys = cftest::system_of_file("fig1.ctr");
  ForallExistsFormula q = build_gi_witness_query(sys);
  CHECK(q.universals.empty());
  CHECK(q.existentials.size() == sys.state_vars.size());
  CHECK(q.premise->kind == TermKind::BoolConst);
  CHECK(cftest::contains_subterm(
      q.conclusion, tb::sym({"%init", 0, Plane::State}, Sort::Bool)));

  ContractSystem arrow_sys = cftest::system_of(
      "contract C { output z: bool; guarantee z = (true -> pre z); }");
  ForallExistsFormula aq = build_gi_witness_query(arrow_sys);
  // Initial mode of z = (true -> pre z) pins z to true.
  CHECK(cftest::contains_subterm(
      aq.conclusion, tb::eq(tb::sym({"z", 0, Plane::State}, Sort::Bool),
                            tb::bool_const(true))));

  ContractSystem mc = cftest::system_of_file("microwave.ctr");
  ForallExistsFormula mq = build_gi_witness_query(mc);
  CHECK(cftest::contains_subterm(
      mq.conclusion, tb::sym({"%init", 0, Plane::State}, Sort::Bool)));
}

TEST_CASE("queries: base premise strengthens the extend premise (solver)") {
  Solver solver(cftest::test_solver_config());
  for (const char* file : {"fig1.ctr", "microwave.ctr"}) {
    ContractSystem sys = cftest::system_of_file(file);
    for (int k = 0; k <= 1; ++k) {
      ForallExistsFormula b = build_base_check_prime(sys, k);
      ForallExistsFormula e = build_extend_check(sys, k);
      SolverResult r = solver.check(emit_smtlib(
          b.universals, tb::and_({b.premise, tb::not_(e.premise)}),
          {"QF_LIA", true}));
      CHECK(r.status == SolverStatus::Unsat);
    }
  }
}
