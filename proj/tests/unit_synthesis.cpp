#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "cforge/simulate.hpp"
#include "cforge/synthesis.hpp"
#include "test_support.hpp"

using namespace cforge;

TEST_CASE("synthesize: fig1 plan has depth 0 and an order-selecting skolem") {
  Solver solver(cftest::test_solver_config());
  ContractSystem sys = cftest::system_of_file("fig1.ctr");
  SynthesisOutcome out = synthesize(sys, 8, solver);
  REQUIRE(out.plan.has_value());
  CHECK(out.plan->k == 0);
  CHECK(out.plan->base_skolems.empty());
  CHECK(out.plan->extend_skolem.partitions.size() >= 1);

  // Equivalence with ite(x <= y, z := true, z := false), checked
  // semantically: under the premise, the substituted z agrees with x <= y.
  ForallExistsFormula q = build_extend_check(sys, 0);
  auto sub = out.plan->extend_skolem.as_substitution();
  const TermPtr z_term = sub.at({"z", 1, Plane::State});
  const TermPtr want = tb::cmp(CmpOp::Le, tb::sym({"x", 0, Plane::Input}, Sort::Int),
                               tb::sym({"y", 0, Plane::Input}, Sort::Int));
  SolverResult r = solver.check(emit_smtlib(
      q.universals, tb::and_({q.premise, tb::distinct(z_term, want)}),
      {"QF_LIA", true}));
  CHECK(r.status == SolverStatus::Unsat);
}

TEST_CASE("synthesize: refusal carries the unrealizable verdict and trace") {
  Solver solver(cftest::test_solver_config());
  ContractSystem sys = cftest::system_of_file("fig1_noassume.ctr");
  SynthesisOutcome out = synthesize(sys, 8, solver);
  CHECK(!out.plan.has_value());
  CHECK(out.verdict.tag == VerdictTag::Unrealizable);
  CHECK(out.verdict.k == 0);
  CHECK(out.verdict.trace.frames.size() == 1);
}

TEST_CASE("synthesize: microwave plan with a guarded extend relation") {
  Solver solver(cftest::test_solver_config());
  ContractSystem sys = cftest::system_of_file("microwave.ctr");
  SynthesisOutcome out = synthesize(sys, 8, solver);
  REQUIRE(out.plan.has_value());
  CHECK(out.plan->extend_skolem.partitions.size() >= 2);
  // Every state variable is assigned in every partition.
  for (const auto& p : out.plan->extend_skolem.partitions)
    CHECK(p.assigns.size() == sys.state_vars.size());
}

TEST_CASE("plan_to_ir: k=0 produces init plus loop only") {
  Solver solver(cftest::test_solver_config());
  ContractSystem sys = cftest::system_of_file("fig1.ctr");
  SynthesisOutcome out = synthesize(sys, 8, solver);
  REQUIRE(out.plan.has_value());
  ImplIR ir = plan_to_ir(*out.plan, sys);
  CHECK(ir.history_len == 1);
  CHECK(ir.step_blocks.empty());
  CHECK(!ir.loop_block.branches.empty());
  CHECK(ir.outputs == std::vector<std::string>{"z"});
  // Loop tree: some branch assigns z := true under x <= y ordering.
  for (const auto& br : ir.loop_block.branches)
    CHECK(br.assigns.size() == ir.state_vars.size());
}

TEST_CASE("plan_to_ir: synthetic k=2 plan yields init, two steps, loop") {
  ContractSystem sys = cftest::system_of_file("fig1.ctr");

  auto const_relation = [&](int frame) {
    SkolemPartition p;
    p.guard = tb::bool_const(true);
    for (const auto& v : sys.state_vars) {
      TermPtr rhs;
      if (v.sort == Sort::Bool)
        rhs = tb::bool_const(false);
      else if (frame >= 0)
        rhs = tb::sym({v.name, frame, Plane::State}, Sort::Int);
      else
        rhs = tb::int_const(0);
      p.assigns.emplace_back(IndexedSymbol{v.name, frame + 1, Plane::State},
                             rhs);
    }
    SkolemRelation r;
    r.partitions.push_back(std::move(p));
    return r;
  };

  SynthesisPlan plan;
  plan.k = 2;
  for (const auto& v : sys.state_vars)
    plan.gi_witness.emplace_back(
        v.name, v.sort == Sort::Bool ? Value::of_bool(false) : Value::of_int(0));
  plan.base_skolems = {const_relation(0), const_relation(1)};
  plan.extend_skolem = const_relation(2);

  ImplIR ir = plan_to_ir(plan, sys);
  CHECK(ir.history_len == 3);
  CHECK(ir.step_blocks.size() == 2);
  CHECK(!ir.loop_block.branches.empty());

  // Step 2's relation references state index 1 = current frame, depth 0.
  const TermPtr rhs = ir.step_blocks[1].branches[0].assigns[0].second;
  REQUIRE(rhs->kind == TermKind::Hist);
  CHECK(rhs->hist.depth == 0);

  // A symbol deeper than the history is an internal error.
  SynthesisPlan bad = plan;
  bad.extend_skolem.partitions[0].assigns[0].second =
      tb::sym({"x", 9, Plane::State}, Sort::Int);
  CHECK_THROWS_AS(plan_to_ir(bad, sys), InternalError);
}

TEST_CASE("synthesize: depth-1 contract with a vacuous base step") {
  Solver solver(cftest::test_solver_config());
  ContractSystem sys = cftest::system_of_file("phased.ctr");
  SynthesisOutcome out = synthesize(sys, 8, solver);
  REQUIRE(out.plan.has_value());
  CHECK(out.plan->k == 1);
  REQUIRE(out.plan->base_skolems.size() == 1);
  // The base check at depth 1 is vacuously valid: its premise (an
  // assumption-satisfying first input) is unsatisfiable.
  CHECK(out.plan->base_skolems[0].partitions.empty());
  CHECK(!out.plan->extend_skolem.partitions.empty());

  ImplIR ir = plan_to_ir(*out.plan, sys);
  CHECK(ir.history_len == 2);
  REQUIRE(ir.step_blocks.size() == 1);
  // The vacuous step compiled into a hold-state default branch.
  REQUIRE(ir.step_blocks[0].branches.size() == 1);

  // The program still runs on arbitrary (assumption-violating) inputs.
  Interpreter interp(ir);
  for (int i = 0; i < 4; ++i)
    interp.step({{"x", Value::of_int(1)}});
  CHECK(interp.steps_done() == 4);

  // Emitted C agrees with the interpreter on the same stream.
  EmittedProgram prog = emit_program(ir);
  const std::string dir = "/tmp/cforge_emit_phased";
  if (std::system(("mkdir -p " + dir).c_str()) != 0)
    throw std::runtime_error("mkdir failed");
  {
    std::ofstream f(dir + "/phased.c");
    f << prog.source;
  }
  REQUIRE(std::system(("cc -O1 -o " + dir + "/phased " + dir + "/phased.c")
                          .c_str()) == 0);
  {
    std::ofstream f(dir + "/in.txt");
    f << "1\n1\n1\n1\n";
  }
  REQUIRE(std::system((dir + "/phased < " + dir + "/in.txt > " + dir +
                       "/out.txt")
                          .c_str()) == 0);
  std::string expected;
  for (const auto& line : interp.output_lines()) expected += line + "\n";
  CHECK(cftest::slurp(dir + "/out.txt") == expected);
}

TEST_CASE("emit_program: fig1 output matches the interpreter on the spec pair") {
  Solver solver(cftest::test_solver_config());
  ContractSystem sys = cftest::system_of_file("fig1.ctr");
  SynthesisOutcome out = synthesize(sys, 8, solver);
  REQUIRE(out.plan.has_value());
  ImplIR ir = plan_to_ir(*out.plan, sys);

  std::vector<Valuation> stream = {
      {{"x", Value::of_int(1)}, {"y", Value::of_int(2)}},
      {{"x", Value::of_int(3)}, {"y", Value::of_int(0)}},
  };
  RunReport rep = interpret(ir, stream);
  REQUIRE(rep.trace.frames.size() == 3);
  CHECK(Interpreter(ir).output_lines().empty());

  Interpreter interp(ir);
  for (const auto& s : stream) interp.step(s);
  REQUIRE(interp.output_lines().size() == 2);
  CHECK(interp.output_lines()[0] == "1");
  CHECK(interp.output_lines()[1] == "0");

  // Compile and run the emitted C program on the same stream.
  EmittedProgram prog = emit_program(ir);
  const std::string dir = "/tmp/cforge_emit_test";
  if (std::system(("mkdir -p " + dir).c_str()) != 0)
    throw std::runtime_error("mkdir failed");
  {
    std::ofstream f(dir + "/fig1.c");
    f << prog.source;
  }
  REQUIRE(std::system(("cc -O1 -o " + dir + "/fig1 " + dir + "/fig1.c").c_str()) == 0);
  {
    std::ofstream f(dir + "/in.txt");
    f << "1 2\n3 0\n";
  }
  REQUIRE(std::system((dir + "/fig1 < " + dir + "/in.txt > " + dir + "/out.txt")
                          .c_str()) == 0);
  CHECK(cftest::slurp(dir + "/out.txt") == "1\n0\n");
}
