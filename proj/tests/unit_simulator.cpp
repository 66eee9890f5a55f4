#include <doctest.h>

#include <random>

#include "cforge/simulate.hpp"
#include "cforge/synthesis.hpp"
#include "test_support.hpp"

using namespace cforge;

namespace {

ImplIR synthesize_ir(Solver& solver, const ContractSystem& sys) {
  SynthesisOutcome out = synthesize(sys, 8, solver);
  REQUIRE(out.plan.has_value());
  return plan_to_ir(*out.plan, sys);
}

Value state_value(const Trace& t, size_t frame, const std::string& var) {
  for (const auto& [n, v] : t.frames[frame].state)
    if (n == var) return v;
  FAIL("missing state value ", var);
  return Value::of_bool(false);
}

}  // namespace

TEST_CASE("interpret: fig1 on the two-step example") {
  Solver solver(cftest::test_solver_config());
  ContractSystem sys = cftest::system_of_file("fig1.ctr");
  ImplIR ir = synthesize_ir(solver, sys);

  Interpreter interp(ir);
  interp.step({{"x", Value::of_int(1)}, {"y", Value::of_int(2)}});
  interp.step({{"x", Value::of_int(3)}, {"y", Value::of_int(0)}});
  CHECK(interp.output_lines() == std::vector<std::string>{"1", "0"});
  Trace t = interp.trace();
  REQUIRE(t.frames.size() == 3);
  CHECK(state_value(t, 1, "z").b == true);
  CHECK(state_value(t, 2, "z").b == false);
}

TEST_CASE("interpret: empty stream leaves only the initial frame") {
  Solver solver(cftest::test_solver_config());
  ContractSystem sys = cftest::system_of_file("fig1.ctr");
  ImplIR ir = synthesize_ir(solver, sys);
  RunReport r = interpret(ir, {});
  CHECK(r.steps == 0);
  CHECK(r.trace.frames.size() == 1);
  CHECK(r.trace.frames[0].inputs.empty());
}

TEST_CASE("interpret: microwave forced to setup when the timer is zero") {
  Solver solver(cftest::test_solver_config());
  ContractSystem sys = cftest::system_of_file("microwave.ctr");
  ImplIR ir = synthesize_ir(solver, sys);
  Interpreter interp(ir);
  interp.step({{"start", Value::of_bool(true)},
               {"clear", Value::of_bool(false)},
               {"seconds_to_cook", Value::of_int(0)},
               {"door_closed", Value::of_bool(true)}});
  CHECK(state_value(interp.trace(), 1, "cooking_mode").z == 1);
}

TEST_CASE("monitor: out-of-range mode is pinned on the range guarantee") {
  Solver solver(cftest::test_solver_config());
  ContractSystem sys = cftest::system_of_file("microwave.ctr");
  ImplIR ir = synthesize_ir(solver, sys);
  Interpreter interp(ir);
  std::mt19937_64 rng(3);
  DomainBounds bounds;
  for (int i = 0; i < 5; ++i)
    interp.step(gen_valid_inputs(sys, interp.current_state(), rng, bounds,
                                 &solver));
  Trace t = interp.trace();
  // Tamper with one frame: cooking_mode = 4.
  for (auto& [n, v] : t.frames[3].state)
    if (n == "cooking_mode") v = Value::of_int(4);
  RunReport r = monitor(sys, t);
  bool cites_range = false;
  for (const auto& v : r.violations)
    if (v.label == "MC Guarantee-0" && v.step == 3 &&
        v.kind == "guarantee-transition")
      cites_range = true;
  CHECK(cites_range);
}

TEST_CASE("monitor: assumption breach exempts later steps") {
  Solver solver(cftest::test_solver_config());
  ContractSystem sys = cftest::system_of_file("microwave.ctr");
  ImplIR ir = synthesize_ir(solver, sys);
  Interpreter interp(ir);
  std::mt19937_64 rng(4);
  DomainBounds bounds;
  for (int i = 0; i < 6; ++i)
    interp.step(gen_valid_inputs(sys, interp.current_state(), rng, bounds,
                                 &solver));
  Trace t = interp.trace();
  // Step 2's inputs violate the assumption; tamper a later state too.
  for (auto& [n, v] : t.frames[2].inputs)
    if (n == "seconds_to_cook") v = Value::of_int(-5);
  for (auto& [n, v] : t.frames[4].state)
    if (n == "cooking_mode") v = Value::of_int(7);
  RunReport r = monitor(sys, t);
  REQUIRE(r.assumption_breach_step.has_value());
  CHECK(*r.assumption_breach_step == 2);
  for (const auto& v : r.violations) CHECK(v.step <= 2);
}

TEST_CASE("monitor: clean synthesized run has no violations") {
  Solver solver(cftest::test_solver_config());
  for (const char* file : {"fig1.ctr", "microwave.ctr"}) {
    ContractSystem sys = cftest::system_of_file(file);
    ImplIR ir = synthesize_ir(solver, sys);
    Interpreter interp(ir);
    std::mt19937_64 rng(11);
    DomainBounds bounds;
    for (int i = 0; i < 200; ++i)
      interp.step(gen_valid_inputs(sys, interp.current_state(), rng, bounds,
                                   &solver));
    RunReport r = monitor(sys, interp.trace());
    CHECK(r.violations.empty());
    CHECK(interp.default_branch_firings() == 0);
    CHECK(!r.assumption_breach_step.has_value());
  }
}

TEST_CASE("gen_valid_inputs: samples satisfy the assumption") {
  Solver solver(cftest::test_solver_config());
  ContractSystem fig1 = cftest::system_of_file("fig1.ctr");
  std::mt19937_64 rng(5);
  DomainBounds bounds;
  bounds.fallback = {-4, 4};
  Valuation state;
  for (const auto& v : fig1.state_vars)
    state.emplace_back(v.name, v.sort == Sort::Bool ? Value::of_bool(false)
                                                    : Value::of_int(0));
  for (int i = 0; i < 50; ++i) {
    Valuation in = gen_valid_inputs(fig1, state, rng, bounds, &solver);
    mpz_class x, y;
    for (const auto& [n, v] : in) {
      if (n == "x") x = v.z;
      if (n == "y") y = v.z;
      CHECK(v.z >= -4);
      CHECK(v.z <= 4);
    }
    CHECK(x != y);
  }

  ContractSystem mc = cftest::system_of_file("microwave.ctr");
  Valuation mc_state;
  for (const auto& v : mc.state_vars)
    mc_state.emplace_back(v.name, v.sort == Sort::Bool
                                      ? Value::of_bool(false)
                                      : Value::of_int(1));
  for (int i = 0; i < 50; ++i) {
    Valuation in = gen_valid_inputs(mc, mc_state, rng, bounds, &solver);
    for (const auto& [n, v] : in)
      if (n == "seconds_to_cook") CHECK(v.z >= 0);
  }
}

TEST_CASE("gen_valid_inputs: temporal assumption binds across steps") {
  Solver solver(cftest::test_solver_config());
  // The environment must strictly increase x after the first step.
  ContractSystem sys = cftest::system_of(
      "contract C { input x: int; output z: int; "
      "assume true -> x > pre x; guarantee z = x; }");
  SynthesisOutcome out = synthesize(sys, 8, solver);
  REQUIRE(out.plan.has_value());
  Interpreter interp(plan_to_ir(*out.plan, sys));
  std::mt19937_64 rng(9);
  DomainBounds bounds;
  std::optional<mpz_class> prev;
  for (int i = 0; i < 40; ++i) {
    Valuation in =
        gen_valid_inputs(sys, interp.current_state(), rng, bounds, &solver);
    const mpz_class x = in[0].second.z;
    if (prev) CHECK(x > *prev);
    prev = x;
    interp.step(in);
  }
  RunReport rep = monitor(sys, interp.trace());
  CHECK(rep.violations.empty());
}

TEST_CASE("gen_valid_inputs: unsatisfiable assumption reported") {
  Solver solver(cftest::test_solver_config());
  ContractSystem sys = cftest::system_of(
      "contract C { input x: int; output z: bool; assume false; "
      "guarantee z; }");
  std::mt19937_64 rng(6);
  DomainBounds bounds;
  Valuation state;
  for (const auto& v : sys.state_vars)
    state.emplace_back(v.name, v.sort == Sort::Bool ? Value::of_bool(false)
                                                    : Value::of_int(0));
  CHECK_THROWS_AS(gen_valid_inputs(sys, state, rng, bounds, &solver),
                  AssumptionUnsatisfiable);
}

TEST_CASE("gen_valid_inputs: identical seeds give identical streams") {
  Solver solver(cftest::test_solver_config());
  ContractSystem sys = cftest::system_of_file("microwave.ctr");
  ImplIR ir = synthesize_ir(solver, sys);
  DomainBounds bounds;
  auto run = [&](uint64_t seed) {
    Interpreter interp(ir);
    std::mt19937_64 rng(seed);
    std::string log;
    for (int i = 0; i < 100; ++i) {
      Valuation in =
          gen_valid_inputs(sys, interp.current_state(), rng, bounds, &solver);
      for (const auto& [n, v] : in) log += n + "=" + v.str() + ";";
      interp.step(in);
    }
    return log;
  };
  CHECK(run(42) == run(42));
  CHECK(run(42) != run(43));
}

TEST_CASE("bounded game: fig1 within [0,1] is realizable, variant is not") {
  DomainBounds b01;
  b01.fallback = {0, 1};
  CHECK(bounded_game_solve(cftest::system_of_file("fig1.ctr"), b01) ==
        GameResult::Realizable);
  CHECK(bounded_game_solve(cftest::system_of_file("fig1_noassume.ctr"), b01) ==
        GameResult::Unrealizable);
}

TEST_CASE("bounded game: unsatisfiable transition empties the fixpoint") {
  ContractSystem sys = cftest::system_of(
      "contract C { input x: int; output z: bool; "
      "guarantee true -> (z and not z); }");
  DomainBounds b;
  b.fallback = {0, 1};
  CHECK(bounded_game_solve(sys, b) == GameResult::Unrealizable);
}

TEST_CASE("bounded game: state-space guard") {
  ContractSystem sys = cftest::system_of_file("microwave.ctr");
  DomainBounds huge;
  huge.fallback = {-100000, 100000};
  CHECK_THROWS_AS(bounded_game_solve(sys, huge), SpaceTooLarge);
}

TEST_CASE("interpret: contract without inputs advances on empty valuations") {
  Solver solver(cftest::test_solver_config());
  ContractSystem sys = cftest::system_of(
      "contract C { output c: int; "
      "guarantee c = (0 -> (if pre c >= 3 then 0 else pre c + 1)); }");
  ImplIR ir = synthesize_ir(solver, sys);
  Interpreter interp(ir);
  for (int i = 0; i < 6; ++i) interp.step({});
  Trace t = interp.trace();
  // c cycles 0,1,2,3,0,1,... starting from the witness state.
  CHECK(state_value(t, 0, "c").z == 0);
  CHECK(state_value(t, 4, "c").z == 0);
  CHECK(state_value(t, 5, "c").z == 1);
  RunReport r = monitor(sys, t);
  CHECK(r.violations.empty());
}
