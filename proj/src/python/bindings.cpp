#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cforge/jsonio.hpp"
#include "cforge/parse.hpp"
#include "cforge/simulate.hpp"
#include "cforge/synthesis.hpp"
#include "cforge/version.hpp"

namespace py = pybind11;
using namespace cforge;

namespace {

SolverConfig make_config(const std::string& solver_cmd, int timeout_ms) {
  SolverConfig cfg = default_solver_config();
  if (!solver_cmd.empty()) cfg.command = split_command(solver_cmd);
  cfg.timeout_ms = timeout_ms;
  return cfg;
}

py::object to_py(const Json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

ContractSystem system_of(const std::string& text) {
  return lower(typecheck_and_expand(parse_contract(text)));
}

py::dict parse_summary(const std::string& text) {
  ContractSpec spec = parse_contract(text);
  py::dict d;
  d["name"] = spec.name;
  py::list ins, outs;
  for (const auto& [n, s] : spec.inputs)
    ins.append(py::make_tuple(n, s == Sort::Int ? "int" : "bool"));
  for (const auto& [n, s] : spec.outputs)
    outs.append(py::make_tuple(n, s == Sort::Int ? "int" : "bool"));
  d["inputs"] = ins;
  d["outputs"] = outs;
  d["nodes"] = spec.nodes.size();
  d["assumptions"] = spec.assumptions.size();
  d["guarantees"] = spec.guarantees.size();
  return d;
}

py::object check_contract(const std::string& text, int max_k,
                 const std::string& solver_cmd, int timeout_ms,
                 const std::string& engine) {
  ContractSystem sys = system_of(text);
  Verdict v = check_realizability(
      sys, max_k, make_config(solver_cmd, timeout_ms),
      engine == "quantified" ? CheckEngine::QuantifiedSmt
                             : CheckEngine::Skolem);
  return to_py(verdict_to_json(v));
}

SynthesisOutcome synth(const std::string& text, int max_k,
                       const std::string& solver_cmd, int timeout_ms) {
  ContractSystem sys = system_of(text);
  return synthesize(sys, max_k, make_config(solver_cmd, timeout_ms));
}

std::string synthesize_c(const std::string& text, int max_k,
                         const std::string& solver_cmd, int timeout_ms) {
  ContractSystem sys = system_of(text);
  SynthesisOutcome out = synthesize(sys, max_k,
                                    make_config(solver_cmd, timeout_ms));
  if (!out.plan)
    throw Error("synthesis refused: contract is " +
                std::string(to_string(out.verdict.tag)));
  return emit_program(plan_to_ir(*out.plan, sys)).source;
}

std::string synthesize_skolem(const std::string& text, int max_k,
                              const std::string& solver_cmd, int timeout_ms) {
  SynthesisOutcome out = synth(text, max_k, solver_cmd, timeout_ms);
  if (!out.plan)
    throw Error("synthesis refused: contract is " +
                std::string(to_string(out.verdict.tag)));
  return out.plan->extend_skolem.dump();
}

py::object simulate(const std::string& text, int steps,
                    unsigned long long seed, int max_k,
                    const std::string& solver_cmd, int timeout_ms,
                    long lo, long hi) {
  ContractSystem sys = system_of(text);
  SolverConfig cfg = make_config(solver_cmd, timeout_ms);
  Solver solver(cfg);
  SynthesisOutcome out = synthesize(sys, max_k, solver);
  if (!out.plan)
    throw Error("cannot simulate: contract is " +
                std::string(to_string(out.verdict.tag)));
  ImplIR ir = plan_to_ir(*out.plan, sys);
  Interpreter interp(ir);
  DomainBounds bounds;
  bounds.fallback = {mpz_class(lo), mpz_class(hi)};
  std::mt19937_64 rng(seed);
  for (int i = 0; i < steps; ++i) {
    Valuation inputs;
    try {
      inputs = gen_valid_inputs(sys, interp.current_state(), rng, bounds,
                                &solver);
    } catch (const AssumptionUnsatisfiable&) {
      break;
    }
    interp.step(inputs);
  }
  RunReport report = monitor(sys, interp.trace());
  report.default_branch_firings = interp.default_branch_firings();
  report.steps = interp.steps_done();
  return to_py(report_to_json(report));
}

std::string emit_smt(const std::string& text, int k, const std::string& query,
                     const std::string& form) {
  ContractSystem sys = system_of(text);
  ForallExistsFormula q = query == "base" ? build_base_check_prime(sys, k)
                          : query == "gi" ? build_gi_witness_query(sys)
                                          : build_extend_check(sys, k);
  return form == "negation" ? emit_negation_script(q, "LIA")
                            : emit_validity_script(q, "LIA");
}

py::dict oracle_check(const std::string& text, int max_k,
                      const std::string& solver_cmd, int timeout_ms,
                      long lo, long hi) {
  ContractSystem sys = system_of(text);
  Verdict engine =
      check_realizability(sys, max_k, make_config(solver_cmd, timeout_ms));
  DomainBounds bounds;
  bounds.fallback = {mpz_class(lo), mpz_class(hi)};
  GameResult oracle = bounded_game_solve(sys, bounds);
  py::dict d;
  d["engine"] = to_string(engine.tag);
  d["engine_k"] = engine.k;
  d["oracle"] =
      oracle == GameResult::Realizable ? "realizable" : "unrealizable";
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Realizability checking and synthesis for assume-guarantee "
            "contracts over linear integer arithmetic";
  m.attr("__version__") = CFORGE_VERSION;

  py::register_exception<Error>(m, "ContractForgeError");

  m.def("parse_summary", &parse_summary, py::arg("text"),
        "Parse a contract and return a summary dict");
  m.def("check", &check_contract, py::arg("text"), py::arg("max_k") = 8,
        py::arg("solver_cmd") = "", py::arg("timeout_ms") = 60000,
        py::arg("engine") = "skolem",
        "Decide realizability; returns the verdict as a dict");
  m.def("synthesize_c", &synthesize_c, py::arg("text"), py::arg("max_k") = 8,
        py::arg("solver_cmd") = "", py::arg("timeout_ms") = 60000,
        "Synthesize and return the C implementation source");
  m.def("synthesize_skolem", &synthesize_skolem, py::arg("text"),
        py::arg("max_k") = 8, py::arg("solver_cmd") = "",
        py::arg("timeout_ms") = 60000,
        "Synthesize and return the extend-step Skolem relation dump");
  m.def("simulate", &simulate, py::arg("text"), py::arg("steps") = 100,
        py::arg("seed") = 0, py::arg("max_k") = 8, py::arg("solver_cmd") = "",
        py::arg("timeout_ms") = 60000, py::arg("lo") = -16, py::arg("hi") = 16,
        "Synthesize, run with generated valid inputs, monitor; returns the "
        "run report as a dict");
  m.def("emit_smt", &emit_smt, py::arg("text"), py::arg("k") = 0,
        py::arg("query") = "extend", py::arg("form") = "validity",
        "Render the depth-k solver query as SMT-LIB v2 text");
  m.def("oracle_check", &oracle_check, py::arg("text"), py::arg("max_k") = 8,
        py::arg("solver_cmd") = "", py::arg("timeout_ms") = 60000,
        py::arg("lo") = -16, py::arg("hi") = 16,
        "Compare the engine verdict with the bounded-game oracle");
}
