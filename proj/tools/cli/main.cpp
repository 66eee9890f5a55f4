#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cforge/jsonio.hpp"
#include "cforge/parse.hpp"
#include "cforge/simulate.hpp"
#include "cforge/smt.hpp"
#include "cforge/synthesis.hpp"
#include "cforge/version.hpp"

namespace {

using namespace cforge;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  out << text;
}

ContractSystem load_system(const std::string& path) {
  return lower(typecheck_and_expand(parse_contract(slurp(path))));
}

struct CommonOpts {
  std::string contract_path;
  std::string solver_cmd;
  int timeout_ms = 60000;
  int max_k = 8;
  bool json = false;
};

SolverConfig make_config(const CommonOpts& o) {
  SolverConfig cfg = default_solver_config();
  if (!o.solver_cmd.empty()) cfg.command = split_command(o.solver_cmd);
  cfg.timeout_ms = o.timeout_ms;
  return cfg;
}

std::pair<mpz_class, mpz_class> parse_range(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos)
    throw Error("bounds must be LO:HI, got '" + text + "'");
  return {mpz_class(text.substr(0, colon)), mpz_class(text.substr(colon + 1))};
}

DomainBounds make_bounds(const std::string& global,
                         const std::vector<std::string>& per_var) {
  DomainBounds b;
  if (!global.empty()) b.fallback = parse_range(global);
  for (const auto& entry : per_var) {
    auto eq = entry.find('=');
    if (eq == std::string::npos)
      throw Error("per-variable bound must be NAME=LO:HI, got '" + entry + "'");
    b.per_var[entry.substr(0, eq)] = parse_range(entry.substr(eq + 1));
  }
  for (const auto& [name, range] : b.per_var)
    if (range.first > range.second)
      throw Error("empty bounds for " + name);
  if (b.fallback.first > b.fallback.second) throw Error("empty bounds");
  return b;
}

void print_trace(std::ostream& os, const Trace& t) {
  for (const auto& f : t.frames) {
    os << "  step " << f.step << ": inputs {";
    for (size_t i = 0; i < f.inputs.size(); ++i) {
      if (i) os << ", ";
      os << f.inputs[i].first << "=" << f.inputs[i].second.str();
    }
    os << "} state {";
    for (size_t i = 0; i < f.state.size(); ++i) {
      if (i) os << ", ";
      os << f.state[i].first << "=" << f.state[i].second.str();
    }
    os << "}\n";
  }
}

int exit_code_for(const Verdict& v) {
  switch (v.tag) {
    case VerdictTag::Realizable: return 0;
    case VerdictTag::Unrealizable: return 2;
    case VerdictTag::Unknown: return 3;
  }
  return 1;
}

void report_verdict(const Verdict& v, bool json) {
  if (json) {
    std::cout << verdict_to_json(v).dump(2) << "\n";
    return;
  }
  switch (v.tag) {
    case VerdictTag::Realizable:
      std::cout << "Realizable (k=" << v.k << ")\n";
      break;
    case VerdictTag::Unrealizable:
      std::cout << "Unrealizable (k=" << v.k << ")\n";
      print_trace(std::cout, v.trace);
      break;
    case VerdictTag::Unknown:
      std::cout << "Unknown (k=" << v.k << "): " << v.reason << "\n";
      break;
  }
}

std::string dump_ir(const ImplIR& ir) {
  std::ostringstream os;
  os << "(impl " << ir.contract_name << " (history " << ir.history_len
     << ")\n";
  os << " (init";
  for (const auto& [n, v] : ir.init_assign) os << " (" << n << " " << v.str() << ")";
  os << ")\n";
  auto block = [&](const std::string& name, const IrBlock& b) {
    os << " (" << name << "\n";
    for (size_t i = 0; i < b.branches.size(); ++i) {
      const auto& br = b.branches[i];
      os << "  (branch " << term_to_smt2(br.guard) << "\n";
      for (const auto& [n, t] : br.assigns)
        os << "    (" << n << " " << term_to_smt2(t) << ")\n";
      os << "  )\n";
    }
    os << " )\n";
  };
  for (size_t j = 0; j < ir.step_blocks.size(); ++j)
    block("step-" + std::to_string(j + 1), ir.step_blocks[j]);
  block("loop", ir.loop_block);
  os << ")\n";
  return os.str();
}

int cmd_check(const CommonOpts& o, const std::string& engine) {
  ContractSystem sys = load_system(o.contract_path);
  const CheckEngine eng = engine == "quantified" ? CheckEngine::QuantifiedSmt
                                                 : CheckEngine::Skolem;
  Verdict v = check_realizability(sys, o.max_k, make_config(o), eng);
  report_verdict(v, o.json);
  return exit_code_for(v);
}

int cmd_synthesize(const CommonOpts& o, const std::string& emit_what,
                   const std::string& out_path,
                   const std::string& dump_skolem_path) {
  ContractSystem sys = load_system(o.contract_path);
  SynthesisOutcome res = synthesize(sys, o.max_k, make_config(o));
  if (!res.plan) {
    std::cerr << "synthesis refused: contract is "
              << to_string(res.verdict.tag) << " (k=" << res.verdict.k << ")"
              << (res.verdict.reason.empty() ? "" : ": " + res.verdict.reason)
              << "\n";
    if (res.verdict.tag == VerdictTag::Unrealizable)
      print_trace(std::cerr, res.verdict.trace);
    return exit_code_for(res.verdict);
  }
  if (!dump_skolem_path.empty())
    write_file(dump_skolem_path, res.plan->extend_skolem.dump());

  std::string text;
  if (emit_what == "skolem") {
    text = res.plan->extend_skolem.dump();
  } else if (emit_what == "ir") {
    text = dump_ir(plan_to_ir(*res.plan, sys));
  } else {
    text = emit_program(plan_to_ir(*res.plan, sys)).source;
  }
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
  return 0;
}

std::vector<Valuation> read_input_file(const ContractSystem& sys,
                                       const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read input file: " + path);
  std::vector<Valuation> stream;
  while (true) {
    Valuation step;
    for (const auto& [n, s] : sys.inputs) {
      std::string tok;
      if (!(in >> tok)) {
        if (step.empty()) return stream;
        throw Error("input file ends mid-step");
      }
      if (s == Sort::Bool)
        step.emplace_back(n, Value::of_bool(tok != "0"));
      else
        step.emplace_back(n, Value::of_int(mpz_class(tok)));
    }
    if (sys.inputs.empty()) return stream;  // no inputs: empty stream
    stream.push_back(std::move(step));
  }
}

int cmd_simulate(const CommonOpts& o, int steps, unsigned long long seed,
                 const std::string& bounds_global,
                 const std::vector<std::string>& bounds_per_var,
                 const std::string& input_file, const std::string& out_path) {
  ContractSystem sys = load_system(o.contract_path);
  SolverConfig cfg = make_config(o);
  Solver solver(cfg);
  SynthesisOutcome res = synthesize(sys, o.max_k, solver);
  if (!res.plan) {
    std::cerr << "cannot simulate: contract is " << to_string(res.verdict.tag)
              << " (k=" << res.verdict.k << ")\n";
    return 1;
  }
  ImplIR ir = plan_to_ir(*res.plan, sys);
  Interpreter interp(ir);
  DomainBounds bounds = make_bounds(bounds_global, bounds_per_var);
  std::mt19937_64 rng(seed);

  bool assumption_dead_end = false;
  std::string dead_end_reason;
  if (!input_file.empty()) {
    for (const auto& inputs : read_input_file(sys, input_file))
      interp.step(inputs);
  } else {
    for (int i = 0; i < steps; ++i) {
      Valuation inputs;
      try {
        inputs =
            gen_valid_inputs(sys, interp.current_state(), rng, bounds, &solver);
      } catch (const AssumptionUnsatisfiable& e) {
        assumption_dead_end = true;
        dead_end_reason = e.what();
        break;
      }
      interp.step(inputs);
    }
  }

  RunReport report = monitor(sys, interp.trace());
  report.default_branch_firings = interp.default_branch_firings();
  report.steps = interp.steps_done();

  if (!out_path.empty())
    write_file(out_path, report_to_json(report).dump(2) + "\n");
  if (o.json) {
    std::cout << report_to_json(report).dump(2) << "\n";
  } else {
    std::cout << "steps=" << report.steps
              << " violations=" << report.violations.size()
              << " default_branch_firings=" << report.default_branch_firings;
    if (report.assumption_breach_step)
      std::cout << " assumption_breach_step=" << *report.assumption_breach_step;
    std::cout << "\n";
    if (assumption_dead_end)
      std::cout << "run ended early: " << dead_end_reason << "\n";
    for (const auto& v : report.violations)
      std::cout << "violation at step " << v.step << ": " << v.label << " ("
                << v.kind << ")\n";
  }
  return report.violations.empty() ? 0 : 1;
}

int cmd_emit_smt(const CommonOpts& o, const std::string& query,
                 const std::string& form, const std::string& out_dir) {
  ContractSystem sys = load_system(o.contract_path);
  SolverConfig cfg = make_config(o);
  auto render = [&](const ForallExistsFormula& q) {
    return form == "negation"
               ? emit_negation_script(q, cfg.logic_quantified)
               : emit_validity_script(q, cfg.logic_quantified);
  };
  std::vector<std::pair<std::string, std::string>> scripts;
  const int k = o.max_k;
  if (query == "base" || query == "both")
    scripts.emplace_back("base_check_k" + std::to_string(k) + ".smt2",
                         render(build_base_check_prime(sys, k)));
  if (query == "extend" || query == "both")
    scripts.emplace_back("extend_check_k" + std::to_string(k) + ".smt2",
                         render(build_extend_check(sys, k)));
  if (query == "gi")
    scripts.emplace_back("gi_witness.smt2",
                         render(build_gi_witness_query(sys)));
  if (out_dir.empty()) {
    for (const auto& [name, text] : scripts)
      std::cout << "; " << name << "\n" << text;
  } else {
    std::filesystem::create_directories(out_dir);
    for (const auto& [name, text] : scripts)
      write_file((std::filesystem::path(out_dir) / name).string(), text);
  }
  return 0;
}

int cmd_oracle_check(const CommonOpts& o, const std::string& bounds_global,
                     const std::vector<std::string>& bounds_per_var) {
  ContractSystem sys = load_system(o.contract_path);
  Verdict engine = check_realizability(sys, o.max_k, make_config(o));
  GameResult oracle =
      bounded_game_solve(sys, make_bounds(bounds_global, bounds_per_var));
  const std::string oracle_str =
      oracle == GameResult::Realizable ? "realizable" : "unrealizable";
  if (o.json) {
    Json j;
    j["version"] = CFORGE_VERSION;
    j["engine"] = to_string(engine.tag);
    j["engine_k"] = engine.k;
    j["oracle"] = oracle_str;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "engine: " << to_string(engine.tag) << " (k=" << engine.k
              << ")\noracle: " << oracle_str << "\n";
  }
  if (engine.tag == VerdictTag::Unknown) return 3;
  const bool engine_real = engine.tag == VerdictTag::Realizable;
  const bool oracle_real = oracle == GameResult::Realizable;
  if (engine_real == oracle_real) return 0;
  // The documented one-sided incompleteness: the engine may reject a
  // realizable contract, never the reverse.
  if (!engine_real && oracle_real) {
    std::cerr << "flagged: engine unrealizable vs oracle realizable "
                 "(base-check incompleteness direction)\n";
    return 4;
  }
  std::cerr << "disagreement: engine realizable vs oracle unrealizable\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"contract-forge: realizability checking and synthesis for "
               "assume-guarantee contracts over linear integer arithmetic"};
  app.set_version_flag("--version", CFORGE_VERSION);
  app.require_subcommand(1);

  CommonOpts common;
  auto add_common = [&](CLI::App* sub, bool with_max_k = true) {
    sub->add_option("contract", common.contract_path, "contract file")
        ->required();
    sub->add_option("--solver-cmd", common.solver_cmd,
                    "SMT solver command line (default: $CONTRACT_FORGE_SOLVER "
                    "or 'z3 -in')");
    sub->add_option("--timeout-ms", common.timeout_ms,
                    "per-query solver timeout");
    if (with_max_k)
      sub->add_option("--max-k", common.max_k, "maximum unrolling depth");
    sub->add_flag("--json", common.json, "machine-readable output");
  };

  auto* check = app.add_subcommand("check", "decide realizability");
  std::string engine = "skolem";
  add_common(check);
  check->add_option("--engine", engine, "skolem | quantified")
      ->check(CLI::IsMember({"skolem", "quantified"}));

  auto* synth = app.add_subcommand("synthesize",
                                   "synthesize an implementation");
  std::string emit_what = "program";
  std::string out_path;
  std::string dump_skolem_path;
  add_common(synth);
  synth->add_option("--emit", emit_what, "program | ir | skolem")
      ->check(CLI::IsMember({"program", "ir", "skolem"}));
  synth->add_option("--out", out_path, "output file (default stdout)");
  synth->add_option("--dump-skolem", dump_skolem_path,
                    "write the extend-step Skolem relation to this path");

  auto* sim = app.add_subcommand("simulate",
                                 "synthesize, run and monitor the result");
  int steps = 10000;
  unsigned long long seed = 0;
  std::string bounds_global;
  std::vector<std::string> bounds_per_var;
  std::string input_file;
  std::string sim_out;
  add_common(sim);
  sim->add_option("--steps", steps, "number of steps (default 10000)");
  sim->add_option("--seed", seed, "random seed");
  sim->add_option("--bounds", bounds_global,
                  "global input sampling bounds LO:HI (default -16:16)");
  sim->add_option("--bound", bounds_per_var,
                  "per-variable bounds NAME=LO:HI (repeatable)");
  sim->add_option("--input-file", input_file,
                  "read inputs from file instead of generating them");
  sim->add_option("--out", sim_out, "write the run report JSON to this path");

  auto* emit = app.add_subcommand("emit-smt", "dump the solver queries");
  std::string query = "both";
  std::string form = "validity";
  std::string emit_out;
  add_common(emit);
  emit->add_option("--query", query, "base | extend | gi | both")
      ->check(CLI::IsMember({"base", "extend", "gi", "both"}));
  emit->add_option("--form", form, "validity | negation")
      ->check(CLI::IsMember({"validity", "negation"}));
  emit->add_option("--out", emit_out, "output directory (default stdout)");

  auto* oracle = app.add_subcommand(
      "oracle-check", "compare the engine against the bounded-game oracle");
  std::string obounds_global;
  std::vector<std::string> obounds_per_var;
  add_common(oracle);
  oracle->add_option("--bounds", obounds_global,
                     "global enumeration bounds LO:HI (default -16:16)");
  oracle->add_option("--bound", obounds_per_var,
                     "per-variable bounds NAME=LO:HI (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;  // usage errors are exit 1; --help/--version exit 0
  }

  try {
    if (app.got_subcommand(check)) return cmd_check(common, engine);
    if (app.got_subcommand(synth))
      return cmd_synthesize(common, emit_what, out_path, dump_skolem_path);
    if (app.got_subcommand(sim))
      return cmd_simulate(common, steps, seed, bounds_global, bounds_per_var,
                          input_file, sim_out);
    if (app.got_subcommand(emit))
      return cmd_emit_smt(common, query, form, emit_out);
    if (app.got_subcommand(oracle))
      return cmd_oracle_check(common, obounds_global, obounds_per_var);
  } catch (const cforge::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
