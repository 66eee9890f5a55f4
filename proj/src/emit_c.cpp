#include <cctype>
#include <sstream>

#include "cforge/synthesis.hpp"

namespace cforge {

namespace {

std::string sanitize(const std::string& name) {
  std::string out;
  for (char c : name)
    out += (isalnum(static_cast<unsigned char>(c)) || c == '_') ? c : '_';
  return out;
}

class CEmitter {
 public:
  explicit CEmitter(const ImplIR& ir) : ir_(ir) {
    for (size_t i = 0; i < ir_.state_vars.size(); ++i)
      state_arr_[ir_.state_vars[i].name] =
          "st_" + std::to_string(i) + "_" + sanitize(ir_.state_vars[i].name);
    for (size_t i = 0; i < ir_.inputs.size(); ++i)
      input_arr_[ir_.inputs[i].name] =
          "in_" + std::to_string(i) + "_" + sanitize(ir_.inputs[i].name);
  }

  std::string run() {
    os_ << "/* Synthesized implementation of contract " << ir_.contract_name
        << ". */\n";
    os_ << "/* Reads per step on stdin:";
    if (ir_.inputs.empty()) os_ << " (no inputs)";
    for (const auto& v : ir_.inputs) os_ << " " << v.name;
    os_ << " */\n";
    os_ << "/* Prints per step:";
    if (ir_.outputs.empty()) os_ << " (nothing)";
    for (const auto& o : ir_.outputs) os_ << " " << o;
    os_ << " (booleans as 0/1) */\n";
    os_ << "/* Optional argv[1]: maximum number of steps. */\n\n";
    os_ << "#include <inttypes.h>\n#include <stdio.h>\n#include <stdlib.h>\n\n";
    os_ << "#define K " << ir_.history_len << "\n\n";
    for (const auto& v : ir_.state_vars)
      os_ << "static int64_t " << state_arr_.at(v.name) << "[K];\n";
    for (const auto& v : ir_.inputs)
      os_ << "static int64_t " << input_arr_.at(v.name) << "[K];\n";
    os_ << "\n";

    os_ << "static void shift_state(void) {\n  for (int d = K - 1; d > 0; --d) {\n";
    for (const auto& v : ir_.state_vars)
      os_ << "    " << state_arr_.at(v.name) << "[d] = "
          << state_arr_.at(v.name) << "[d - 1];\n";
    os_ << "  }\n}\n\n";

    os_ << "static int read_inputs(void) {\n";
    if (!ir_.inputs.empty()) {
      os_ << "  for (int d = K - 1; d > 0; --d) {\n";
      for (const auto& v : ir_.inputs)
        os_ << "    " << input_arr_.at(v.name) << "[d] = "
            << input_arr_.at(v.name) << "[d - 1];\n";
      os_ << "  }\n";
      for (const auto& v : ir_.inputs)
        os_ << "  if (scanf(\"%\" SCNd64, &" << input_arr_.at(v.name)
            << "[0]) != 1) return 0;\n";
    }
    os_ << "  return 1;\n}\n\n";

    os_ << "static void print_outputs(void) {\n";
    for (size_t i = 0; i < ir_.outputs.size(); ++i) {
      if (i) os_ << "  putchar(' ');\n";
      os_ << "  printf(\"%\" PRId64 \"\", " << state_arr_.at(ir_.outputs[i])
          << "[0]);\n";
    }
    os_ << "  putchar('\\n');\n}\n\n";

    os_ << "static void init_state(void) {\n";
    for (const auto& [name, val] : ir_.init_assign)
      os_ << "  " << state_arr_.at(name) << "[0] = " << value_c(val) << ";\n";
    os_ << "  shift_state();\n}\n\n";

    for (size_t j = 0; j < ir_.step_blocks.size(); ++j)
      emit_block("step_" + std::to_string(j + 1), ir_.step_blocks[j]);
    emit_block("step_loop", ir_.loop_block);

    os_ << "int main(int argc, char** argv) {\n";
    os_ << "  long long max_steps = argc > 1 ? atoll(argv[1]) : -1;\n";
    os_ << "  init_state();\n";
    for (size_t j = 0; j < ir_.step_blocks.size(); ++j) {
      os_ << "  if (max_steps == 0) return 0;\n";
      os_ << "  if (!read_inputs()) return 0;\n";
      os_ << "  step_" << j + 1 << "();\n";
      os_ << "  print_outputs();\n";
      os_ << "  if (max_steps > 0) max_steps--;\n";
    }
    os_ << "  while (max_steps != 0) {\n";
    os_ << "    if (!read_inputs()) return 0;\n";
    os_ << "    step_loop();\n";
    os_ << "    print_outputs();\n";
    os_ << "    if (max_steps > 0) max_steps--;\n";
    os_ << "  }\n  return 0;\n}\n";
    return os_.str();
  }

 private:
  std::string value_c(const Value& v) const {
    if (v.sort == Sort::Bool) return v.b ? "1" : "0";
    return int_c(v.z);
  }

  std::string int_c(const mpz_class& z) const {
    static const mpz_class kMin = -(mpz_class(1) << 63);
    static const mpz_class kMax = (mpz_class(1) << 63) - 1;
    if (z < kMin || z > kMax)
      throw Error("constant " + z.get_str() +
                  " exceeds the emitted 64-bit integer width");
    if (z < 0) return "(-" + mpz_class(-z).get_str() + "LL)";
    return z.get_str() + "LL";
  }

  std::string expr_c(const TermPtr& t) const {
    switch (t->kind) {
      case TermKind::IntConst:
        return int_c(t->ival);
      case TermKind::BoolConst:
        return t->bval ? "1" : "0";
      case TermKind::Hist: {
        const auto& table =
            t->hist.plane == Plane::State ? state_arr_ : input_arr_;
        return table.at(t->hist.var) + "[" + std::to_string(t->hist.depth) +
               "]";
      }
      case TermKind::Sym:
        throw InternalError("emit: raw symbol in IR term");
      case TermKind::Add: {
        std::string s = "(";
        for (size_t i = 0; i < t->kids.size(); ++i) {
          if (i) s += " + ";
          s += expr_c(t->kids[i]);
        }
        return s + ")";
      }
      case TermKind::Neg:
        return "(-" + expr_c(t->kids[0]) + ")";
      case TermKind::Mul:
        return "(" + expr_c(t->kids[0]) + " * " + expr_c(t->kids[1]) + ")";
      case TermKind::Ite:
        return "(" + expr_c(t->kids[0]) + " ? " + expr_c(t->kids[1]) + " : " +
               expr_c(t->kids[2]) + ")";
      case TermKind::Not:
        return "(!" + expr_c(t->kids[0]) + ")";
      case TermKind::And: {
        std::string s = "(";
        for (size_t i = 0; i < t->kids.size(); ++i) {
          if (i) s += " && ";
          s += expr_c(t->kids[i]);
        }
        return s + ")";
      }
      case TermKind::Or: {
        std::string s = "(";
        for (size_t i = 0; i < t->kids.size(); ++i) {
          if (i) s += " || ";
          s += expr_c(t->kids[i]);
        }
        return s + ")";
      }
      case TermKind::Cmp: {
        const char* op = nullptr;
        switch (t->cmp) {
          case CmpOp::Lt: op = "<"; break;
          case CmpOp::Le: op = "<="; break;
          case CmpOp::Eq: op = "=="; break;
          case CmpOp::Ge: op = ">="; break;
          case CmpOp::Gt: op = ">"; break;
        }
        return "(" + expr_c(t->kids[0]) + " " + op + " " + expr_c(t->kids[1]) +
               ")";
      }
    }
    throw InternalError("emit: unhandled kind");
  }

  void emit_block(const std::string& name, const IrBlock& block) {
    os_ << "static void " << name << "(void) {\n";
    for (size_t i = 0; i < ir_.state_vars.size(); ++i)
      os_ << "  int64_t t" << i << ";\n";
    const size_t n = block.branches.size();
    for (size_t b = 0; b < n; ++b) {
      const IrBranch& br = block.branches[b];
      if (n == 1) {
        // single partition: unconditional
      } else if (b == 0) {
        os_ << "  if (" << expr_c(br.guard) << ") {\n";
      } else if (b + 1 < n) {
        os_ << "  } else if (" << expr_c(br.guard) << ") {\n";
      } else {
        os_ << "  } else {\n";  // last partition doubles as the default
      }
      const std::string pad = n == 1 ? "  " : "    ";
      for (size_t i = 0; i < ir_.state_vars.size(); ++i) {
        const auto& [vn, term] = br.assigns[i];
        (void)vn;
        os_ << pad << "t" << i << " = " << expr_c(term) << ";\n";
      }
    }
    if (n > 1) os_ << "  }\n";
    os_ << "  shift_state();\n";
    for (size_t i = 0; i < ir_.state_vars.size(); ++i)
      os_ << "  " << state_arr_.at(ir_.state_vars[i].name) << "[0] = t" << i
          << ";\n";
    os_ << "}\n\n";
  }

  const ImplIR& ir_;
  std::map<std::string, std::string> state_arr_;
  std::map<std::string, std::string> input_arr_;
  std::ostringstream os_;
};

}  // namespace

EmittedProgram emit_program(const ImplIR& ir) {
  EmittedProgram p;
  p.source = CEmitter(ir).run();
  return p;
}

}  // namespace cforge
