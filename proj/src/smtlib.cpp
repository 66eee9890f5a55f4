#include <sstream>

#include "cforge/smt.hpp"

namespace cforge {

namespace {

void emit_decls(std::ostringstream& os, const std::vector<SymbolDecl>& decls) {
  for (const auto& d : decls)
    os << "(declare-const " << d.sym.str() << " " << to_string(d.sort)
       << ")\n";
}

void emit_binder_list(std::ostringstream& os,
                      const std::vector<SymbolDecl>& decls) {
  os << "(";
  for (size_t i = 0; i < decls.size(); ++i) {
    if (i) os << " ";
    os << "(" << decls[i].sym.str() << " " << to_string(decls[i].sort) << ")";
  }
  os << ")";
}

}  // namespace

std::string emit_smtlib(const std::vector<SymbolDecl>& decls,
                        const TermPtr& assertion, const EmitOptions& opts) {
  std::ostringstream os;
  if (!opts.logic.empty()) os << "(set-logic " << opts.logic << ")\n";
  emit_decls(os, decls);
  os << "(assert " << term_to_smt2(assertion) << ")\n";
  if (opts.check_sat) os << "(check-sat)\n";
  return os.str();
}

std::string emit_validity_script(const ForallExistsFormula& q,
                                 const std::string& logic) {
  std::ostringstream os;
  if (!logic.empty()) os << "(set-logic " << logic << ")\n";
  std::ostringstream body;
  if (q.existentials.empty()) {
    body << "(=> " << term_to_smt2(q.premise) << " "
         << term_to_smt2(q.conclusion) << ")";
  } else {
    body << "(=> " << term_to_smt2(q.premise) << " (exists ";
    std::ostringstream binders;
    emit_binder_list(binders, q.existentials);
    body << binders.str() << " " << term_to_smt2(q.conclusion) << "))";
  }
  if (q.universals.empty()) {
    os << "(assert " << body.str() << ")\n";
  } else {
    os << "(assert (forall ";
    emit_binder_list(os, q.universals);
    os << " " << body.str() << "))\n";
  }
  os << "(check-sat)\n";
  return os.str();
}

std::string emit_negation_script(const ForallExistsFormula& q,
                                 const std::string& logic) {
  std::ostringstream os;
  if (!logic.empty()) os << "(set-logic " << logic << ")\n";
  emit_decls(os, q.universals);
  os << "(assert " << term_to_smt2(q.premise) << ")\n";
  if (q.existentials.empty()) {
    os << "(assert (not " << term_to_smt2(q.conclusion) << "))\n";
  } else {
    os << "(assert (forall ";
    emit_binder_list(os, q.existentials);
    os << " (not " << term_to_smt2(q.conclusion) << ")))\n";
  }
  os << "(check-sat)\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Model parsing

namespace {

struct Sexp {
  bool atom = true;
  std::string text;
  std::vector<Sexp> kids;
};

class SexpParser {
 public:
  explicit SexpParser(const std::string& s) : s_(s) {}

  std::vector<Sexp> parse_all() {
    std::vector<Sexp> out;
    skip_ws();
    while (i_ < s_.size()) {
      out.push_back(parse());
      skip_ws();
    }
    return out;
  }

 private:
  Sexp parse() {
    skip_ws();
    if (i_ >= s_.size()) throw SolverError("model parse: unexpected end");
    if (s_[i_] == '(') {
      i_++;
      Sexp e;
      e.atom = false;
      skip_ws();
      while (i_ < s_.size() && s_[i_] != ')') {
        e.kids.push_back(parse());
        skip_ws();
      }
      if (i_ >= s_.size()) throw SolverError("model parse: unbalanced parens");
      i_++;
      return e;
    }
    Sexp e;
    if (s_[i_] == '|') {
      i_++;
      size_t start = i_;
      while (i_ < s_.size() && s_[i_] != '|') i_++;
      e.text = s_.substr(start, i_ - start);
      if (i_ < s_.size()) i_++;
      return e;
    }
    size_t start = i_;
    while (i_ < s_.size() && !isspace(static_cast<unsigned char>(s_[i_])) &&
           s_[i_] != '(' && s_[i_] != ')')
      i_++;
    e.text = s_.substr(start, i_ - start);
    return e;
  }

  void skip_ws() {
    while (i_ < s_.size()) {
      if (isspace(static_cast<unsigned char>(s_[i_]))) {
        i_++;
      } else if (s_[i_] == ';') {
        while (i_ < s_.size() && s_[i_] != '\n') i_++;
      } else {
        break;
      }
    }
  }

  const std::string& s_;
  size_t i_ = 0;
};

std::optional<Value> value_of_sexp(const Sexp& v, Sort sort) {
  if (v.atom) {
    if (sort == Sort::Bool) {
      if (v.text == "true") return Value::of_bool(true);
      if (v.text == "false") return Value::of_bool(false);
      return std::nullopt;
    }
    if (v.text.empty()) return std::nullopt;
    for (size_t i = 0; i < v.text.size(); ++i) {
      char c = v.text[i];
      if (!(isdigit(static_cast<unsigned char>(c)) || (i == 0 && c == '-')))
        return std::nullopt;
    }
    return Value::of_int(mpz_class(v.text));
  }
  // (- N)
  if (sort == Sort::Int && v.kids.size() == 2 && v.kids[0].atom &&
      v.kids[0].text == "-") {
    auto inner = value_of_sexp(v.kids[1], Sort::Int);
    if (inner) return Value::of_int(-inner->z);
  }
  return std::nullopt;
}

}  // namespace

Model parse_model_output(const std::string& text,
                         const std::vector<SymbolDecl>& decls) {
  Model m;
  std::map<std::string, const SymbolDecl*> by_name;
  for (const auto& d : decls) by_name[d.sym.str()] = &d;

  // Find the model list: the first s-expression whose entries are
  // (define-fun name () sort value).
  std::vector<Sexp> top;
  try {
    top = SexpParser(text).parse_all();
  } catch (const SolverError&) {
    top.clear();
  }
  for (const auto& e : top) {
    if (e.atom) continue;
    for (const auto& def : e.kids) {
      if (def.atom || def.kids.size() < 5) continue;
      if (!(def.kids[0].atom && def.kids[0].text == "define-fun")) continue;
      const std::string& name = def.kids[1].text;
      auto it = by_name.find(name);
      if (it == by_name.end()) continue;
      auto val = value_of_sexp(def.kids[4], it->second->sort);
      if (val) m.values[it->second->sym] = *val;
    }
  }
  // Total over the declared symbols: absent entries default to 0 / false.
  for (const auto& d : decls) {
    if (!m.values.count(d.sym))
      m.values[d.sym] = d.sort == Sort::Bool ? Value::of_bool(false)
                                             : Value::of_int(0);
  }
  return m;
}

const char* to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::Sat: return "sat";
    case SolverStatus::Unsat: return "unsat";
    case SolverStatus::Unknown: return "unknown";
    case SolverStatus::Timeout: return "timeout";
    case SolverStatus::ProcessError: return "process-error";
  }
  return "?";
}

}  // namespace cforge
