#include "cforge/parse.hpp"

#include <cctype>
#include <set>

namespace cforge {

namespace {

enum class Tok : uint8_t {
  Ident,
  Int,
  String,
  KwContract,
  KwInput,
  KwOutput,
  KwNode,
  KwAssume,
  KwGuarantee,
  KwIntSort,
  KwBoolSort,
  KwTrue,
  KwFalse,
  KwNot,
  KwAnd,
  KwOr,
  KwIf,
  KwThen,
  KwElse,
  KwPre,
  LBrace,
  RBrace,
  LParen,
  RParen,
  Colon,
  Semi,
  Comma,
  Eq,        // =
  Neq,       // <>
  Lt,
  Le,
  Gt,
  Ge,
  Plus,
  Minus,
  Star,
  Arrow,     // ->
  Implies,   // =>
  End,
};

struct Token {
  Tok kind;
  std::string text;
  mpz_class ival;
  SourcePos pos;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  Token next() {
    skip_ws();
    Token t;
    t.pos = pos();
    if (i_ >= src_.size()) {
      t.kind = Tok::End;
      return t;
    }
    const char c = src_[i_];
    if (isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = i_;
      while (i_ < src_.size() &&
             (isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_'))
        advance();
      t.text = src_.substr(start, i_ - start);
      t.kind = keyword(t.text);
      return t;
    }
    if (isdigit(static_cast<unsigned char>(c))) {
      size_t start = i_;
      while (i_ < src_.size() && isdigit(static_cast<unsigned char>(src_[i_])))
        advance();
      t.kind = Tok::Int;
      t.text = src_.substr(start, i_ - start);
      t.ival = mpz_class(t.text);
      return t;
    }
    if (c == '"') {
      advance();
      std::string s;
      while (true) {
        if (i_ >= src_.size()) throw ParseError(t.pos, "unterminated string");
        char d = src_[i_];
        advance();
        if (d == '"') {
          if (i_ < src_.size() && src_[i_] == '"') {
            s += '"';
            advance();
            continue;
          }
          break;
        }
        s += d;
      }
      t.kind = Tok::String;
      t.text = std::move(s);
      return t;
    }
    auto two = [&](char a, char b) {
      return c == a && i_ + 1 < src_.size() && src_[i_ + 1] == b;
    };
    if (two('-', '>')) { advance(); advance(); t.kind = Tok::Arrow; return t; }
    if (two('=', '>')) { advance(); advance(); t.kind = Tok::Implies; return t; }
    if (two('<', '>')) { advance(); advance(); t.kind = Tok::Neq; return t; }
    if (two('<', '=')) { advance(); advance(); t.kind = Tok::Le; return t; }
    if (two('>', '=')) { advance(); advance(); t.kind = Tok::Ge; return t; }
    advance();
    switch (c) {
      case '{': t.kind = Tok::LBrace; return t;
      case '}': t.kind = Tok::RBrace; return t;
      case '(': t.kind = Tok::LParen; return t;
      case ')': t.kind = Tok::RParen; return t;
      case ':': t.kind = Tok::Colon; return t;
      case ';': t.kind = Tok::Semi; return t;
      case ',': t.kind = Tok::Comma; return t;
      case '=': t.kind = Tok::Eq; return t;
      case '<': t.kind = Tok::Lt; return t;
      case '>': t.kind = Tok::Gt; return t;
      case '+': t.kind = Tok::Plus; return t;
      case '-': t.kind = Tok::Minus; return t;
      case '*': t.kind = Tok::Star; return t;
      default:
        throw ParseError(t.pos, std::string("unexpected character '") + c + "'");
    }
  }

 private:
  SourcePos pos() const { return {line_, col_}; }

  void advance() {
    if (src_[i_] == '\n') {
      line_++;
      col_ = 1;
    } else {
      col_++;
    }
    i_++;
  }

  void skip_ws() {
    while (i_ < src_.size()) {
      if (isspace(static_cast<unsigned char>(src_[i_]))) {
        advance();
      } else if (src_[i_] == '-' && i_ + 1 < src_.size() && src_[i_ + 1] == '-') {
        while (i_ < src_.size() && src_[i_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  static Tok keyword(const std::string& s) {
    if (s == "contract") return Tok::KwContract;
    if (s == "input") return Tok::KwInput;
    if (s == "output") return Tok::KwOutput;
    if (s == "node") return Tok::KwNode;
    if (s == "assume") return Tok::KwAssume;
    if (s == "guarantee") return Tok::KwGuarantee;
    if (s == "int") return Tok::KwIntSort;
    if (s == "bool") return Tok::KwBoolSort;
    if (s == "true") return Tok::KwTrue;
    if (s == "false") return Tok::KwFalse;
    if (s == "not") return Tok::KwNot;
    if (s == "and") return Tok::KwAnd;
    if (s == "or") return Tok::KwOr;
    if (s == "if") return Tok::KwIf;
    if (s == "then") return Tok::KwThen;
    if (s == "else") return Tok::KwElse;
    if (s == "pre") return Tok::KwPre;
    return Tok::Ident;
  }

  const std::string& src_;
  size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) { bump(); }

  ContractSpec contract() {
    expect(Tok::KwContract, "expected 'contract'");
    ContractSpec spec;
    spec.name = expect_ident("contract name");
    expect(Tok::LBrace, "expected '{'");
    while (cur_.kind != Tok::RBrace) item(spec);
    expect(Tok::RBrace, "expected '}'");
    expect(Tok::End, "trailing input after contract");
    return spec;
  }

  ExprPtr expression_only() {
    ExprPtr e = expr();
    expect(Tok::End, "trailing input after expression");
    return e;
  }

 private:
  void item(ContractSpec& spec) {
    const SourcePos at = cur_.pos;
    switch (cur_.kind) {
      case Tok::KwInput:
      case Tok::KwOutput: {
        const bool is_input = cur_.kind == Tok::KwInput;
        bump();
        std::string name = expect_ident("variable name");
        expect(Tok::Colon, "expected ':'");
        Sort s = sort();
        expect(Tok::Semi, "expected ';'");
        declare_unique(spec, name, at);
        (is_input ? spec.inputs : spec.outputs).emplace_back(std::move(name), s);
        return;
      }
      case Tok::KwNode: {
        bump();
        NodeDef nd;
        nd.pos = at;
        nd.name = expect_ident("node name");
        if (spec.find_node(nd.name))
          throw ParseError(at, "duplicate declaration of '" + nd.name + "'");
        expect(Tok::LParen, "expected '('");
        if (cur_.kind != Tok::RParen) {
          while (true) {
            std::string pn = expect_ident("parameter name");
            expect(Tok::Colon, "expected ':'");
            Sort ps = sort();
            for (const auto& [existing, _] : nd.params)
              if (existing == pn)
                throw ParseError(at, "duplicate parameter '" + pn + "'");
            nd.params.emplace_back(std::move(pn), ps);
            if (cur_.kind == Tok::Comma) {
              bump();
              continue;
            }
            break;
          }
        }
        expect(Tok::RParen, "expected ')'");
        expect(Tok::Colon, "expected ':'");
        nd.result = sort();
        expect(Tok::Eq, "expected '='");
        nd.body = expr();
        expect(Tok::Semi, "expected ';'");
        spec.nodes.push_back(std::move(nd));
        return;
      }
      case Tok::KwAssume:
      case Tok::KwGuarantee: {
        const bool is_assume = cur_.kind == Tok::KwAssume;
        bump();
        LabeledExpr le;
        if (cur_.kind == Tok::String) {
          le.label = cur_.text;
          bump();
        }
        le.expr = expr();
        expect(Tok::Semi, "expected ';'");
        (is_assume ? spec.assumptions : spec.guarantees).push_back(std::move(le));
        return;
      }
      default:
        throw ParseError(at, "expected item (input/output/node/assume/guarantee)");
    }
  }

  void declare_unique(const ContractSpec& spec, const std::string& name,
                      SourcePos at) {
    if (spec.var_sort(name))
      throw ParseError(at, "duplicate declaration of '" + name + "'");
  }

  Sort sort() {
    if (cur_.kind == Tok::KwIntSort) {
      bump();
      return Sort::Int;
    }
    if (cur_.kind == Tok::KwBoolSort) {
      bump();
      return Sort::Bool;
    }
    throw ParseError(cur_.pos, "unknown sort '" + cur_.text + "'");
  }

  // Precedence climbing, loosest first:
  //   ->  =>  or  and  not  cmp  +/-  *  unary-/pre  atom
  ExprPtr expr() { return arrow(); }

  ExprPtr arrow() {
    ExprPtr lhs = implies_();
    if (cur_.kind == Tok::Arrow) {
      const SourcePos at = cur_.pos;
      bump();
      return eb::binary(ExprKind::Arrow, std::move(lhs), arrow(), at);
    }
    return lhs;
  }

  ExprPtr implies_() {
    ExprPtr lhs = or_();
    if (cur_.kind == Tok::Implies) {
      const SourcePos at = cur_.pos;
      bump();
      return eb::binary(ExprKind::Implies, std::move(lhs), implies_(), at);
    }
    return lhs;
  }

  ExprPtr or_() {
    ExprPtr lhs = and_();
    while (cur_.kind == Tok::KwOr) {
      const SourcePos at = cur_.pos;
      bump();
      lhs = eb::binary(ExprKind::Or, std::move(lhs), and_(), at);
    }
    return lhs;
  }

  ExprPtr and_() {
    ExprPtr lhs = not_();
    while (cur_.kind == Tok::KwAnd) {
      const SourcePos at = cur_.pos;
      bump();
      lhs = eb::binary(ExprKind::And, std::move(lhs), not_(), at);
    }
    return lhs;
  }

  ExprPtr not_() {
    if (cur_.kind == Tok::KwNot) {
      const SourcePos at = cur_.pos;
      bump();
      return eb::unary(ExprKind::Not, not_(), at);
    }
    return comparison();
  }

  ExprPtr comparison() {
    ExprPtr lhs = additive();
    const SourcePos at = cur_.pos;
    ExprKind k;
    switch (cur_.kind) {
      case Tok::Lt: k = ExprKind::Lt; break;
      case Tok::Le: k = ExprKind::Le; break;
      case Tok::Eq: k = ExprKind::Eq; break;
      case Tok::Ge: k = ExprKind::Ge; break;
      case Tok::Gt: k = ExprKind::Gt; break;
      case Tok::Neq: {
        bump();
        return eb::unary(ExprKind::Not,
                         eb::binary(ExprKind::Eq, std::move(lhs), additive(), at),
                         at);
      }
      default:
        return lhs;
    }
    bump();
    return eb::binary(k, std::move(lhs), additive(), at);
  }

  ExprPtr additive() {
    ExprPtr lhs = multiplicative();
    while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
      const ExprKind k =
          cur_.kind == Tok::Plus ? ExprKind::Add : ExprKind::Sub;
      const SourcePos at = cur_.pos;
      bump();
      lhs = eb::binary(k, std::move(lhs), multiplicative(), at);
    }
    return lhs;
  }

  ExprPtr multiplicative() {
    ExprPtr lhs = unary_();
    while (cur_.kind == Tok::Star) {
      const SourcePos at = cur_.pos;
      bump();
      lhs = eb::binary(ExprKind::Mul, std::move(lhs), unary_(), at);
    }
    return lhs;
  }

  ExprPtr unary_() {
    if (cur_.kind == Tok::Minus) {
      const SourcePos at = cur_.pos;
      bump();
      return eb::unary(ExprKind::Negate, unary_(), at);
    }
    if (cur_.kind == Tok::KwPre) {
      const SourcePos at = cur_.pos;
      bump();
      return eb::unary(ExprKind::Pre, unary_(), at);
    }
    return atom();
  }

  ExprPtr atom() {
    const SourcePos at = cur_.pos;
    switch (cur_.kind) {
      case Tok::Int: {
        mpz_class v = cur_.ival;
        bump();
        return eb::int_lit(std::move(v), at);
      }
      case Tok::KwTrue:
        bump();
        return eb::bool_lit(true, at);
      case Tok::KwFalse:
        bump();
        return eb::bool_lit(false, at);
      case Tok::LParen: {
        bump();
        ExprPtr e = expr();
        expect(Tok::RParen, "expected ')'");
        return e;
      }
      case Tok::KwIf: {
        bump();
        ExprPtr c = expr();
        expect(Tok::KwThen, "expected 'then'");
        ExprPtr t = expr();
        expect(Tok::KwElse, "expected 'else'");
        ExprPtr e = expr();
        return eb::ite(std::move(c), std::move(t), std::move(e), at);
      }
      case Tok::Ident: {
        std::string name = cur_.text;
        bump();
        if (cur_.kind == Tok::LParen) {
          bump();
          std::vector<ExprPtr> args;
          if (cur_.kind != Tok::RParen) {
            while (true) {
              args.push_back(expr());
              if (cur_.kind == Tok::Comma) {
                bump();
                continue;
              }
              break;
            }
          }
          expect(Tok::RParen, "expected ')'");
          return eb::call(std::move(name), std::move(args), at);
        }
        return eb::var(std::move(name), at);
      }
      default:
        throw ParseError(at, "expected expression");
    }
  }

  void bump() { cur_ = lex_.next(); }

  void expect(Tok k, const std::string& msg) {
    if (cur_.kind != k) throw ParseError(cur_.pos, msg);
    bump();
  }

  std::string expect_ident(const std::string& what) {
    if (cur_.kind != Tok::Ident)
      throw ParseError(cur_.pos, "expected " + what);
    std::string s = cur_.text;
    bump();
    return s;
  }

  Lexer lex_;
  Token cur_;
};

}  // namespace

ContractSpec parse_contract(const std::string& text) {
  return Parser(text).contract();
}

ExprPtr parse_expression(const std::string& text) {
  return Parser(text).expression_only();
}

}  // namespace cforge
