#include "forge/theory.hpp"

#include <cctype>
#include <sstream>

namespace forge {

namespace {

struct Token {
  enum Kind { Ident, Int, Sym, End } kind = End;
  std::string text;
  int line = 0, col = 0;
};

struct Lexer {
  const std::string& src;
  size_t pos = 0;
  int line = 1, col = 1;

  explicit Lexer(const std::string& s) : src(s) {}

  [[noreturn]] void fail(const std::string& msg, int l, int c) const {
    std::ostringstream os;
    os << "syntax error at " << l << ":" << c << ": " << msg;
    throw ForgeError("parse_error", os.str());
  }

  void advance(size_t n) {
    for (size_t i = 0; i < n && pos < src.size(); ++i, ++pos) {
      if (src[pos] == '\n') { ++line; col = 1; } else ++col;
    }
  }

  Token next() {
    while (pos < src.size()) {
      char c = src[pos];
      if (c == '#') {
        while (pos < src.size() && src[pos] != '\n') advance(1);
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
      } else {
        break;
      }
    }
    Token t;
    t.line = line;
    t.col = col;
    if (pos >= src.size()) return t;
    char c = src[pos];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos;
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_' ||
              src[pos] == '\'' || src[pos] == '*'))
        advance(1);
      t.kind = Token::Ident;
      t.text = src.substr(start, pos - start);
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos;
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos])))
        advance(1);
      t.kind = Token::Int;
      t.text = src.substr(start, pos - start);
      return t;
    }
    t.kind = Token::Sym;
    if (src.compare(pos, 2, "->") == 0 || src.compare(pos, 2, "!=") == 0) {
      t.text = src.substr(pos, 2);
      advance(2);
      return t;
    }
    if (src.compare(pos, 3, "<->") == 0) {
      t.text = "<->";
      advance(3);
      return t;
    }
    t.text = std::string(1, c);
    advance(1);
    return t;
  }
};

struct Parser {
  Lexer lex;
  Token tok;
  TheorySpec spec;

  explicit Parser(const std::string& s) : lex(s) { tok = lex.next(); }

  [[noreturn]] void fail(const std::string& msg) const { lex.fail(msg, tok.line, tok.col); }

  void bump() { tok = lex.next(); }

  bool at_ident(const char* kw) const { return tok.kind == Token::Ident && tok.text == kw; }

  static bool is_keyword(const std::string& s) {
    return s == "theory" || s == "rel" || s == "fun" || s == "const" ||
           s == "forall" || s == "exists" || s == "forbid";
  }

  void expect_sym(const char* s) {
    if (tok.kind != Token::Sym || tok.text != s) fail(std::string("expected '") + s + "'");
    bump();
  }

  std::string expect_ident() {
    if (tok.kind != Token::Ident) fail("expected identifier");
    std::string s = tok.text;
    bump();
    return s;
  }

  int expect_int() {
    if (tok.kind != Token::Int) fail("expected integer");
    int v = std::stoi(tok.text);
    bump();
    return v;
  }

  Term parse_term() {
    if (tok.kind != Token::Ident) fail("expected term");
    std::string name = tok.text;
    int fline = tok.line, fcol = tok.col;
    bump();
    if (tok.kind == Token::Sym && tok.text == "(") {
      int fi = spec.sig.func_index(name);
      if (fi < 0) lex.fail("undeclared function: " + name, fline, fcol);
      bump();
      std::vector<Term> args;
      if (!(tok.kind == Token::Sym && tok.text == ")")) {
        args.push_back(parse_term());
        while (tok.kind == Token::Sym && tok.text == ",") {
          bump();
          args.push_back(parse_term());
        }
      }
      expect_sym(")");
      if (static_cast<int>(args.size()) != spec.sig.functions[fi].arity)
        lex.fail("arity mismatch for " + name, fline, fcol);
      return Term::f(fi, std::move(args));
    }
    int fi = spec.sig.func_index(name);
    if (fi >= 0) {
      if (spec.sig.functions[fi].arity != 0)
        lex.fail("function " + name + " used without arguments", fline, fcol);
      return Term::f(fi);
    }
    return Term::v(name);
  }

  Formula parse_primary() {
    if (tok.kind == Token::Sym && tok.text == "(") {
      bump();
      Formula f = parse_expr();
      expect_sym(")");
      return f;
    }
    if (tok.kind == Token::Sym && tok.text == "!") {
      bump();
      return Formula::neg(parse_primary());
    }
    if (tok.kind != Token::Ident) fail("expected atom");
    // relation atom?
    int ri = spec.sig.rel_index(tok.text);
    if (ri >= 0) {
      int aline = tok.line, acol = tok.col;
      std::string name = tok.text;
      bump();
      expect_sym("(");
      std::vector<Term> args;
      if (!(tok.kind == Token::Sym && tok.text == ")")) {
        args.push_back(parse_term());
        while (tok.kind == Token::Sym && tok.text == ",") {
          bump();
          args.push_back(parse_term());
        }
      }
      expect_sym(")");
      if (static_cast<int>(args.size()) != spec.sig.relations[ri].arity)
        lex.fail("arity mismatch for " + name, aline, acol);
      return Formula::atom(ri, std::move(args));
    }
    Term l = parse_term();
    if (tok.kind == Token::Sym && (tok.text == "=" || tok.text == "!=")) {
      bool neg = tok.text == "!=";
      bump();
      Term r = parse_term();
      Formula f = Formula::eq(std::move(l), std::move(r));
      return neg ? Formula::neg(std::move(f)) : f;
    }
    fail("expected relation atom or equality");
  }

  Formula parse_and() {
    Formula f = parse_primary();
    while (tok.kind == Token::Sym && tok.text == "&") {
      bump();
      f = Formula::conj({std::move(f), parse_primary()});
    }
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (tok.kind == Token::Sym && tok.text == "|") {
      bump();
      f = Formula::disj({std::move(f), parse_and()});
    }
    return f;
  }

  Formula parse_implies() {
    Formula f = parse_or();
    if (tok.kind == Token::Sym && tok.text == "->") {
      bump();
      Formula rhs = parse_implies();  // right associative
      return Formula::disj({Formula::neg(std::move(f)), std::move(rhs)});
    }
    return f;
  }

  Formula parse_expr() {
    Formula f = parse_implies();
    while (tok.kind == Token::Sym && tok.text == "<->") {
      bump();
      Formula g = parse_implies();
      Formula fwd = Formula::disj({Formula::neg(f), g});
      Formula bwd = Formula::disj({Formula::neg(g), f});
      f = Formula::conj({std::move(fwd), std::move(bwd)});
    }
    return f;
  }

  void parse_forbid() {
    bump();  // forbid
    if (!at_ident("size")) fail("expected 'size' after forbid");
    bump();
    int n = expect_int();
    if (n < 1) fail("forbidden pattern needs size >= 1");
    expect_sym(":");
    FiniteStructure pat(Signature{spec.sig.relations, {}}, n);
    while (tok.kind == Token::Ident && !is_keyword(tok.text)) {
      int aline = tok.line, acol = tok.col;
      int ri = spec.sig.rel_index(tok.text);
      if (ri < 0) lex.fail("undeclared relation: " + tok.text, aline, acol);
      bump();
      expect_sym("(");
      std::vector<int> t;
      t.push_back(expect_int());
      while (tok.kind == Token::Sym && tok.text == ",") {
        bump();
        t.push_back(expect_int());
      }
      expect_sym(")");
      if (static_cast<int>(t.size()) != spec.sig.relations[ri].arity)
        lex.fail("arity mismatch in forbidden pattern", aline, acol);
      for (int x : t)
        if (x < 0 || x >= n) lex.fail("pattern label out of range", aline, acol);
      pat.tuples[ri].insert(std::move(t));
    }
    spec.forbidden.push_back(std::move(pat));
  }

  void parse_axiom() {
    SpecAxiom ax;
    if (at_ident("forall")) {
      bump();
      while (tok.kind == Token::Ident && tok.text != "exists") ax.univ_vars.push_back(expect_ident());
    }
    if (at_ident("exists")) {
      bump();
      while (tok.kind == Token::Ident) ax.exist_vars.push_back(expect_ident());
    }
    if (ax.univ_vars.empty() && ax.exist_vars.empty()) fail("expected quantifier prefix");
    expect_sym(":");
    ax.matrix = parse_expr();
    ax.id = "ax" + std::to_string(spec.axioms.size());
    spec.axioms.push_back(std::move(ax));
  }

  TheorySpec run() {
    while (tok.kind != Token::End) {
      if (at_ident("theory")) {
        bump();
        spec.name = expect_ident();
      } else if (at_ident("rel")) {
        bump();
        std::string name = expect_ident();
        expect_sym("/");
        spec.sig.relations.push_back({name, expect_int()});
      } else if (at_ident("fun")) {
        bump();
        std::string name = expect_ident();
        expect_sym("/");
        spec.sig.functions.push_back({name, expect_int()});
      } else if (at_ident("const")) {
        bump();
        spec.sig.functions.push_back({expect_ident(), 0});
      } else if (at_ident("forbid")) {
        parse_forbid();
      } else if (at_ident("forall") || at_ident("exists")) {
        parse_axiom();
      } else {
        fail("expected declaration or axiom");
      }
    }
    spec.sig.validate();
    spec.validate(true);
    return spec;
  }
};

}  // namespace

TheorySpec parse_theory(const std::string& text) { return Parser(text).run(); }

}  // namespace forge
