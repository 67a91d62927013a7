#include "ownref/frontend/parser.hpp"

#include "ownref/frontend/lexer.hpp"
#include "ownref/logic/error.hpp"

#include <set>

namespace ownref::frontend {

namespace {

using logic::CmpOp;
using logic::Formula;
using logic::Term;
using surface::Item;
using SExpr = surface::Expr;
using SExprPtr = surface::ExprPtr;

struct Backtrack {};

class Parser {
public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  surface::Program program() {
    surface::Program p;
    std::set<std::string> names;
    while (at_fundef()) {
      auto d = fundef();
      if (!names.insert(d.name).second)
        throw ParseError(d.line, d.column, "duplicate function `" + d.name + "`");
      p.defs.push_back(std::move(d));
    }
    p.entry = seq();
    if (peek().kind != Token::Kind::End) fail("unexpected `" + peek().text + "`");
    return p;
  }

  Formula formula_only() {
    auto f = formula();
    if (peek().kind != Token::Kind::End) fail("unexpected `" + peek().text + "`");
    return f;
  }

private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  bool speculative_ = false;

  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    if (speculative_) throw Backtrack{};
    throw ParseError(peek().line, peek().column, msg);
  }

  void expect(std::string_view sym) {
    if (!peek().is(sym)) fail("expected `" + std::string(sym) + "`, found `" + describe() + "`");
    next();
  }

  std::string describe() const {
    return peek().kind == Token::Kind::End ? "end of input" : peek().text;
  }

  std::string ident() {
    if (peek().kind != Token::Kind::Ident || is_keyword(peek().text))
      fail("expected identifier, found `" + describe() + "`");
    return next().text;
  }

  bool at_ident() const { return peek().kind == Token::Kind::Ident && !is_keyword(peek().text); }

  // IDENT '(' ... ')' '{'
  bool at_fundef() const {
    if (!at_ident() || !peek(1).is("(")) return false;
    std::size_t k = 2;
    int depth = 1;
    while (depth > 0) {
      const Token& t = peek(k);
      if (t.kind == Token::Kind::End) return false;
      if (t.is("(")) ++depth;
      if (t.is(")")) --depth;
      ++k;
    }
    return peek(k).is("{");
  }

  surface::FunDef fundef() {
    surface::FunDef d;
    d.line = peek().line;
    d.column = peek().column;
    d.name = ident();
    expect("(");
    if (!peek().is(")")) {
      d.params.push_back(ident());
      while (peek().is(",")) {
        next();
        d.params.push_back(ident());
      }
    }
    expect(")");
    expect("{");
    d.body = seq();
    expect("}");
    return d;
  }

  surface::Seq seq() {
    surface::Seq s;
    for (;;) {
      s.push_back(item());
      if (s.back().kind == Item::Kind::Let) break;
      if (s.back().kind == Item::Kind::If && !s.back().else_braced) break;
      if (!peek().is(";")) break;
      next();
      // Tolerate a trailing `;` before a closing brace or end of input.
      if (peek().is("}") || peek().is("else") || peek().kind == Token::Kind::End) break;
    }
    return s;
  }

  surface::Seq branch(bool& braced) {
    braced = peek().is("{");
    if (!braced) return seq();
    next();
    auto s = seq();
    expect("}");
    return s;
  }

  Item item() {
    Item it;
    it.line = peek().line;
    it.column = peek().column;
    const Token& t = peek();
    if (t.is("let")) {
      next();
      it.kind = Item::Kind::Let;
      it.x = ident();
      expect("=");
      it.value = expr();
      expect("in");
      it.body = seq();
    } else if (t.is("ifz") || t.is("if")) {
      next();
      it.kind = Item::Kind::If;
      it.value = expr();
      expect("then");
      bool braced = false;
      it.body = branch(braced);
      expect("else");
      it.else_body = branch(it.else_braced);
    } else if (t.is("alias")) {
      next();
      expect("(");
      it.x = ident();
      expect("=");
      if (peek().is("*")) {
        next();
        it.kind = Item::Kind::AliasDeref;
      } else {
        it.kind = Item::Kind::Alias;
      }
      it.y = ident();
      expect(")");
    } else if (t.is("assert")) {
      next();
      it.kind = Item::Kind::Assert;
      expect("(");
      it.cond = formula();
      expect(")");
    } else if (t.is("{")) {
      next();
      it.kind = Item::Kind::Block;
      it.body = seq();
      expect("}");
    } else if (at_ident() && peek(1).is(":=")) {
      it.kind = Item::Kind::Assign;
      it.x = ident();
      next();
      it.value = expr();
    } else {
      it.kind = Item::Kind::Expr;
      it.value = expr();
    }
    return it;
  }

  SExprPtr node(SExpr::Kind k, const Token& at) {
    auto e = std::make_shared<SExpr>();
    e->kind = k;
    e->line = at.line;
    e->column = at.column;
    return e;
  }

  SExprPtr binary(const std::string& op, SExprPtr a, SExprPtr b, const Token& at) {
    auto e = node(SExpr::Kind::Binary, at);
    e->name = op;
    e->args = {std::move(a), std::move(b)};
    return e;
  }

  SExprPtr expr() {
    auto lhs = sum();
    for (auto op : {"=", "!=", "<", "<=", ">", ">="}) {
      if (peek().is(op)) {
        Token at = next();
        return binary(op, lhs, sum(), at);
      }
    }
    return lhs;
  }

  SExprPtr sum() {
    auto e = product();
    while (peek().is("+") || peek().is("-")) {
      Token at = next();
      e = binary(at.text, e, product(), at);
    }
    return e;
  }

  SExprPtr product() {
    auto e = unary();
    while (peek().is("*")) {
      Token at = next();
      e = binary("*", e, unary(), at);
    }
    return e;
  }

  SExprPtr unary() {
    const Token at = peek();
    if (at.is("*")) {
      next();
      auto e = node(SExpr::Kind::Deref, at);
      e->args = {unary()};
      return e;
    }
    if (at.is("mkref")) {
      next();
      auto e = node(SExpr::Kind::Mkref, at);
      e->args = {unary()};
      return e;
    }
    if (at.is("-")) {
      next();
      auto inner = unary();
      if (inner->kind == SExpr::Kind::Int) {
        inner->value = -inner->value;
        return inner;
      }
      auto e = node(SExpr::Kind::Neg, at);
      e->args = {inner};
      return e;
    }
    return primary();
  }

  SExprPtr primary() {
    const Token at = peek();
    if (at.kind == Token::Kind::Int) {
      next();
      auto e = node(SExpr::Kind::Int, at);
      e->value = BigInt(at.text);
      return e;
    }
    if (at.is("_")) {
      next();
      return node(SExpr::Kind::Nondet, at);
    }
    if (at.is("(")) {
      next();
      auto e = expr();
      expect(")");
      return e;
    }
    std::string name = ident();
    if (peek().is("(")) {
      next();
      auto e = node(SExpr::Kind::Call, at);
      e->name = name;
      if (!peek().is(")")) {
        e->args.push_back(expr());
        while (peek().is(",")) {
          next();
          e->args.push_back(expr());
        }
      }
      expect(")");
      return e;
    }
    auto e = node(SExpr::Kind::Var, at);
    e->name = name;
    return e;
  }

  // Formulas

  Formula formula() {
    std::vector<Formula> parts{conjunction()};
    while (peek().is("||")) {
      next();
      parts.push_back(conjunction());
    }
    return parts.size() == 1 ? std::move(parts[0]) : Formula::disj(std::move(parts));
  }

  Formula conjunction() {
    std::vector<Formula> parts{literal()};
    while (peek().is("&&")) {
      next();
      parts.push_back(literal());
    }
    if (parts.size() == 1) return std::move(parts[0]);
    Formula f;
    f.kind = Formula::Kind::And;
    f.kids = std::move(parts);
    return f;
  }

  Formula literal() {
    if (peek().is("!")) {
      next();
      return Formula::negate(literal());
    }
    if (peek().is("true")) {
      next();
      return Formula::truth();
    }
    if (peek().is("false")) {
      next();
      return Formula::falsity();
    }
    if (peek().is("(")) {
      // Either a parenthesized formula or a comparison whose left term is parenthesized.
      std::size_t save = pos_;
      bool was = speculative_;
      speculative_ = true;
      try {
        auto f = comparison();
        speculative_ = was;
        return f;
      } catch (const Backtrack&) {
        speculative_ = was;
        pos_ = save;
      }
      next();
      auto f = formula();
      expect(")");
      return f;
    }
    return comparison();
  }

  Formula comparison() {
    auto a = term();
    static const std::pair<const char*, CmpOp> ops[] = {
        {"=", CmpOp::Eq}, {"!=", CmpOp::Ne}, {"<", CmpOp::Lt},
        {"<=", CmpOp::Le}, {">", CmpOp::Gt}, {">=", CmpOp::Ge}};
    for (auto& [sym, op] : ops) {
      if (peek().is(sym)) {
        next();
        return Formula::cmp(op, std::move(a), term());
      }
    }
    fail("expected comparison operator, found `" + describe() + "`");
  }

  Term term() {
    auto t = term_product();
    while (peek().is("+") || peek().is("-")) {
      auto k = next().is("+") ? Term::Kind::Add : Term::Kind::Sub;
      t = Term::binary(k, std::move(t), term_product());
    }
    return t;
  }

  Term term_product() {
    auto t = term_unary();
    while (peek().is("*")) {
      next();
      t = Term::binary(Term::Kind::Mul, std::move(t), term_unary());
    }
    return t;
  }

  Term term_unary() {
    if (peek().is("*")) {
      next();
      return Term::deref(term_unary());
    }
    if (peek().is("-")) {
      next();
      auto t = term_unary();
      if (t.kind == Term::Kind::Const) return Term::constant(-t.value);
      return Term::neg(std::move(t));
    }
    if (peek().kind == Token::Kind::Int) return Term::constant(BigInt(next().text));
    if (peek().is("(")) {
      next();
      auto t = term();
      expect(")");
      return t;
    }
    return Term::var(ident());
  }
};

} // namespace

surface::Program parse(std::string_view source) { return Parser(lex(source)).program(); }

logic::Formula parse_formula(std::string_view source) {
  return Parser(lex(source)).formula_only();
}

} // namespace ownref::frontend
