#pragma once

#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "pal/error.hpp"
#include "pal/syntax/ast.hpp"
#include "pal/syntax/lexer.hpp"

namespace pal::syntax {

// The section whose items are being read. A fragment may end inside a section;
// the interpreter loop passes it back in so that subsequent lines continue it.
enum class Section { None, Sets, Actions, Fluents, Vars, Rules, Options, Query };

struct Fragment {
  ProgramAst program;
  Section trailing = Section::None;
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {
    // End-of-input location: just past the final character.
    int line = 1, column = 1;
    for (char c : text) {
      if (c == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    end_ = {line, column};
  }

  Fragment fragment(Section section) {
    Fragment out;
    while (!at_end()) {
      if (const Token& t = peek(); t.kind == TokenKind::Keyword && is_top_keyword(t.text)) {
        section = open(out.program);
        continue;
      }
      if (section == Section::None)
        fail("expected a section or sentence keyword");
      item(section, out.program);
    }
    out.trailing = section;
    return out;
  }

 private:
  static bool is_top_keyword(std::string_view w) {
    return w == "sets" || w == "actions" || w == "fluents" || w == "vars" || w == "rules" ||
           w == "options" || w == "initially" || w == "do" || w == "query";
  }

  // Consumes a top-level keyword. Sentences without items of their own
  // (initially, do) are parsed completely here.
  Section open(ProgramAst& program) {
    const Token t = next();
    if (t.text == "sets") return Section::Sets;
    if (t.text == "actions") return Section::Actions;
    if (t.text == "fluents") return Section::Fluents;
    if (t.text == "vars") return Section::Vars;
    if (t.text == "rules") return Section::Rules;
    if (t.text == "options") return Section::Options;
    if (t.text == "query") return Section::Query;
    if (t.text == "initially") {
      InitiallyAst init;
      init.loc = t.loc();
      init.assigns.push_back(assign());
      while (accept(","))
        init.assigns.push_back(assign());
      expect(";");
      program.sentences.emplace_back(std::move(init));
      return Section::None;
    }
    // do
    DoAst d;
    d.loc = t.loc();
    expect("{");
    while (true) {
      StepAst step;
      if (!check(";") && !check("}")) {
        step.push_back(assign());
        while (accept(","))
          step.push_back(assign());
      }
      if (accept(";")) {
        d.steps.push_back(std::move(step));
        if (accept("}")) break;
        continue;
      }
      expect("}");
      d.steps.push_back(std::move(step));
      break;
    }
    program.sentences.emplace_back(std::move(d));
    return Section::None;
  }

  void item(Section section, ProgramAst& program) {
    switch (section) {
      case Section::Sets: {
        SetDefAst def;
        def.loc = peek().loc();
        def.name = name(TokenKind::SymbolName, "set name");
        expect("=");
        def.value = set_expr();
        expect(";");
        program.set_defs.push_back(std::move(def));
        return;
      }
      case Section::Actions:
        program.action_decls.push_back(symbol_decl());
        return;
      case Section::Fluents:
        program.fluent_decls.push_back(symbol_decl());
        return;
      case Section::Vars: {
        VarDeclAst v;
        v.loc = peek().loc();
        v.names.push_back(name(TokenKind::VariableName, "variable name"));
        while (accept(","))
          v.names.push_back(name(TokenKind::VariableName, "variable name"));
        expect(":");
        v.sort = set_expr();
        expect(";");
        program.var_decls.push_back(std::move(v));
        return;
      }
      case Section::Rules:
        program.rule_schemas.push_back(rule());
        return;
      case Section::Options:
        program.options.push_back(option());
        return;
      case Section::Query:
        program.sentences.emplace_back(query());
        return;
      case Section::None:
        break;
    }
    fail("expected a section or sentence keyword");
  }

  SymbolDeclAst symbol_decl() {
    SymbolDeclAst d;
    d.loc = peek().loc();
    d.name = name(TokenKind::SymbolName, "action or fluent name");
    if (accept(":")) {
      if (!check("->") && !check(";")) {
        d.domain.push_back(set_expr());
        // `x` is the product operator only here.
        while (peek_is(TokenKind::SymbolName, "x")) {
          next();
          d.domain.push_back(set_expr());
        }
      }
      if (accept("->")) d.codomain = set_expr();
    }
    expect(";");
    return d;
  }

  SetExpr set_expr() {
    SetExpr lhs = set_term();
    while (check("+") || check("-") || check("*")) {
      const Token op = next();
      SetExpr e;
      e.kind = op.text == "+"   ? SetExpr::Kind::Union
               : op.text == "-" ? SetExpr::Kind::Difference
                                : SetExpr::Kind::Intersection;
      e.loc = op.loc();
      e.operands.push_back(std::move(lhs));
      e.operands.push_back(set_term());
      lhs = std::move(e);
    }
    return lhs;
  }

  SetExpr set_term() {
    SetExpr e;
    e.loc = peek().loc();
    if (accept("(")) {
      e = set_expr();
      expect(")");
      return e;
    }
    if (accept("{")) {
      e.kind = SetExpr::Kind::Enumeration;
      e.elements.push_back(set_element());
      while (accept(","))
        e.elements.push_back(set_element());
      expect("}");
      return e;
    }
    if (accept("[")) {
      e.kind = SetExpr::Kind::Interval;
      e.low = signed_integer();
      expect(",");
      e.high = signed_integer();
      expect("]");
      return e;
    }
    e.kind = SetExpr::Kind::Name;
    e.name = name(TokenKind::SymbolName, "set expression");
    return e;
  }

  SetElement set_element() {
    SetElement el;
    const Token& t = peek();
    if (t.kind == TokenKind::Integer || t.is_op("-")) {
      el.is_integer = true;
      el.number = signed_integer();
    } else if (t.kind == TokenKind::SymbolName || t.is_keyword("true") || t.is_keyword("false")) {
      el.symbol = next().text;
    } else {
      fail("expected a set element");
    }
    return el;
  }

  std::int64_t signed_integer() {
    const bool negative = accept("-");
    const Token& t = peek();
    if (t.kind != TokenKind::Integer) fail("expected an integer");
    const std::int64_t n = std::stoll(next().text);
    return negative ? -n : n;
  }

  RuleAst rule() {
    RuleAst r;
    r.loc = peek().loc();
    if (peek_is(TokenKind::Keyword, "false")) {
      next();
      r.falsum = true;
    } else {
      r.head = assign();
    }
    if (peek_is(TokenKind::Keyword, "if")) {
      next();
      r.body = condition();
    }
    expect(";");
    return r;
  }

  AssignAst assign() {
    AssignAst a;
    a.loc = peek().loc();
    if (peek_is(TokenKind::Keyword, "not")) {
      next();
      a.target = term();
      a.value = Expr::constant("false", a.loc);
      a.shorthand = true;
      return a;
    }
    a.target = term();
    if (accept(":=")) {
      a.value = value_expr();
    } else {
      a.value = Expr::constant("true", a.loc);
      a.shorthand = true;
    }
    return a;
  }

  OptionAst option() {
    OptionAst o;
    o.loc = peek().loc();
    if (peek_is(TokenKind::Keyword, "not")) {
      next();
      if (!peek_is(TokenKind::Keyword, "concurrent")) fail("expected 'concurrent'");
      next();
      o.kind = OptionAst::Kind::NotConcurrent;
    } else if (peek_is(TokenKind::Keyword, "concurrent")) {
      next();
      o.kind = OptionAst::Kind::Concurrent;
    } else if (peek_is(TokenKind::Keyword, "solutions")) {
      next();
      expect("=");
      const Token& t = peek();
      if (t.kind != TokenKind::Integer) fail("expected a positive integer");
      o.kind = OptionAst::Kind::Solutions;
      o.count = std::stoll(next().text);
      if (o.count < 1) fail_at("solutions must be a positive integer", t.loc());
    } else {
      fail("expected an option ('concurrent', 'not concurrent' or 'solutions=N')");
    }
    expect(";");
    return o;
  }

  QueryAst query() {
    QueryAst q;
    q.loc = peek().loc();
    auto situation_item = [&] {
      QueryItem item;
      if (!check(";") && !check("...") && !check("?")) {
        item.kind = QueryItem::Kind::Condition;
        item.condition = condition();
      }
      q.items.push_back(std::move(item));
    };
    situation_item();
    while (true) {
      if (accept(";")) {
        situation_item();
      } else if (check("...")) {
        next();
        expect("{");
        const Token& t = peek();
        if (t.kind != TokenKind::Integer) fail("expected a repetition count");
        QueryItem rep;
        rep.kind = QueryItem::Kind::Ellipsis;
        rep.count = std::stoll(next().text);
        if (rep.count < 1) fail_at("repetition count must be positive", t.loc());
        expect("}");
        q.items.push_back(std::move(rep));
        situation_item();
      } else {
        expect("?");
        return q;
      }
    }
  }

  Condition condition() {
    Condition c;
    c.push_back(literal());
    while (peek_is(TokenKind::Keyword, "and")) {
      next();
      c.push_back(literal());
    }
    return c;
  }

  Literal literal() {
    Literal lit;
    lit.loc = peek().loc();
    if (peek_is(TokenKind::Keyword, "not")) {
      next();
      lit.negated = true;
    }
    if (peek_is(TokenKind::Keyword, "pert")) {
      next();
      expect("(");
      lit.kind = Literal::Kind::Pert;
      lit.lhs = term();
      expect(")");
      return lit;
    }
    const SourceLoc at = peek().loc();
    lit.lhs = value_expr();
    if (auto op = relop()) {
      lit.kind = Literal::Kind::Compare;
      lit.op = *op;
      lit.rhs = value_expr();
      return lit;
    }
    if (!lit.lhs.is_term() && lit.lhs.kind != Expr::Kind::Prev)
      fail_at("expected a comparison operator", at);
    lit.kind = Literal::Kind::Boolean;
    return lit;
  }

  std::optional<RelOp> relop() {
    static constexpr std::pair<std::string_view, RelOp> ops[] = {
        {"=", RelOp::Eq}, {"<>", RelOp::Ne}, {"<", RelOp::Lt},
        {"<=", RelOp::Le}, {">", RelOp::Gt}, {">=", RelOp::Ge}};
    for (auto [text, op] : ops) {
      if (check(text)) {
        next();
        return op;
      }
    }
    return std::nullopt;
  }

  Expr value_expr() {
    Expr lhs = product();
    while (check("+") || check("-")) {
      const Token op = next();
      lhs = Expr::binary(op.text == "+" ? Expr::Kind::Add : Expr::Kind::Sub, std::move(lhs),
                         product(), op.loc());
    }
    return lhs;
  }

  Expr product() {
    Expr lhs = unary();
    while (check("*")) {
      const Token op = next();
      lhs = Expr::binary(Expr::Kind::Mul, std::move(lhs), unary(), op.loc());
    }
    return lhs;
  }

  Expr unary() {
    if (check("-")) {
      const Token op = next();
      return Expr::unary(Expr::Kind::Neg, unary(), op.loc());
    }
    return primary();
  }

  Expr primary() {
    const Token& t = peek();
    const SourceLoc loc = t.loc();
    if (t.kind == TokenKind::Integer) return Expr::integer(std::stoll(next().text), loc);
    if (t.kind == TokenKind::VariableName) return Expr::variable(next().text, loc);
    if (t.is_keyword("true") || t.is_keyword("false")) return Expr::constant(next().text, loc);
    if (t.is_keyword("prev")) {
      next();
      expect("(");
      Expr e = Expr::unary(Expr::Kind::Prev, term(), loc);
      expect(")");
      return e;
    }
    if (accept("(")) {
      Expr e = value_expr();
      expect(")");
      return e;
    }
    if (t.kind == TokenKind::SymbolName) return term();
    fail("expected an expression");
  }

  Expr term() {
    const Token& t = peek();
    if (t.kind != TokenKind::SymbolName) fail("expected an action or fluent term");
    const SourceLoc loc = t.loc();
    std::string n = next().text;
    std::vector<Expr> args;
    if (accept("(")) {
      args.push_back(value_expr());
      while (accept(","))
        args.push_back(value_expr());
      expect(")");
    }
    return Expr::term(std::move(n), std::move(args), loc);
  }

  std::string name(TokenKind kind, const char* what) {
    const Token& t = peek();
    if (t.kind != kind) fail(std::string("expected ") + what);
    return next().text;
  }

  // Token access. Running past the end raises IncompleteInput.
  bool at_end() const { return pos_ >= tokens_.size(); }
  const Token& peek() const {
    if (at_end()) throw IncompleteInput("unexpected end of input", end_);
    return tokens_[pos_];
  }
  Token next() {
    const Token t = peek();
    ++pos_;
    return t;
  }
  bool check(std::string_view text) const { return !at_end() && tokens_[pos_].is_op(text); }
  bool peek_is(TokenKind kind, std::string_view text) const {
    return !at_end() && tokens_[pos_].is(kind, text);
  }
  bool accept(std::string_view text) {
    if (!check(text)) return false;
    ++pos_;
    return true;
  }
  void expect(std::string_view text) {
    const Token& t = peek();
    if (!t.is_op(text)) fail("expected '" + std::string(text) + "'");
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    throw SyntaxError(what + ", found '" + t.text + "'", t.loc());
  }
  [[noreturn]] static void fail_at(const std::string& what, SourceLoc loc) {
    throw SyntaxError(what, loc);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  SourceLoc end_;
};

}  // namespace detail

inline ProgramAst parse_program(std::string_view text) {
  return detail::Parser(text).fragment(Section::None).program;
}

// Parses one or more complete sentences or section items, continuing the
// section `context` when the text does not open one itself. Throws
// IncompleteInput when more text is needed.
inline Fragment parse_sentence(std::string_view text, Section context = Section::None) {
  return detail::Parser(text).fragment(context);
}

}  // namespace pal::syntax
