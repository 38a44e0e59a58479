#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pal/error.hpp"

namespace pal::syntax {

// Value expressions. `Name` covers both symbol constants (`table`) and
// applications of declared actions/fluents (`loc(B)`, `markdone`). Which one
// a bare name denotes is only known once the signature exists.
struct Expr {
  enum class Kind { Integer, Name, Variable, Prev, Add, Sub, Mul, Neg };

  Kind kind = Kind::Integer;
  std::int64_t number = 0;
  std::string name;
  bool applied = false;          // written with a parenthesised argument list
  std::vector<Expr> operands;    // arguments, prev's term, or arithmetic operands
  SourceLoc loc;

  static Expr integer(std::int64_t n, SourceLoc loc = {}) {
    Expr e;
    e.number = n;
    e.loc = loc;
    return e;
  }
  static Expr constant(std::string name, SourceLoc loc = {}) {
    Expr e;
    e.kind = Kind::Name;
    e.name = std::move(name);
    e.loc = loc;
    return e;
  }
  static Expr variable(std::string name, SourceLoc loc = {}) {
    Expr e = constant(std::move(name), loc);
    e.kind = Kind::Variable;
    return e;
  }
  static Expr term(std::string name, std::vector<Expr> args, SourceLoc loc = {}) {
    Expr e = constant(std::move(name), loc);
    e.applied = !args.empty();
    e.operands = std::move(args);
    return e;
  }
  static Expr binary(Kind kind, Expr lhs, Expr rhs, SourceLoc loc = {}) {
    Expr e;
    e.kind = kind;
    e.operands.push_back(std::move(lhs));
    e.operands.push_back(std::move(rhs));
    e.loc = loc;
    return e;
  }
  static Expr unary(Kind kind, Expr operand, SourceLoc loc = {}) {
    Expr e;
    e.kind = kind;
    e.operands.push_back(std::move(operand));
    e.loc = loc;
    return e;
  }

  bool is_term() const { return kind == Kind::Name; }

  friend bool operator==(const Expr&, const Expr&) = default;
};

enum class RelOp { Eq, Ne, Lt, Le, Gt, Ge };

inline RelOp negate(RelOp op) {
  switch (op) {
    case RelOp::Eq: return RelOp::Ne;
    case RelOp::Ne: return RelOp::Eq;
    case RelOp::Lt: return RelOp::Ge;
    case RelOp::Le: return RelOp::Gt;
    case RelOp::Gt: return RelOp::Le;
    case RelOp::Ge: return RelOp::Lt;
  }
  return op;
}

inline const char* spelling(RelOp op) {
  switch (op) {
    case RelOp::Eq: return "=";
    case RelOp::Ne: return "<>";
    case RelOp::Lt: return "<";
    case RelOp::Le: return "<=";
    case RelOp::Gt: return ">";
    case RelOp::Ge: return ">=";
  }
  return "?";
}

struct Literal {
  enum class Kind {
    Pert,     // pert(term)
    Compare,  // lhs op rhs
    Boolean,  // bare term or prev(term), meaning "= true"
  };

  Kind kind = Kind::Compare;
  bool negated = false;
  Expr lhs;
  RelOp op = RelOp::Eq;
  Expr rhs;
  SourceLoc loc;

  friend bool operator==(const Literal&, const Literal&) = default;
};

using Condition = std::vector<Literal>;

// `target := value`, or the shorthand `target` / `not target` whose value
// is the constant true / false.
struct AssignAst {
  Expr target;
  Expr value;
  bool shorthand = false;
  SourceLoc loc;

  AssignAst desugared() const {
    AssignAst a = *this;
    a.shorthand = false;
    return a;
  }

  friend bool operator==(const AssignAst&, const AssignAst&) = default;
};

struct RuleAst {
  bool falsum = false;  // constraint rule with a `false` head
  AssignAst head;       // unused when falsum
  Condition body;
  SourceLoc loc;

  friend bool operator==(const RuleAst&, const RuleAst&) = default;
};

struct SetElement {
  bool is_integer = false;
  std::int64_t number = 0;
  std::string symbol;

  friend bool operator==(const SetElement&, const SetElement&) = default;
};

struct SetExpr {
  enum class Kind { Name, Enumeration, Interval, Union, Difference, Intersection };

  Kind kind = Kind::Name;
  std::string name;
  std::vector<SetElement> elements;
  std::int64_t low = 0;
  std::int64_t high = 0;
  std::vector<SetExpr> operands;
  SourceLoc loc;

  friend bool operator==(const SetExpr&, const SetExpr&) = default;
};

struct SetDefAst {
  std::string name;
  SetExpr value;
  SourceLoc loc;

  friend bool operator==(const SetDefAst&, const SetDefAst&) = default;
};

struct SymbolDeclAst {
  std::string name;
  std::vector<SetExpr> domain;
  std::optional<SetExpr> codomain;  // boolean when absent
  SourceLoc loc;

  friend bool operator==(const SymbolDeclAst&, const SymbolDeclAst&) = default;
};

struct VarDeclAst {
  std::vector<std::string> names;
  SetExpr sort;
  SourceLoc loc;

  friend bool operator==(const VarDeclAst&, const VarDeclAst&) = default;
};

struct OptionAst {
  enum class Kind { Concurrent, NotConcurrent, Solutions };

  Kind kind = Kind::Concurrent;
  std::int64_t count = 0;
  SourceLoc loc;

  friend bool operator==(const OptionAst&, const OptionAst&) = default;
};

struct InitiallyAst {
  std::vector<AssignAst> assigns;
  SourceLoc loc;

  friend bool operator==(const InitiallyAst&, const InitiallyAst&) = default;
};

using StepAst = std::vector<AssignAst>;

struct DoAst {
  std::vector<StepAst> steps;
  SourceLoc loc;

  friend bool operator==(const DoAst&, const DoAst&) = default;
};

// Consecutive Condition/Empty items are separated by `;`. An Ellipsis item
// sits between two situation items and repeats the preceding one.
struct QueryItem {
  enum class Kind { Condition, Empty, Ellipsis };

  Kind kind = Kind::Empty;
  pal::syntax::Condition condition;
  std::int64_t count = 0;

  friend bool operator==(const QueryItem&, const QueryItem&) = default;
};

struct QueryAst {
  std::vector<QueryItem> items;
  SourceLoc loc;

  friend bool operator==(const QueryAst&, const QueryAst&) = default;
};

using SentenceAst = std::variant<InitiallyAst, DoAst, QueryAst>;

inline SourceLoc loc_of(const SentenceAst& s) {
  return std::visit([](const auto& x) { return x.loc; }, s);
}

struct ProgramAst {
  std::vector<SetDefAst> set_defs;
  std::vector<SymbolDeclAst> action_decls;
  std::vector<SymbolDeclAst> fluent_decls;
  std::vector<VarDeclAst> var_decls;
  std::vector<RuleAst> rule_schemas;
  std::vector<OptionAst> options;
  std::vector<SentenceAst> sentences;

  bool has_declarations() const {
    return !set_defs.empty() || !action_decls.empty() || !fluent_decls.empty() ||
           !var_decls.empty() || !rule_schemas.empty() || !options.empty();
  }

  // Appends everything in `other`, preserving order within each list.
  void append(ProgramAst other) {
    auto move_into = [](auto& dst, auto& src) {
      dst.insert(dst.end(), std::make_move_iterator(src.begin()),
                 std::make_move_iterator(src.end()));
    };
    move_into(set_defs, other.set_defs);
    move_into(action_decls, other.action_decls);
    move_into(fluent_decls, other.fluent_decls);
    move_into(var_decls, other.var_decls);
    move_into(rule_schemas, other.rule_schemas);
    move_into(options, other.options);
    move_into(sentences, other.sentences);
  }

  friend bool operator==(const ProgramAst&, const ProgramAst&) = default;
};

}  // namespace pal::syntax
