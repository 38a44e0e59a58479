#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pal/error.hpp"
#include "pal/grounding/signature.hpp"
#include "pal/syntax/ast.hpp"
#include "pal/syntax/printer.hpp"

namespace pal {

using syntax::RelOp;

// Value expression with every variable replaced and every argument evaluated.
struct GroundExpr {
  enum class Kind { Constant, Fluent, PrevFluent, Action, Add, Sub, Mul, Neg };

  Kind kind = Kind::Constant;
  Value value;               // Constant
  std::uint32_t index = 0;   // Fluent, PrevFluent, Action
  std::vector<GroundExpr> operands;

  bool is_constant() const { return kind == Kind::Constant; }

  static GroundExpr constant(Value v) {
    GroundExpr e;
    e.value = v;
    return e;
  }
};

struct GroundLiteral {
  enum class Kind { Pert, NotPert, Compare };

  Kind kind = Kind::Compare;
  TermRef term;  // Pert, NotPert
  RelOp op = RelOp::Eq;
  GroundExpr lhs, rhs;  // Compare
};

struct GroundRule {
  bool falsum = false;
  std::uint32_t target = 0;  // fluent index
  GroundExpr value;
  std::vector<GroundLiteral> body;
  std::size_t schema = 0;  // index of the originating rule schema
  SourceLoc loc;
};

struct GroundProgram {
  std::shared_ptr<const Signature> signature;
  std::vector<GroundRule> rules;
};

using Binding = std::map<std::string, Value, std::less<>>;

namespace detail {

[[noreturn]] inline void type_mismatch(const Value& v, SourceLoc loc) {
  throw SemanticError("type mismatch: arithmetic on symbol '" + v.to_string() + "'", loc);
}

inline Value fold_arith(GroundExpr::Kind kind, const Value& a, const Value& b, SourceLoc loc) {
  if (!a.is_integer()) type_mismatch(a, loc);
  if (!b.is_integer()) type_mismatch(b, loc);
  std::int64_t r = 0;
  bool overflow = false;
  switch (kind) {
    case GroundExpr::Kind::Add: overflow = __builtin_add_overflow(a.as_integer(), b.as_integer(), &r); break;
    case GroundExpr::Kind::Sub: overflow = __builtin_sub_overflow(a.as_integer(), b.as_integer(), &r); break;
    default: overflow = __builtin_mul_overflow(a.as_integer(), b.as_integer(), &r); break;
  }
  if (overflow) throw SemanticError("integer overflow", loc);
  return Value::integer(r);
}

// Comparison of two constants; ordering is only defined on integers.
inline bool compare_constants(RelOp op, const Value& a, const Value& b, SourceLoc loc) {
  if (op == RelOp::Eq) return a == b;
  if (op == RelOp::Ne) return !(a == b);
  if (!a.is_integer() || !b.is_integer())
    throw SemanticError("type mismatch: ordering comparison on a symbol", loc);
  const auto x = a.as_integer(), y = b.as_integer();
  switch (op) {
    case RelOp::Lt: return x < y;
    case RelOp::Le: return x <= y;
    case RelOp::Gt: return x > y;
    default: return x >= y;
  }
}

class Grounder {
 public:
  explicit Grounder(const Signature& sig) : sig_(sig) {}

  // nullopt: some term argument lies outside its sort, so the enclosing
  // instance does not exist.
  std::optional<GroundExpr> value(const syntax::Expr& e, const Binding& b) const {
    using K = syntax::Expr::Kind;
    switch (e.kind) {
      case K::Integer:
        return GroundExpr::constant(Value::integer(e.number));
      case K::Variable:
        return GroundExpr::constant(variable(e, b));
      case K::Name: {
        auto sym = sig_.find_symbol(e.name);
        if (!sym) {
          if (!e.operands.empty())
            throw SemanticError("undeclared action or fluent '" + e.name + "'", e.loc);
          return GroundExpr::constant(Value::symbol(e.name));
        }
        auto t = term(e, b);
        if (!t) return std::nullopt;
        GroundExpr g;
        g.kind = t->kind == SymbolKind::Action ? GroundExpr::Kind::Action : GroundExpr::Kind::Fluent;
        g.index = t->index;
        return g;
      }
      case K::Prev: {
        const syntax::Expr& inner = e.operands[0];
        auto sym = sig_.find_symbol(inner.name);
        if (!sym) throw SemanticError("prev() applied to undeclared '" + inner.name + "'", e.loc);
        if (sym->first == SymbolKind::Action)
          throw SemanticError("prev() applied to action '" + inner.name + "'", e.loc);
        auto t = term(inner, b);
        if (!t) return std::nullopt;
        GroundExpr g;
        g.kind = GroundExpr::Kind::PrevFluent;
        g.index = t->index;
        return g;
      }
      case K::Neg: {
        auto x = value(e.operands[0], b);
        if (!x) return std::nullopt;
        if (x->is_constant()) return GroundExpr::constant(fold_arith(GroundExpr::Kind::Sub, Value::integer(0), x->value, e.loc));
        GroundExpr g;
        g.kind = GroundExpr::Kind::Neg;
        g.operands.push_back(std::move(*x));
        return g;
      }
      case K::Add:
      case K::Sub:
      case K::Mul: {
        auto x = value(e.operands[0], b);
        if (!x) return std::nullopt;
        auto y = value(e.operands[1], b);
        if (!y) return std::nullopt;
        const auto kind = e.kind == K::Add   ? GroundExpr::Kind::Add
                          : e.kind == K::Sub ? GroundExpr::Kind::Sub
                                             : GroundExpr::Kind::Mul;
        if (x->is_constant() && y->is_constant())
          return GroundExpr::constant(fold_arith(kind, x->value, y->value, e.loc));
        for (const GroundExpr* c : {&*x, &*y})
          if (c->is_constant() && !c->value.is_integer()) type_mismatch(c->value, e.loc);
        GroundExpr g;
        g.kind = kind;
        g.operands.push_back(std::move(*x));
        g.operands.push_back(std::move(*y));
        return g;
      }
    }
    return std::nullopt;
  }

  // Resolves a (possibly applied) name to a ground action or fluent term.
  std::optional<TermRef> term(const syntax::Expr& e, const Binding& b) const {
    if (e.kind != syntax::Expr::Kind::Name)
      throw SemanticError("expected an action or fluent term", e.loc);
    auto sym = sig_.find_symbol(e.name);
    if (!sym) throw SemanticError("undeclared action or fluent '" + e.name + "'", e.loc);
    const SymbolDecl& decl = sig_.decls(sym->first)[sym->second];
    if (decl.arity() != e.operands.size())
      throw SemanticError("'" + e.name + "' expects " + std::to_string(decl.arity()) + " argument(s)", e.loc);
    std::vector<Value> args;
    args.reserve(e.operands.size());
    for (const auto& a : e.operands) {
      auto v = value(a, b);
      if (!v) return std::nullopt;
      if (!v->is_constant())
        throw SemanticError("arguments must not refer to actions or fluents", a.loc);
      args.push_back(v->value);
    }
    auto index = sig_.ground_index(decl, args);
    if (!index) return std::nullopt;
    return TermRef{sym->first, *index};
  }

  // Ground literals of a conjunction. Literals between constants are decided
  // here: true ones vanish, a false one makes the whole conjunction nullopt,
  // as does an out-of-sort term.
  std::optional<std::vector<GroundLiteral>> condition(const syntax::Condition& c, const Binding& b) const {
    std::vector<GroundLiteral> out;
    for (const syntax::Literal& lit : c) {
      using LK = syntax::Literal::Kind;
      if (lit.kind == LK::Pert) {
        auto t = term(lit.lhs, b);
        if (!t) return std::nullopt;
        GroundLiteral g;
        g.kind = lit.negated ? GroundLiteral::Kind::NotPert : GroundLiteral::Kind::Pert;
        g.term = *t;
        out.push_back(std::move(g));
        continue;
      }
      GroundLiteral g;
      g.kind = GroundLiteral::Kind::Compare;
      if (lit.kind == LK::Boolean) {
        if (lit.lhs.kind == syntax::Expr::Kind::Name && lit.lhs.name != "true" &&
            lit.lhs.name != "false" && !sig_.find_symbol(lit.lhs.name))
          throw SemanticError("undeclared fluent '" + lit.lhs.name + "' used as a condition", lit.loc);
        auto lhs = value(lit.lhs, b);
        if (!lhs) return std::nullopt;
        if (!lhs->is_constant()) require_boolean(*lhs, lit.loc);
        g.lhs = std::move(*lhs);
        g.op = RelOp::Eq;
        g.rhs = GroundExpr::constant(Value::boolean(!lit.negated));
      } else {
        auto lhs = value(lit.lhs, b);
        if (!lhs) return std::nullopt;
        auto rhs = value(lit.rhs, b);
        if (!rhs) return std::nullopt;
        g.lhs = std::move(*lhs);
        g.rhs = std::move(*rhs);
        g.op = lit.negated ? syntax::negate(lit.op) : lit.op;
      }
      if (g.lhs.is_constant() && g.rhs.is_constant()) {
        if (!compare_constants(g.op, g.lhs.value, g.rhs.value, lit.loc)) return std::nullopt;
        continue;
      }
      out.push_back(std::move(g));
    }
    return out;
  }

  Value variable(const syntax::Expr& e, const Binding& b) const {
    auto it = b.find(e.name);
    if (it == b.end()) throw SemanticError("undeclared variable '" + e.name + "'", e.loc);
    return it->second;
  }

 private:
  void require_boolean(const GroundExpr& g, SourceLoc loc) const {
    const Sort* codomain = nullptr;
    if (g.kind == GroundExpr::Kind::Action) codomain = &sig_.codomain({SymbolKind::Action, g.index});
    if (g.kind == GroundExpr::Kind::Fluent || g.kind == GroundExpr::Kind::PrevFluent)
      codomain = &sig_.codomain({SymbolKind::Fluent, g.index});
    if (codomain && !codomain->is_boolean())
      throw SemanticError("non-boolean term used as a condition", loc);
  }

  const Signature& sig_;
};

inline void collect_variables(const syntax::Expr& e, std::vector<std::string>& out) {
  if (e.kind == syntax::Expr::Kind::Variable) {
    if (std::find(out.begin(), out.end(), e.name) == out.end()) out.push_back(e.name);
    return;
  }
  for (const auto& o : e.operands) collect_variables(o, out);
}

inline void collect_variables(const syntax::Condition& c, std::vector<std::string>& out) {
  for (const auto& lit : c) {
    collect_variables(lit.lhs, out);
    if (lit.kind == syntax::Literal::Kind::Compare) collect_variables(lit.rhs, out);
  }
}

// Calls `fn` for every assignment of `vars` to elements of their sorts, the
// first variable varying slowest.
template <typename Fn>
void for_each_binding(const Signature& sig, const std::vector<std::string>& vars, SourceLoc loc, Fn&& fn) {
  std::vector<const Sort*> sorts;
  for (const auto& v : vars) {
    const SortRef* s = sig.variable_sort(v);
    if (!s) throw SemanticError("undeclared variable '" + v + "'", loc);
    if ((*s)->empty()) return;
    sorts.push_back(s->get());
  }
  std::vector<std::size_t> pos(vars.size(), 0);
  Binding b;
  while (true) {
    for (std::size_t i = 0; i < vars.size(); ++i) b[vars[i]] = sorts[i]->elements()[pos[i]];
    fn(static_cast<const Binding&>(b));
    std::size_t k = vars.size();
    bool done = true;
    while (k > 0) {
      --k;
      if (++pos[k] < sorts[k]->size()) {
        done = false;
        break;
      }
      pos[k] = 0;
    }
    if (done) return;
  }
}

}  // namespace detail

// Instantiates every schema over its variables (declaration order, first
// variable slowest). Instances whose terms leave their sorts, or whose
// constant literals are false, are dropped.
inline std::vector<GroundRule> ground_rules(const std::vector<syntax::RuleAst>& schemas, const Signature& sig) {
  std::vector<GroundRule> out;
  detail::Grounder grounder(sig);
  for (std::size_t s = 0; s < schemas.size(); ++s) {
    const syntax::RuleAst& schema = schemas[s];
    std::vector<std::string> used;
    if (!schema.falsum) {
      detail::collect_variables(schema.head.target, used);
      detail::collect_variables(schema.head.value, used);
    }
    detail::collect_variables(schema.body, used);
    for (const auto& v : used)
      if (!sig.variable_sort(v)) throw SemanticError("undeclared variable '" + v + "'", schema.loc);
    std::vector<std::string> vars;
    for (const auto& v : sig.variables())
      if (std::find(used.begin(), used.end(), v) != used.end()) vars.push_back(v);

    if (!schema.falsum) {
      const auto& target = schema.head.target;
      auto sym = sig.find_symbol(target.name);
      if (!sym) throw SemanticError("rule head '" + target.name + "' is not a declared fluent", target.loc);
      if (sym->first != SymbolKind::Fluent)
        throw SemanticError("rule head '" + target.name + "' is an action; only fluents can be caused", target.loc);
    }

    detail::for_each_binding(sig, vars, schema.loc, [&](const Binding& b) {
      GroundRule rule;
      rule.falsum = schema.falsum;
      rule.schema = s;
      rule.loc = schema.loc;
      if (!schema.falsum) {
        auto t = grounder.term(schema.head.target, b);
        if (!t) return;
        auto v = grounder.value(schema.head.value, b);
        if (!v) return;
        rule.target = t->index;
        rule.value = std::move(*v);
      }
      auto body = grounder.condition(schema.body, b);
      if (!body) return;
      rule.body = std::move(*body);
      out.push_back(std::move(rule));
    });
  }
  return out;
}

inline GroundProgram ground_program(const syntax::ProgramAst& ast) {
  GroundProgram p;
  auto sig = std::make_shared<Signature>(build_signature(ast));
  p.rules = ground_rules(ast.rule_schemas, *sig);
  p.signature = std::move(sig);
  return p;
}

// Text rendering, used by diagnostics and the ground-program dump.
inline std::string to_string(const GroundExpr& e, const Signature& sig) {
  switch (e.kind) {
    case GroundExpr::Kind::Constant: return e.value.to_string();
    case GroundExpr::Kind::Fluent: return sig.term_name({SymbolKind::Fluent, e.index});
    case GroundExpr::Kind::PrevFluent: return "prev(" + sig.term_name({SymbolKind::Fluent, e.index}) + ")";
    case GroundExpr::Kind::Action: return sig.term_name({SymbolKind::Action, e.index});
    case GroundExpr::Kind::Neg: return "-(" + to_string(e.operands[0], sig) + ")";
    default: {
      const char* op = e.kind == GroundExpr::Kind::Add ? "+" : e.kind == GroundExpr::Kind::Sub ? "-" : "*";
      return "(" + to_string(e.operands[0], sig) + op + to_string(e.operands[1], sig) + ")";
    }
  }
}

inline std::string to_string(const GroundLiteral& l, const Signature& sig) {
  switch (l.kind) {
    case GroundLiteral::Kind::Pert: return "pert(" + sig.term_name(l.term) + ")";
    case GroundLiteral::Kind::NotPert: return "not pert(" + sig.term_name(l.term) + ")";
    case GroundLiteral::Kind::Compare:
      return to_string(l.lhs, sig) + syntax::spelling(l.op) + to_string(l.rhs, sig);
  }
  return {};
}

// `holds(f(args),v) :- lit, ... .` or `false :- ... .`
inline std::string to_string(const GroundRule& r, const Signature& sig) {
  std::string out = r.falsum ? "false"
                             : "holds(" + sig.term_name({SymbolKind::Fluent, r.target}) + "," +
                                   to_string(r.value, sig) + ")";
  for (std::size_t i = 0; i < r.body.size(); ++i) {
    out += i == 0 ? " :- " : ", ";
    out += to_string(r.body[i], sig);
  }
  return out + ".";
}

}  // namespace pal
