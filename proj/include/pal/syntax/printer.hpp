#pragma once

#include <sstream>
#include <string>

#include "pal/syntax/ast.hpp"

namespace pal::syntax {

namespace detail {

inline int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return 1;
    case Expr::Kind::Mul: return 2;
    case Expr::Kind::Neg: return 3;
    default: return 4;
  }
}

inline void print_expr(std::ostream& os, const Expr& e);

inline void print_operand(std::ostream& os, const Expr& e, int min_prec) {
  if (precedence(e) < min_prec) {
    os << '(';
    print_expr(os, e);
    os << ')';
  } else {
    print_expr(os, e);
  }
}

inline void print_expr(std::ostream& os, const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Integer:
      os << e.number;
      return;
    case Expr::Kind::Variable:
      os << e.name;
      return;
    case Expr::Kind::Name:
      os << e.name;
      if (!e.operands.empty()) {
        os << '(';
        for (std::size_t i = 0; i < e.operands.size(); ++i) {
          if (i) os << ',';
          print_expr(os, e.operands[i]);
        }
        os << ')';
      }
      return;
    case Expr::Kind::Prev:
      os << "prev(";
      print_expr(os, e.operands[0]);
      os << ')';
      return;
    case Expr::Kind::Neg:
      os << '-';
      print_operand(os, e.operands[0], 3);
      return;
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
    case Expr::Kind::Mul: {
      const int p = precedence(e);
      // Left-associative: the right operand needs parentheses at equal precedence.
      print_operand(os, e.operands[0], p);
      os << (e.kind == Expr::Kind::Add ? "+" : e.kind == Expr::Kind::Sub ? "-" : "*");
      print_operand(os, e.operands[1], p + 1);
      return;
    }
  }
}

inline void print_set(std::ostream& os, const SetExpr& s, bool nested = false) {
  switch (s.kind) {
    case SetExpr::Kind::Name:
      os << s.name;
      return;
    case SetExpr::Kind::Interval:
      os << '[' << s.low << ',' << s.high << ']';
      return;
    case SetExpr::Kind::Enumeration:
      os << '{';
      for (std::size_t i = 0; i < s.elements.size(); ++i) {
        if (i) os << ',';
        if (s.elements[i].is_integer)
          os << s.elements[i].number;
        else
          os << s.elements[i].symbol;
      }
      os << '}';
      return;
    default: {
      if (nested) os << '(';
      print_set(os, s.operands[0], false);
      os << (s.kind == SetExpr::Kind::Union ? " + " : s.kind == SetExpr::Kind::Difference ? " - " : " * ");
      print_set(os, s.operands[1], true);
      if (nested) os << ')';
      return;
    }
  }
}

inline void print_literal(std::ostream& os, const Literal& l) {
  if (l.negated) os << "not ";
  switch (l.kind) {
    case Literal::Kind::Pert:
      os << "pert(";
      print_expr(os, l.lhs);
      os << ')';
      return;
    case Literal::Kind::Boolean:
      print_expr(os, l.lhs);
      return;
    case Literal::Kind::Compare:
      print_expr(os, l.lhs);
      os << spelling(l.op);
      print_expr(os, l.rhs);
      return;
  }
}

inline void print_condition(std::ostream& os, const Condition& c) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) os << " and ";
    print_literal(os, c[i]);
  }
}

inline void print_assign(std::ostream& os, const AssignAst& a) {
  if (a.shorthand) {
    if (a.value.name == "false") os << "not ";
    print_expr(os, a.target);
    return;
  }
  print_expr(os, a.target);
  os << ":=";
  print_expr(os, a.value);
}

inline void print_decl(std::ostream& os, const SymbolDeclAst& d) {
  os << "  " << d.name;
  if (!d.domain.empty() || d.codomain) {
    os << ": ";
    for (std::size_t i = 0; i < d.domain.size(); ++i) {
      if (i) os << " x ";
      print_set(os, d.domain[i], true);
    }
    if (d.codomain) {
      if (!d.domain.empty()) os << ' ';
      os << "-> ";
      print_set(os, *d.codomain);
    }
  }
  os << ";\n";
}

}  // namespace detail

inline std::string to_source(const Expr& e) {
  std::ostringstream os;
  detail::print_expr(os, e);
  return os.str();
}

inline std::string to_source(const Condition& c) {
  std::ostringstream os;
  detail::print_condition(os, c);
  return os.str();
}

inline std::string to_source(const RuleAst& r) {
  std::ostringstream os;
  if (r.falsum)
    os << "false";
  else
    detail::print_assign(os, r.head);
  if (!r.body.empty()) {
    os << " if ";
    detail::print_condition(os, r.body);
  }
  os << ';';
  return os.str();
}

inline std::string to_source(const SentenceAst& s) {
  std::ostringstream os;
  if (const auto* init = std::get_if<InitiallyAst>(&s)) {
    os << "initially\n  ";
    for (std::size_t i = 0; i < init->assigns.size(); ++i) {
      if (i) os << ", ";
      detail::print_assign(os, init->assigns[i]);
    }
    os << ";\n";
  } else if (const auto* d = std::get_if<DoAst>(&s)) {
    os << "do {";
    for (std::size_t i = 0; i < d->steps.size(); ++i) {
      if (i) os << "; ";
      for (std::size_t j = 0; j < d->steps[i].size(); ++j) {
        if (j) os << ", ";
        detail::print_assign(os, d->steps[i][j]);
      }
    }
    // A lone empty step needs no terminator; anything else keeps its own.
    os << (d->steps.size() == 1 && d->steps[0].empty() ? "}" : ";}") << '\n';
  } else {
    const auto& q = std::get<QueryAst>(s);
    os << "query\n  ";
    bool previous_situation = false;
    for (const QueryItem& item : q.items) {
      if (item.kind == QueryItem::Kind::Ellipsis) {
        os << " ...{" << item.count << "} ";
        previous_situation = false;
        continue;
      }
      if (previous_situation) os << "; ";
      if (item.kind == QueryItem::Kind::Condition) detail::print_condition(os, item.condition);
      previous_situation = true;
    }
    os << "?\n";
  }
  return os.str();
}

// Canonical source form: declaration sections first, then sentences.
inline std::string to_source(const ProgramAst& p) {
  std::ostringstream os;
  if (!p.set_defs.empty()) {
    os << "sets\n";
    for (const auto& s : p.set_defs) {
      os << "  " << s.name << " = ";
      detail::print_set(os, s.value);
      os << ";\n";
    }
  }
  if (!p.action_decls.empty()) {
    os << "actions\n";
    for (const auto& d : p.action_decls) detail::print_decl(os, d);
  }
  if (!p.fluent_decls.empty()) {
    os << "fluents\n";
    for (const auto& d : p.fluent_decls) detail::print_decl(os, d);
  }
  if (!p.var_decls.empty()) {
    os << "vars\n";
    for (const auto& v : p.var_decls) {
      os << "  ";
      for (std::size_t i = 0; i < v.names.size(); ++i) os << (i ? ", " : "") << v.names[i];
      os << " : ";
      detail::print_set(os, v.sort);
      os << ";\n";
    }
  }
  if (!p.rule_schemas.empty()) {
    os << "rules\n";
    for (const auto& r : p.rule_schemas) os << "  " << to_source(r) << '\n';
  }
  if (!p.options.empty()) {
    os << "options\n";
    for (const auto& o : p.options) {
      switch (o.kind) {
        case OptionAst::Kind::Concurrent: os << "  concurrent;\n"; break;
        case OptionAst::Kind::NotConcurrent: os << "  not concurrent;\n"; break;
        case OptionAst::Kind::Solutions: os << "  solutions=" << o.count << ";\n"; break;
      }
    }
  }
  for (const auto& s : p.sentences) os << to_source(s);
  return os.str();
}

}  // namespace pal::syntax
