#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pal/detail/function_ref.hpp"
#include "pal/engine/state.hpp"
#include "pal/error.hpp"
#include "pal/grounding/ground_program.hpp"

namespace pal {

enum class Truth { False, True, Error };

using ValueSink = detail::FunctionRef<bool(const Value&)>;

// Records the first evaluation error met while enumerating.
struct EvalStatus {
  std::string error;
  void fail(std::string message) {
    if (error.empty()) error = std::move(message);
  }
};

// Enumerates every value `e` can take. An environment supplies
//   bool current(std::uint32_t fluent, ValueSink)  // stop flag
//   const Value* prev(std::uint32_t fluent)
//   const Value* action(std::uint32_t action)
// A fluent may have several current values while an estimate is being built;
// an expression then denotes each combination. Returns true when the sink
// asked to stop.
template <typename Env>
bool enumerate_values(const GroundExpr& e, const Env& env, ValueSink sink, EvalStatus& status) {
  switch (e.kind) {
    case GroundExpr::Kind::Constant:
      return sink(e.value);
    case GroundExpr::Kind::Fluent:
      return env.current(e.index, sink);
    case GroundExpr::Kind::PrevFluent: {
      const Value* v = env.prev(e.index);
      return v ? sink(*v) : false;
    }
    case GroundExpr::Kind::Action: {
      const Value* v = env.action(e.index);
      return v ? sink(*v) : false;
    }
    case GroundExpr::Kind::Neg:
      return enumerate_values(e.operands[0], env, [&](const Value& a) {
        if (!a.is_integer()) {
          status.fail("arithmetic on symbol '" + a.to_string() + "'");
          return false;
        }
        return sink(Value::integer(-a.as_integer()));
      }, status);
    case GroundExpr::Kind::Add:
    case GroundExpr::Kind::Sub:
    case GroundExpr::Kind::Mul:
      return enumerate_values(e.operands[0], env, [&](const Value& a) {
        return enumerate_values(e.operands[1], env, [&](const Value& b) {
          for (const Value* v : {&a, &b}) {
            if (!v->is_integer()) {
              status.fail("arithmetic on symbol '" + v->to_string() + "'");
              return false;
            }
          }
          std::int64_t r = 0;
          const bool overflow =
              e.kind == GroundExpr::Kind::Add   ? __builtin_add_overflow(a.as_integer(), b.as_integer(), &r)
              : e.kind == GroundExpr::Kind::Sub ? __builtin_sub_overflow(a.as_integer(), b.as_integer(), &r)
                                                : __builtin_mul_overflow(a.as_integer(), b.as_integer(), &r);
          if (overflow) {
            status.fail("integer overflow");
            return false;
          }
          return sink(Value::integer(r));
        }, status);
      }, status);
  }
  return false;
}

// Relation between two defined values; nullopt for an ordering comparison
// involving a symbol.
inline std::optional<bool> relate(RelOp op, const Value& a, const Value& b) {
  if (op == RelOp::Eq) return a == b;
  if (op == RelOp::Ne) return !(a == b);
  if (!a.is_integer() || !b.is_integer()) return std::nullopt;
  const auto x = a.as_integer(), y = b.as_integer();
  switch (op) {
    case RelOp::Lt: return x < y;
    case RelOp::Le: return x <= y;
    case RelOp::Gt: return x > y;
    default: return x >= y;
  }
}

// True when some combination of the operands' values satisfies the relation.
// An undefined operand makes the comparison false.
template <typename Env>
Truth compare_values(const GroundLiteral& lit, const Env& env, EvalStatus& status) {
  bool found = false;
  EvalStatus local;
  enumerate_values(lit.lhs, env, [&](const Value& a) {
    return enumerate_values(lit.rhs, env, [&](const Value& b) {
      auto r = relate(lit.op, a, b);
      if (!r) {
        local.fail("ordering comparison on symbol");
        return false;
      }
      found = *r;
      return found;
    }, local);
  }, local);
  if (found) return Truth::True;
  if (!local.error.empty()) {
    status.fail(local.error);
    return Truth::Error;
  }
  return Truth::False;
}

// Single-valued environment: a partial current valuation over a previous
// state and an action assignment.
struct PartialValuationEnv {
  const std::vector<std::optional<Value>>& current_values;
  const State* previous;
  const ActionAssignment& acts;

  bool current(std::uint32_t f, ValueSink sink) const {
    return f < current_values.size() && current_values[f] ? sink(*current_values[f]) : false;
  }
  const Value* prev(std::uint32_t f) const {
    return previous && f < previous->values.size() ? &previous->values[f] : nullptr;
  }
  const Value* action(std::uint32_t a) const { return acts.find(a); }
};

// Value of a ground expression, or nullopt when some operand is undefined
// (an unestablished fluent, an unperformed action). Throws EvalError on
// arithmetic over symbols.
inline std::optional<Value> eval_value_expr(const GroundExpr& expr,
                                            const std::vector<std::optional<Value>>& current,
                                            const State& prev, const ActionAssignment& acts) {
  PartialValuationEnv env{current, &prev, acts};
  EvalStatus status;
  std::optional<Value> out;
  enumerate_values(expr, env, [&](const Value& v) {
    out = v;
    return true;
  }, status);
  if (!status.error.empty()) throw EvalError(status.error, {});
  return out;
}

// Environment over a complete state, used for query conditions. `previous`
// may be null (situation 0 has no predecessor).
struct StateEnv {
  const State& state;
  const State* previous;

  bool current(std::uint32_t f, ValueSink sink) const { return sink(state.values[f]); }
  const Value* prev(std::uint32_t f) const { return previous ? &previous->values[f] : nullptr; }
  const Value* action(std::uint32_t a) const { return state.actions.find(a); }
};

// Evaluates a ground condition on a state. pert(f) tests the state's
// pertinence record; pert(a) tests whether a was performed to reach it.
inline Truth holds_in_state(const std::vector<GroundLiteral>& body, const State& state,
                            const State* previous, EvalStatus& status) {
  StateEnv env{state, previous};
  for (const GroundLiteral& lit : body) {
    bool ok = false;
    switch (lit.kind) {
      case GroundLiteral::Kind::Pert:
      case GroundLiteral::Kind::NotPert: {
        const bool pert = lit.term.kind == SymbolKind::Action ? state.actions.find(lit.term.index) != nullptr
                                                              : state.is_pertinent(lit.term.index);
        ok = pert == (lit.kind == GroundLiteral::Kind::Pert);
        break;
      }
      case GroundLiteral::Kind::Compare: {
        const Truth t = compare_values(lit, env, status);
        if (t == Truth::Error) return Truth::Error;
        ok = t == Truth::True;
        break;
      }
    }
    if (!ok) return Truth::False;
  }
  return Truth::True;
}

}  // namespace pal
