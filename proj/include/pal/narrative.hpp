#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pal/deadline.hpp"
#include "pal/engine/semantics.hpp"
#include "pal/engine/state.hpp"
#include "pal/error.hpp"
#include "pal/grounding/ground_program.hpp"
#include "pal/syntax/ast.hpp"

namespace pal {

struct FluentValue {
  std::uint32_t fluent = 0;
  Value value;

  friend bool operator==(const FluentValue&, const FluentValue&) = default;
};

struct TransitionRecord {
  std::size_t situation = 0;
  ActionAssignment actions;
  std::vector<FluentValue> effects;  // pertinent fluents with their new values

  friend bool operator==(const TransitionRecord&, const TransitionRecord&) = default;
};

inline TransitionRecord make_record(std::size_t situation, const State& s) {
  TransitionRecord r;
  r.situation = situation;
  r.actions = s.actions;
  for (std::uint32_t f : s.pertinent) r.effects.push_back({f, s.values[f]});
  return r;
}

namespace detail {

// Expands `target := value` over the variables it mentions and calls
// fn(term, value) for every instance. Values must be constants.
template <typename Fn>
void expand_assignment(const syntax::AssignAst& a, const Signature& sig, SymbolKind expected, Fn&& fn) {
  std::vector<std::string> vars;
  collect_variables(a.target, vars);
  collect_variables(a.value, vars);
  Grounder grounder(sig);
  const char* what = expected == SymbolKind::Action ? "an action" : "a fluent";
  if (a.target.kind != syntax::Expr::Kind::Name)
    throw SemanticError(std::string("expected ") + what + " term", a.loc);
  auto sym = sig.find_symbol(a.target.name);
  if (!sym || sym->first != expected)
    throw SemanticError("'" + a.target.name + "' is not " + what, a.target.loc);
  for_each_binding(sig, vars, a.loc, [&](const Binding& b) {
    auto t = grounder.term(a.target, b);
    if (!t) throw SemanticError("argument outside the declared sort of '" + a.target.name + "'", a.target.loc);
    auto v = grounder.value(a.value, b);
    if (!v || !v->is_constant())
      throw SemanticError("assigned values must be constants", a.value.loc);
    if (!sig.codomain(*t).contains(v->value))
      throw SemanticError("value " + v->value.to_string() + " outside the codomain of " + sig.term_name(*t),
                          a.value.loc);
    fn(*t, v->value);
  });
}

}  // namespace detail

// Situation 0 exactly as written: every ground fluent needs one value.
inline State initial_state(const syntax::InitiallyAst& init, const Signature& sig) {
  std::vector<std::optional<Value>> values(sig.fluent_count());
  for (const auto& a : init.assigns) {
    detail::expand_assignment(a, sig, SymbolKind::Fluent, [&](TermRef t, const Value& v) {
      auto& slot = values[t.index];
      if (slot && !(*slot == v))
        throw SemanticError("fluent " + sig.term_name(t) + " assigned both " + slot->to_string() + " and " +
                                v.to_string(),
                            a.loc);
      slot = v;
    });
  }
  State s;
  s.values.reserve(values.size());
  for (std::uint32_t f = 0; f < values.size(); ++f) {
    if (!values[f])
      throw SemanticError("fluent " + sig.term_name({SymbolKind::Fluent, f}) + " has no initial value", init.loc);
    s.values.push_back(*values[f]);
  }
  return s;
}

inline ActionAssignment action_assignment(const syntax::StepAst& step, const Signature& sig) {
  ActionAssignment acts;
  for (const auto& a : step) {
    detail::expand_assignment(a, sig, SymbolKind::Action, [&](TermRef t, const Value& v) {
      if (!acts.assign(t.index, v))
        throw SemanticError("action " + sig.term_name(t) + " given two different values", a.loc);
    });
  }
  return acts;
}

struct PerformFailure {
  std::size_t situation = 0;  // the situation that could not be built
  TransitionResult result;
};

struct PerformOutcome {
  std::vector<TransitionRecord> records;
  std::optional<PerformFailure> failure;
};

// The actual sequence of situations built by `initially` and `do`.
class Narrative {
 public:
  bool initialized() const { return !states_.empty(); }
  std::size_t last() const { return states_.size() - 1; }
  const State& current() const { return states_.back(); }
  int resumed() const { return resumed_; }

  const State& state_at(std::size_t k) const {
    if (k >= states_.size())
      throw SemanticError("situation " + std::to_string(k) + " does not exist", {});
    return states_[k];
  }

  // Starts a fresh narrative; returns true if an existing one was replaced.
  bool initialize(State initial) {
    const bool replacing = initialized();
    if (replacing) ++resumed_;
    states_.clear();
    states_.push_back(std::move(initial));
    return replacing;
  }

  // Applies the steps in order from the current situation. The first
  // non-accepted transition stops the sequence and leaves the narrative at
  // the last accepted situation.
  PerformOutcome perform(const Semantics& semantics, const std::vector<ActionAssignment>& steps,
                         const Deadline& deadline = {}) {
    PerformOutcome out;
    for (const auto& acts : steps) {
      deadline.check();
      TransitionResult r = semantics.transition(current(), acts);
      if (auto* ok = std::get_if<Accepted>(&r)) {
        states_.push_back(std::move(ok->next));
        out.records.push_back(make_record(last(), current()));
        continue;
      }
      out.failure = PerformFailure{states_.size(), std::move(r)};
      break;
    }
    return out;
  }

 private:
  std::vector<State> states_;
  int resumed_ = 0;
};

}  // namespace pal
