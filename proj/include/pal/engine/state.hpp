#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "pal/grounding/signature.hpp"
#include "pal/value.hpp"

namespace pal {

struct ActionValue {
  std::uint32_t action = 0;
  Value value;

  friend bool operator==(const ActionValue&, const ActionValue&) = default;
};

// Performed actions of one transition, sorted by ground action index.
// An action absent from the assignment is not performed.
class ActionAssignment {
 public:
  ActionAssignment() = default;

  // Returns false if the action already has a different value.
  bool assign(std::uint32_t action, const Value& v) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), action,
                               [](const ActionValue& e, std::uint32_t a) { return e.action < a; });
    if (it != entries_.end() && it->action == action) return it->value == v;
    entries_.insert(it, {action, v});
    return true;
  }

  const Value* find(std::uint32_t action) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), action,
                               [](const ActionValue& e, std::uint32_t a) { return e.action < a; });
    return it != entries_.end() && it->action == action ? &it->value : nullptr;
  }

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(const ActionAssignment&, const ActionAssignment&) = default;

 private:
  std::vector<ActionValue> entries_;
};

// One situation: total fluent valuation, the fluents made pertinent by the
// transition that produced it, and that transition's actions.
struct State {
  std::vector<Value> values;
  std::vector<std::uint32_t> pertinent;  // sorted fluent indices
  ActionAssignment actions;

  bool is_pertinent(std::uint32_t fluent) const {
    return std::binary_search(pertinent.begin(), pertinent.end(), fluent);
  }

  friend bool operator==(const State&, const State&) = default;
};

struct Accepted {
  State next;
};
struct RejectedConstraint {
  std::size_t rule = 0;
};
struct Inconsistent {
  std::uint32_t fluent = 0;
  Value first, second;
};
struct Undefined {
  std::vector<std::uint32_t> fluents;
};
struct EvalFailure {
  std::size_t rule = 0;
  std::string message;
};

using TransitionResult = std::variant<Accepted, RejectedConstraint, Inconsistent, Undefined, EvalFailure>;

inline bool accepted(const TransitionResult& r) { return std::holds_alternative<Accepted>(r); }

// Checks the State invariants against a signature; returns an empty string
// when the state is well formed.
inline std::string validate_state(const Signature& sig, const State& s) {
  if (s.values.size() != sig.fluent_count()) return "valuation is not total";
  for (std::uint32_t f = 0; f < s.values.size(); ++f)
    if (!sig.codomain({SymbolKind::Fluent, f}).contains(s.values[f]))
      return "value of " + sig.term_name({SymbolKind::Fluent, f}) + " outside its codomain";
  for (std::size_t i = 0; i < s.pertinent.size(); ++i) {
    if (s.pertinent[i] >= s.values.size()) return "pertinent fluent out of range";
    if (i && s.pertinent[i - 1] >= s.pertinent[i]) return "pertinence record not strictly sorted";
  }
  for (const auto& [a, v] : s.actions) {
    if (a >= sig.action_count()) return "action out of range";
    if (!sig.codomain({SymbolKind::Action, a}).contains(v))
      return "value of " + sig.term_name({SymbolKind::Action, a}) + " outside its codomain";
  }
  return {};
}

}  // namespace pal
