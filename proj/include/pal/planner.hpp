#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pal/deadline.hpp"
#include "pal/engine/evaluate.hpp"
#include "pal/engine/semantics.hpp"
#include "pal/grounding/ground_program.hpp"
#include "pal/syntax/ast.hpp"

namespace pal {

struct Options {
  bool concurrent = true;
  std::optional<std::size_t> solutions_limit;  // unlimited when empty

  void apply(const syntax::OptionAst& o) {
    switch (o.kind) {
      case syntax::OptionAst::Kind::Concurrent: concurrent = true; break;
      case syntax::OptionAst::Kind::NotConcurrent: concurrent = false; break;
      case syntax::OptionAst::Kind::Solutions: solutions_limit = static_cast<std::size_t>(o.count); break;
    }
  }
};

// One condition per situation; index 0 addresses the current situation.
struct Query {
  std::vector<syntax::Condition> conditions;
  std::vector<std::pair<std::string, SortRef>> variables;  // first occurrence order

  std::size_t transitions() const { return conditions.size() - 1; }
};

// `E ...{n} F` becomes n copies of E followed by F; empty items are `true`.
inline Query expand_query(const syntax::QueryAst& q, const Signature& sig) {
  using Kind = syntax::QueryItem::Kind;
  Query out;
  for (std::size_t i = 0; i < q.items.size(); ++i) {
    const auto& item = q.items[i];
    if (item.kind == Kind::Ellipsis) {
      // The preceding situation item was already added once.
      const syntax::Condition repeated = out.conditions.back();
      for (std::int64_t k = 1; k < item.count; ++k) out.conditions.push_back(repeated);
      continue;
    }
    out.conditions.push_back(item.kind == Kind::Condition ? item.condition : syntax::Condition{});
  }
  std::vector<std::string> names;
  for (const auto& c : out.conditions) detail::collect_variables(c, names);
  for (const auto& n : names) {
    const SortRef* s = sig.variable_sort(n);
    if (!s) throw SemanticError("undeclared variable '" + n + "'", q.loc);
    out.variables.emplace_back(n, *s);
  }
  return out;
}

// Candidate action assignments for one hypothetical transition.
// Non-concurrent: exactly one (action, value) pair, in declaration, argument
// and codomain order. Concurrent: every partial function from ground actions
// to values, ordered lexicographically with "not performed" before each
// action's codomain values; the empty assignment comes first.
inline std::vector<ActionAssignment> enumerate_assignments(const Signature& sig, const Options& opts) {
  constexpr std::uint64_t kMaxAssignments = 20'000'000;
  std::vector<ActionAssignment> out;
  const auto actions = static_cast<std::uint32_t>(sig.action_count());
  if (!opts.concurrent) {
    for (std::uint32_t a = 0; a < actions; ++a)
      for (const Value& v : sig.codomain({SymbolKind::Action, a}).elements()) {
        ActionAssignment acts;
        acts.assign(a, v);
        out.push_back(std::move(acts));
      }
    return out;
  }
  std::uint64_t total = 1;
  for (std::uint32_t a = 0; a < actions; ++a) {
    total *= sig.codomain({SymbolKind::Action, a}).size() + 1;
    if (total > kMaxAssignments)
      throw SemanticError("too many concurrent action combinations; consider 'not concurrent'", {});
  }
  out.reserve(total);
  // choice[a] == 0: not performed; k > 0: the k-th codomain value.
  std::vector<std::size_t> choice(actions, 0);
  while (true) {
    ActionAssignment acts;
    for (std::uint32_t a = 0; a < actions; ++a)
      if (choice[a]) acts.assign(a, sig.codomain({SymbolKind::Action, a}).elements()[choice[a] - 1]);
    out.push_back(std::move(acts));
    std::uint32_t k = actions;
    while (k > 0) {
      --k;
      if (++choice[k] <= sig.codomain({SymbolKind::Action, k}).size()) break;
      choice[k] = 0;
      if (k == 0) return out;
    }
    if (actions == 0) return out;
  }
}

struct Solution {
  std::vector<std::pair<std::string, Value>> binding;
  std::vector<ActionAssignment> plan;
  std::vector<State> trace;  // the state after each plan step
};

// Depth-first search over hypothetical futures of `current`. Bindings of the
// query variables are enumerated outermost (first variable slowest), then
// plans in canonical assignment order. `before_current` is the situation
// preceding `current` in the narrative, if any; prev() in condition 0 reads it.
class Planner {
 public:
  Planner(const Semantics& semantics, const Signature& sig, Options opts, Deadline deadline = {})
      : semantics_(semantics), sig_(sig), opts_(opts), deadline_(deadline),
        assignments_(enumerate_assignments(sig, opts)) {}

  std::vector<Solution> solve(const State& current, const State* before_current, const Query& q) {
    std::vector<Solution> out;
    std::vector<std::string> vars;
    for (const auto& [n, s] : q.variables) vars.push_back(n);
    detail::Grounder grounder(sig_);
    bool stop = false;
    detail::for_each_binding(sig_, vars, {}, [&](const Binding& b) {
      if (stop) return;
      std::vector<std::optional<std::vector<GroundLiteral>>> conds;
      conds.reserve(q.conditions.size());
      for (const auto& c : q.conditions) conds.push_back(grounder.condition(c, b));
      if (!holds(conds[0], current, before_current)) return;
      Solution partial;
      // Deeper frames hold references into the trace; it must not reallocate.
      partial.trace.reserve(q.conditions.size());
      partial.plan.reserve(q.conditions.size());
      for (const auto& n : vars) partial.binding.emplace_back(n, b.at(n));
      search(conds, 1, current, partial, out);
      stop = limit_reached(out);
    });
    return out;
  }

 private:
  bool limit_reached(const std::vector<Solution>& out) const {
    return opts_.solutions_limit && out.size() >= *opts_.solutions_limit;
  }

  bool holds(const std::optional<std::vector<GroundLiteral>>& cond, const State& s, const State* prev) const {
    if (!cond) return false;
    EvalStatus status;
    const Truth t = holds_in_state(*cond, s, prev, status);
    if (t == Truth::Error) throw EvalError("in query condition: " + status.error, {});
    return t == Truth::True;
  }

  void search(const std::vector<std::optional<std::vector<GroundLiteral>>>& conds, std::size_t depth,
              const State& state, Solution& partial, std::vector<Solution>& out) {
    if (depth == conds.size()) {
      out.push_back(partial);
      return;
    }
    // A condition that is statically false prunes the whole subtree.
    if (!conds[depth]) return;
    for (const ActionAssignment& acts : assignments_) {
      if ((++steps_ & 0xff) == 0) deadline_.check();
      TransitionResult r = semantics_.transition(state, acts);
      auto* ok = std::get_if<Accepted>(&r);
      if (!ok) continue;
      if (!holds(conds[depth], ok->next, &state)) continue;
      partial.plan.push_back(acts);
      partial.trace.push_back(std::move(ok->next));
      search(conds, depth + 1, partial.trace.back(), partial, out);
      partial.plan.pop_back();
      partial.trace.pop_back();
      if (limit_reached(out)) return;
    }
  }

  const Semantics& semantics_;
  const Signature& sig_;
  Options opts_;
  Deadline deadline_;
  std::vector<ActionAssignment> assignments_;
  std::uint64_t steps_ = 0;
};

inline std::vector<Solution> solve(const Semantics& semantics, const Signature& sig, const State& current,
                                   const State* before_current, const Query& q, const Options& opts,
                                   Deadline deadline = {}) {
  return Planner(semantics, sig, opts, deadline).solve(current, before_current, q);
}

}  // namespace pal
