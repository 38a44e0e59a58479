#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "pal/engine/evaluate.hpp"
#include "pal/engine/state.hpp"
#include "pal/grounding/ground_program.hpp"

namespace pal {

// Transition function under well-founded semantics. Every ground rule reads
// "if body then caused(target, value) and pertinent(target)"; inertia is the
// implicit rule "holds(f, prev(f)) if not pertinent(f)"; default negation
// occurs only on pertinence atoms. The model is computed by alternating
// between a lower and an upper estimate of the pertinent fluents: each
// estimate is the positive closure of the program with every `not pert(g)`
// (inertia included) read against the other estimate.
class WellFoundedEngine {
 public:
  explicit WellFoundedEngine(std::shared_ptr<const GroundProgram> program)
      : program_(std::move(program)), sig_(*program_->signature) {
    const auto& rules = program_->rules;
    info_.resize(rules.size());
    by_action_.resize(sig_.action_count());
    dependents_.resize(sig_.fluent_count());
    for (std::uint32_t r = 0; r < rules.size(); ++r) index_rule(r, rules[r]);
  }

  const GroundProgram& program() const { return *program_; }

  TransitionResult transition(const State& prev, const ActionAssignment& acts) const {
    Transition t(*this, prev, acts);
    return t.run();
  }

 private:
  struct RuleInfo {
    std::vector<std::uint32_t> static_literals;   // decided by prev and actions alone
    std::vector<std::uint32_t> dynamic_literals;  // read the situation being built
  };

  static bool reads_current(const GroundExpr& e) {
    if (e.kind == GroundExpr::Kind::Fluent) return true;
    for (const auto& o : e.operands)
      if (reads_current(o)) return true;
    return false;
  }

  static const GroundExpr* first_action(const GroundExpr& e) {
    if (e.kind == GroundExpr::Kind::Action) return &e;
    for (const auto& o : e.operands)
      if (const GroundExpr* a = first_action(o)) return a;
    return nullptr;
  }

  void collect_fluents(const GroundExpr& e, std::vector<std::uint32_t>& out) const {
    if (e.kind == GroundExpr::Kind::Fluent) out.push_back(e.index);
    for (const auto& o : e.operands) collect_fluents(o, out);
  }

  void index_rule(std::uint32_t r, const GroundRule& rule) {
    RuleInfo& info = info_[r];
    std::vector<std::uint32_t> reads;
    std::optional<std::uint32_t> trigger;
    for (std::uint32_t i = 0; i < rule.body.size(); ++i) {
      const GroundLiteral& lit = rule.body[i];
      bool is_static = false;
      if (lit.kind == GroundLiteral::Kind::Compare) {
        is_static = !reads_current(lit.lhs) && !reads_current(lit.rhs);
        collect_fluents(lit.lhs, reads);
        collect_fluents(lit.rhs, reads);
        if (is_static && !trigger) {
          const GroundExpr* a = first_action(lit.lhs);
          if (!a) a = first_action(lit.rhs);
          if (a) trigger = a->index;
        }
      } else if (lit.term.kind == SymbolKind::Action) {
        is_static = true;
        if (lit.kind == GroundLiteral::Kind::Pert && !trigger) trigger = lit.term.index;
      } else if (lit.kind == GroundLiteral::Kind::Pert) {
        reads.push_back(lit.term.index);
      }
      (is_static ? info.static_literals : info.dynamic_literals).push_back(i);
    }
    if (!rule.falsum) {
      collect_fluents(rule.value, reads);
      if (!trigger && !reads_current(rule.value))
        if (const GroundExpr* a = first_action(rule.value)) trigger = a->index;
    }
    // A rule needing an action can only fire in transitions performing it.
    if (trigger)
      by_action_[*trigger].push_back(r);
    else
      unconditional_.push_back(r);
    std::sort(reads.begin(), reads.end());
    reads.erase(std::unique(reads.begin(), reads.end()), reads.end());
    if (!rule.falsum)
      for (std::uint32_t f : reads) dependents_[f].push_back(r);
  }

  static constexpr std::size_t kNoRule = std::numeric_limits<std::size_t>::max();

  // Caused values and pertinence of one estimate.
  struct Closure {
    std::vector<char> pert;
    std::vector<Value> first;
    std::vector<std::uint8_t> count;
    std::vector<std::pair<std::uint32_t, Value>> extra;  // values beyond the first
    std::vector<std::uint32_t> touched;
    std::size_t error_rule = kNoRule;
    std::string error;

    explicit Closure(std::size_t fluents) : pert(fluents, 0), first(fluents), count(fluents, 0) {}

    void reset() {
      for (std::uint32_t f : touched) {
        pert[f] = 0;
        count[f] = 0;
      }
      touched.clear();
      extra.clear();
      error_rule = kNoRule;
      error.clear();
    }

    bool has_value(std::uint32_t f, const Value& v) const {
      if (count[f] == 0) return false;
      if (first[f] == v) return true;
      if (count[f] > 1)
        for (const auto& [g, w] : extra)
          if (g == f && w == v) return true;
      return false;
    }

    void record_error(std::size_t rule, std::string message) {
      if (rule < error_rule) {
        error_rule = rule;
        error = std::move(message);
      }
    }
  };

  struct ClosureEnv {
    const Closure& closure;
    const std::vector<char>& assumed;  // pertinence estimate read by `not pert`
    const State& previous;
    const std::vector<const Value*>& acts;

    bool current(std::uint32_t f, ValueSink sink) const {
      if (closure.count[f] > 0) {
        if (sink(closure.first[f])) return true;
        if (closure.count[f] > 1)
          for (const auto& [g, w] : closure.extra)
            if (g == f && sink(w)) return true;
      }
      return !assumed[f] && sink(previous.values[f]);
    }
    const Value* prev(std::uint32_t f) const { return &previous.values[f]; }
    const Value* action(std::uint32_t a) const { return acts[a]; }
  };

  class Transition {
   public:
    Transition(const WellFoundedEngine& engine, const State& prev, const ActionAssignment& acts)
        : e_(engine), prev_(prev), acts_(engine.sig_.action_count(), nullptr),
          active_(engine.program_->rules.size(), 0), queued_(engine.program_->rules.size(), 0) {
      for (const auto& [a, v] : acts) acts_[a] = &v;
      select_candidates();
    }

    TransitionResult run() {
      const std::size_t fluents = e_.sig_.fluent_count();
      Closure lower(fluents), upper(fluents);
      std::vector<char> everything(fluents, 1);
      close(lower, everything);
      std::vector<char> last_lower = lower.pert;
      while (true) {
        close(upper, lower.pert);
        close(lower, upper.pert);
        if (lower.pert == last_lower) break;
        last_lower = lower.pert;
      }

      Undefined undefined;
      for (std::uint32_t f = 0; f < fluents; ++f)
        if (upper.pert[f] && !lower.pert[f]) undefined.fluents.push_back(f);
      if (!undefined.fluents.empty()) return undefined;

      // Evaluation errors and constraints, read in the final model.
      std::size_t violated = kNoRule;
      ClosureEnv env{lower, upper.pert, prev_, acts_};
      for (std::uint32_t r : candidates_) {
        const GroundRule& rule = e_.program_->rules[r];
        EvalStatus status;
        const Truth t = body_truth(r, lower, env, status);
        if (t == Truth::Error) {
          lower.record_error(r, status.error);
        } else if (t == Truth::True) {
          if (rule.falsum) {
            if (violated == kNoRule) violated = r;
          } else {
            check_value(r, env, lower);
          }
        }
      }
      if (lower.error_rule != kNoRule) return EvalFailure{lower.error_rule, lower.error};

      for (std::uint32_t f = 0; f < fluents; ++f) {
        if (!lower.pert[f] || lower.count[f] < 2) continue;
        for (const auto& [g, w] : lower.extra)
          if (g == f) return Inconsistent{f, lower.first[f], w};
      }
      if (violated != kNoRule) return RejectedConstraint{violated};

      Accepted out;
      out.next.values = prev_.values;
      for (std::uint32_t f = 0; f < fluents; ++f) {
        if (!lower.pert[f]) continue;
        out.next.values[f] = lower.first[f];
        out.next.pertinent.push_back(f);
      }
      out.next.actions = acts_assignment();
      return out;
    }

   private:
    ActionAssignment acts_assignment() const {
      ActionAssignment a;
      for (std::uint32_t i = 0; i < acts_.size(); ++i)
        if (acts_[i]) a.assign(i, *acts_[i]);
      return a;
    }

    // Rules whose static literals hold in this transition.
    void select_candidates() {
      struct StaticEnv {
        const State& previous;
        const std::vector<const Value*>& acts;
        bool current(std::uint32_t, ValueSink) const { return false; }
        const Value* prev(std::uint32_t f) const { return &previous.values[f]; }
        const Value* action(std::uint32_t a) const { return acts[a]; }
      } env{prev_, acts_};

      auto consider = [&](std::uint32_t r) {
        const GroundRule& rule = e_.program_->rules[r];
        EvalStatus status;
        for (std::uint32_t i : e_.info_[r].static_literals) {
          const GroundLiteral& lit = rule.body[i];
          Truth t;
          if (lit.kind == GroundLiteral::Kind::Compare)
            t = compare_values(lit, env, status);
          else
            t = (acts_[lit.term.index] != nullptr) == (lit.kind == GroundLiteral::Kind::Pert) ? Truth::True
                                                                                              : Truth::False;
          if (t == Truth::False) return;
        }
        if (!status.error.empty()) static_errors_[r] = status.error;
        candidates_.push_back(r);
        active_[r] = 1;
      };
      for (std::uint32_t r : e_.unconditional_) consider(r);
      for (std::uint32_t a = 0; a < acts_.size(); ++a)
        if (acts_[a])
          for (std::uint32_t r : e_.by_action_[a]) consider(r);
      std::sort(candidates_.begin(), candidates_.end());
    }

    Truth body_truth(std::uint32_t r, const Closure& c, const ClosureEnv& env, EvalStatus& status) const {
      const GroundRule& rule = e_.program_->rules[r];
      bool errored = false;
      for (std::uint32_t i : e_.info_[r].dynamic_literals) {
        const GroundLiteral& lit = rule.body[i];
        Truth t = Truth::False;
        switch (lit.kind) {
          case GroundLiteral::Kind::Pert:
            t = c.pert[lit.term.index] ? Truth::True : Truth::False;
            break;
          case GroundLiteral::Kind::NotPert:
            t = env.assumed[lit.term.index] ? Truth::False : Truth::True;
            break;
          case GroundLiteral::Kind::Compare:
            t = compare_values(lit, env, status);
            break;
        }
        if (t == Truth::False) return Truth::False;
        if (t == Truth::Error) errored = true;
      }
      if (auto it = static_errors_.find(r); it != static_errors_.end()) {
        status.fail(it->second);
        errored = true;
      }
      return errored ? Truth::Error : Truth::True;
    }

    // Values of a fired rule that are not members of its target's codomain,
    // or that cannot be computed, are errors of the final model.
    void check_value(std::uint32_t r, const ClosureEnv& env, Closure& c) const {
      const GroundRule& rule = e_.program_->rules[r];
      const Sort& codomain = e_.sig_.codomain({SymbolKind::Fluent, rule.target});
      EvalStatus status;
      enumerate_values(rule.value, env, [&](const Value& v) {
        if (!codomain.contains(v))
          status.fail("value " + v.to_string() + " outside the codomain of " +
                      e_.sig_.term_name({SymbolKind::Fluent, rule.target}));
        return false;
      }, status);
      if (!status.error.empty()) c.record_error(r, status.error);
    }

    // Positive closure with `not pert(g)` read as "g not in assumed".
    // Out-of-codomain values make the target pertinent without adding a value.
    void close(Closure& c, const std::vector<char>& assumed) {
      c.reset();
      const auto& rules = e_.program_->rules;
      ClosureEnv env{c, assumed, prev_, acts_};
      queue_.clear();
      for (std::uint32_t r : candidates_)
        if (!rules[r].falsum) {
          queue_.push_back(r);
          queued_[r] = 1;
        }
      for (std::size_t head = 0; head < queue_.size(); ++head) {
        const std::uint32_t r = queue_[head];
        queued_[r] = 0;
        const GroundRule& rule = rules[r];
        EvalStatus status;
        if (body_truth(r, c, env, status) != Truth::True) continue;
        const std::uint32_t f = rule.target;
        const Sort& codomain = e_.sig_.codomain({SymbolKind::Fluent, f});
        bool changed = false;
        bool produced = false;
        EvalStatus value_status;
        enumerate_values(rule.value, env, [&](const Value& v) {
          produced = true;
          if (!codomain.contains(v)) return false;
          if (c.has_value(f, v)) return false;
          if (c.count[f] == 0) {
            c.first[f] = v;
          } else {
            c.extra.emplace_back(f, v);
          }
          if (c.count[f] < 255) ++c.count[f];
          changed = true;
          return false;
        }, value_status);
        if (!produced) continue;
        if (!c.pert[f]) {
          c.pert[f] = 1;
          changed = true;
        }
        if (changed) {
          c.touched.push_back(f);
          for (std::uint32_t d : e_.dependents_[f])
            if (active_[d] && !queued_[d]) {
              queued_[d] = 1;
              queue_.push_back(d);
            }
        }
      }
    }

    const WellFoundedEngine& e_;
    const State& prev_;
    std::vector<const Value*> acts_;
    std::vector<std::uint32_t> candidates_;
    std::vector<char> active_;
    std::vector<char> queued_;
    std::vector<std::uint32_t> queue_;
    std::unordered_map<std::uint32_t, std::string> static_errors_;
  };

  std::shared_ptr<const GroundProgram> program_;
  const Signature& sig_;
  std::vector<RuleInfo> info_;
  std::vector<std::uint32_t> unconditional_;
  std::vector<std::vector<std::uint32_t>> by_action_;
  std::vector<std::vector<std::uint32_t>> dependents_;
};

// One-shot transition over a program the caller keeps alive.
inline TransitionResult compute_transition(const State& prev, const ActionAssignment& acts,
                                           const GroundProgram& program) {
  WellFoundedEngine engine(std::shared_ptr<const GroundProgram>(&program, [](const GroundProgram*) {}));
  return engine.transition(prev, acts);
}

}  // namespace pal
