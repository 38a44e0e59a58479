#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "pal/engine/state.hpp"
#include "pal/grounding/ground_program.hpp"
#include "pal/narrative.hpp"
#include "pal/planner.hpp"

namespace pal {

// `N)`, then performed actions, then pertinent fluents, one `term:=value`
// per line, each group in ground-term order.
inline void render_transition(std::ostream& os, const Signature& sig, std::size_t situation, const State& s) {
  os << situation << ")\n";
  for (const auto& [a, v] : s.actions) os << sig.term_name({SymbolKind::Action, a}) << ":=" << v << '\n';
  for (std::uint32_t f : s.pertinent) os << sig.term_name({SymbolKind::Fluent, f}) << ":=" << s.values[f] << '\n';
}

inline void render_record(std::ostream& os, const Signature& sig, const TransitionRecord& r) {
  os << r.situation << ")\n";
  for (const auto& [a, v] : r.actions) os << sig.term_name({SymbolKind::Action, a}) << ":=" << v << '\n';
  for (const auto& [f, v] : r.effects) os << sig.term_name({SymbolKind::Fluent, f}) << ":=" << v << '\n';
}

// Full valuation of a situation.
inline void render_state(std::ostream& os, const Signature& sig, const State& s) {
  for (std::uint32_t f = 0; f < s.values.size(); ++f)
    os << sig.term_name({SymbolKind::Fluent, f}) << ":=" << s.values[f] << '\n';
}

// Query answers. Ground queries about the current situation print yes/no;
// otherwise bindings and/or plans followed by the solution count. Plan steps
// are numbered from `first_situation`.
inline void render_solutions(std::ostream& os, const Signature& sig, const std::vector<Solution>& solutions,
                             bool had_variables, std::size_t transitions, std::size_t first_situation) {
  if (transitions == 0 && !had_variables) {
    os << (solutions.empty() ? "no" : "yes") << '\n';
    return;
  }
  if (transitions == 0) {
    for (const Solution& s : solutions)
      for (const auto& [name, v] : s.binding) os << name << '=' << v << '\n';
  } else {
    for (std::size_t k = 0; k < solutions.size(); ++k) {
      const Solution& s = solutions[k];
      os << "\nSolution " << (k + 1) << ":\n";
      for (const auto& [name, v] : s.binding) os << name << '=' << v << '\n';
      for (std::size_t i = 0; i < s.trace.size(); ++i) render_transition(os, sig, first_situation + i, s.trace[i]);
    }
  }
  os << '\n' << solutions.size() << " solutions\n";
}

inline std::string render_solutions(const Signature& sig, const std::vector<Solution>& solutions,
                                    bool had_variables, std::size_t transitions, std::size_t first_situation = 1) {
  std::ostringstream os;
  render_solutions(os, sig, solutions, had_variables, transitions, first_situation);
  return os.str();
}

inline void render_ground_program(std::ostream& os, const GroundProgram& p) {
  for (const auto& r : p.rules) os << to_string(r, *p.signature) << '\n';
}

}  // namespace pal
