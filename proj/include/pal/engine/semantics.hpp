#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "pal/engine/state.hpp"
#include "pal/engine/well_founded.hpp"
#include "pal/error.hpp"
#include "pal/grounding/ground_program.hpp"

namespace pal {

// A pluggable transition semantics for ground programs. Implementations must
// be pure functions of (program, prev, acts).
class Semantics {
 public:
  virtual ~Semantics() = default;
  virtual std::string_view name() const = 0;
  virtual TransitionResult transition(const State& prev, const ActionAssignment& acts) const = 0;
};

class WellFoundedSemantics final : public Semantics {
 public:
  explicit WellFoundedSemantics(std::shared_ptr<const GroundProgram> program)
      : engine_(std::move(program)) {}

  std::string_view name() const override { return "wf"; }
  TransitionResult transition(const State& prev, const ActionAssignment& acts) const override {
    return engine_.transition(prev, acts);
  }

 private:
  WellFoundedEngine engine_;
};

inline const std::vector<std::string>& known_semantics() {
  static const std::vector<std::string> names = {"wf"};
  return names;
}

inline void require_known_semantics(std::string_view backend) {
  for (const auto& n : known_semantics())
    if (n == backend) return;
  throw SemanticError("unknown semantics backend '" + std::string(backend) + "'", {});
}

inline std::unique_ptr<Semantics> make_semantics(std::string_view backend,
                                                 std::shared_ptr<const GroundProgram> program) {
  require_known_semantics(backend);
  return std::make_unique<WellFoundedSemantics>(std::move(program));
}

}  // namespace pal
