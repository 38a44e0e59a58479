#pragma once

// Helpers shared by the test suites: loading programs, naming ground terms,
// building states and action assignments from PAL text.

#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "pal/pal.hpp"

namespace pal::testing {

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

inline std::filesystem::path corpus_dir() { return PAL_CORPUS_DIR; }
inline std::string corpus(std::string_view name) { return read_file(corpus_dir() / (std::string(name) + ".pal")); }

// Declarations of a program, ground.
struct Loaded {
  std::shared_ptr<const GroundProgram> program;
  const Signature& sig() const { return *program->signature; }
};

inline Loaded load(std::string_view text) {
  const syntax::ProgramAst ast = syntax::parse_program(text);
  return {std::make_shared<GroundProgram>(ground_program(ast))};
}

inline std::uint32_t ground(const Signature& sig, SymbolKind kind, std::string_view name) {
  const std::size_t n = kind == SymbolKind::Action ? sig.action_count() : sig.fluent_count();
  for (std::uint32_t i = 0; i < n; ++i)
    if (sig.term_name({kind, i}) == name) return i;
  throw std::runtime_error("no ground term " + std::string(name));
}
inline std::uint32_t fluent(const Signature& sig, std::string_view name) {
  return ground(sig, SymbolKind::Fluent, name);
}
inline std::uint32_t action(const Signature& sig, std::string_view name) {
  return ground(sig, SymbolKind::Action, name);
}

// State from the assignments of an `initially` clause, e.g. "loc(B):=table,free(B)".
inline State initial(const Signature& sig, std::string_view assigns) {
  auto f = syntax::parse_sentence("initially " + std::string(assigns) + ";");
  return initial_state(std::get<syntax::InitiallyAst>(f.program.sentences.at(0)), sig);
}

// Action assignment of one `do` step, e.g. "carry(1):=2,carry(3):=4".
inline ActionAssignment step(const Signature& sig, std::string_view assigns) {
  auto f = syntax::parse_sentence("do {" + std::string(assigns) + ";}");
  return action_assignment(std::get<syntax::DoAst>(f.program.sentences.at(0)).steps.at(0), sig);
}

inline Value sym(std::string_view s) { return Value::symbol(s); }
inline Value num(std::int64_t n) { return Value::integer(n); }

// The single query of a `query ...?` sentence, expanded.
inline Query query(const Signature& sig, std::string_view text) {
  auto f = syntax::parse_sentence("query " + std::string(text));
  return expand_query(std::get<syntax::QueryAst>(f.program.sentences.at(0)), sig);
}

struct RunResult {
  std::string output;
  int exit_code = 0;
};

inline RunResult run_text(std::string_view program, RunOptions opts = {}) {
  std::ostringstream out;
  const int code = run(program, nullptr, out, std::move(opts));
  return {out.str(), code};
}

// Runs `program` and then feeds `lines` as interactive input.
inline RunResult run_interactive(std::string_view program, std::string_view lines, RunOptions opts = {}) {
  std::ostringstream out;
  std::istringstream in{std::string(lines)};
  const int code = run(program, &in, out, std::move(opts));
  return {out.str(), code};
}

inline const char* kBlocksDecls = R"(
sets
  block = [1,4];
  location = block + {table};
actions
  carry: block -> location;
fluents
  loc: block -> location;
  free: block -> {true,false};
vars
  B,C : block;
rules
  loc(B):=carry(B);
  not free(C) if carry(B)=C;
  free(B) if pert(carry(C)) and prev(loc(C))=B;
  false if pert(carry(B)) and not prev(free(B));
  false if carry(B)=C and not prev(free(C));
)";

inline const char* kBlocksInit = "loc(B):=table,free(B)";

}  // namespace pal::testing
