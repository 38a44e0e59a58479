#pragma once

#include <chrono>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "pal/deadline.hpp"
#include "pal/engine/semantics.hpp"
#include "pal/error.hpp"
#include "pal/grounding/ground_program.hpp"
#include "pal/narrative.hpp"
#include "pal/planner.hpp"
#include "pal/render.hpp"
#include "pal/syntax/parser.hpp"

namespace pal {

// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitSyntax = 1,
  kExitSemantic = 2,
  kExitRuntime = 3,
  kExitTimeout = 4,
};

struct RunOptions {
  std::string semantics = "wf";
  std::optional<std::size_t> solutions_cap;          // caps every query's solution count
  std::optional<std::chrono::milliseconds> time_limit;  // whole-run wall clock
};

// Executes PAL text against one narrative, writing the rendered output to
// `out`. Diagnostics are part of the output. The exit code is that of the
// first error met.
class Interpreter {
 public:
  Interpreter(std::ostream& out, RunOptions opts = {})
      : out_(out), opts_(std::move(opts)),
        deadline_(opts_.time_limit ? Deadline(*opts_.time_limit) : Deadline()) {
    require_known_semantics(opts_.semantics);
    rebuild(declarations_);
  }

  int exit_code() const { return exit_code_; }
  bool quit_requested() const { return quit_; }
  const Narrative& narrative() const { return narrative_; }
  const GroundProgram& program() const { return *program_; }
  const Options& options() const { return options_; }

  // Whole-program execution: every declaration is applied before the first
  // sentence runs. Returns false if the program could not be started.
  bool run_program(std::string_view text) {
    syntax::Fragment fragment;
    try {
      fragment = syntax::parse_sentence(text);
    } catch (const Error& e) {
      report(kExitSyntax, e);
      return false;
    }
    context_ = fragment.trailing;
    return guarded([&] { execute(std::move(fragment.program)); });
  }

  // Interactive input, one line at a time. Lines starting with `:` (outside
  // a pending sentence) are debug commands.
  void feed_line(std::string_view line) {
    if (quit_) return;
    if (buffer_.empty()) {
      const auto start = line.find_first_not_of(" \t\r");
      if (start != std::string_view::npos && line[start] == ':') {
        command(line.substr(start));
        return;
      }
    }
    buffer_.append(line);
    buffer_.push_back('\n');
    syntax::Fragment fragment;
    try {
      fragment = syntax::parse_sentence(buffer_, context_);
    } catch (const IncompleteInput&) {
      return;
    } catch (const Error& e) {
      buffer_.clear();
      report(kExitSyntax, e);
      return;
    }
    buffer_.clear();
    context_ = fragment.trailing;
    guarded([&] { execute(std::move(fragment.program)); });
  }

  // End of interactive input; a pending partial sentence is a syntax error.
  void finish() {
    if (buffer_.find_first_not_of(" \t\r\n") == std::string::npos) return;
    try {
      syntax::parse_sentence(buffer_, context_);
    } catch (const Error& e) {
      report(kExitSyntax, e);
    }
    buffer_.clear();
  }

 private:
  template <typename Fn>
  bool guarded(Fn&& fn) {
    try {
      fn();
      return true;
    } catch (const TimeoutError& e) {
      out_ << "timeout: " << e.what() << '\n';
      note(kExitTimeout);
      quit_ = true;
    }
    return false;
  }

  void note(int code) {
    if (exit_code_ == kExitOk) exit_code_ = code;
  }

  void report(int code, const Error& e) {
    out_ << "error: " << e.what() << '\n';
    note(code);
  }

  void execute(syntax::ProgramAst fragment) {
    if (fragment.has_declarations()) {
      syntax::ProgramAst merged = declarations_;
      syntax::ProgramAst decls = std::move(fragment);
      std::vector<syntax::SentenceAst> sentences = std::move(decls.sentences);
      decls.sentences.clear();
      merged.append(std::move(decls));
      try {
        rebuild(merged);
      } catch (const Error& e) {
        report(kExitSemantic, e);
        return;
      }
      declarations_ = std::move(merged);
      fragment.sentences = std::move(sentences);
    }
    for (const auto& s : fragment.sentences) {
      try {
        sentence(s);
      } catch (const EvalError& e) {
        out_ << "error: " << e.what() << '\n';
        note(kExitRuntime);
      } catch (const Error& e) {
        report(kExitSemantic, e);
      }
    }
  }

  void rebuild(const syntax::ProgramAst& decls) {
    auto sig = std::make_shared<Signature>(build_signature(decls));
    if (narrative_.initialized() && !sig->same_symbols(*program_->signature))
      throw SemanticError("actions and fluents cannot change once the narrative is initialized", {});
    auto program = std::make_shared<GroundProgram>();
    program->rules = ground_rules(decls.rule_schemas, *sig);
    program->signature = std::move(sig);
    auto semantics = make_semantics(opts_.semantics, program);
    Options options;
    for (const auto& o : decls.options) options.apply(o);
    program_ = std::move(program);
    semantics_ = std::move(semantics);
    options_ = options;
  }

  void require_narrative(SourceLoc loc) const {
    if (!narrative_.initialized()) throw SemanticError("no initial situation ('initially' missing)", loc);
  }

  void sentence(const syntax::SentenceAst& s) {
    const Signature& sig = *program_->signature;
    if (const auto* init = std::get_if<syntax::InitiallyAst>(&s)) {
      State initial = initial_state(*init, sig);
      if (narrative_.initialize(std::move(initial))) out_ << "Resume\n";
      return;
    }
    if (const auto* d = std::get_if<syntax::DoAst>(&s)) {
      require_narrative(d->loc);
      std::vector<ActionAssignment> steps;
      for (const auto& step : d->steps) steps.push_back(action_assignment(step, sig));
      PerformOutcome outcome = narrative_.perform(*semantics_, steps, deadline_);
      for (const auto& r : outcome.records) render_record(out_, sig, r);
      if (outcome.failure) {
        out_ << describe_failure(outcome.failure->situation, outcome.failure->result) << '\n';
        note(kExitRuntime);
      }
      return;
    }
    const auto& q = std::get<syntax::QueryAst>(s);
    require_narrative(q.loc);
    Query query = expand_query(q, sig);
    Options opts = options_;
    if (opts_.solutions_cap)
      opts.solutions_limit = std::min(opts.solutions_limit.value_or(*opts_.solutions_cap), *opts_.solutions_cap);
    const std::size_t k = narrative_.last();
    const State* before = k > 0 ? &narrative_.state_at(k - 1) : nullptr;
    auto solutions = solve(*semantics_, sig, narrative_.current(), before, query, opts, deadline_);
    render_solutions(out_, sig, solutions, !query.variables.empty(), query.transitions(), k + 1);
  }

  std::string describe_failure(std::size_t situation, const TransitionResult& r) const {
    const Signature& sig = *program_->signature;
    const std::string at = " at situation " + std::to_string(situation) + ": ";
    if (const auto* c = std::get_if<RejectedConstraint>(&r))
      return "inconsistent" + at + to_string(program_->rules[c->rule], sig);
    if (const auto* i = std::get_if<Inconsistent>(&r))
      return "inconsistent" + at + sig.term_name({SymbolKind::Fluent, i->fluent}) + " caused with values " +
             i->first.to_string() + " and " + i->second.to_string();
    if (const auto* u = std::get_if<Undefined>(&r)) {
      std::string names;
      for (std::uint32_t f : u->fluents) names += (names.empty() ? "" : ", ") + sig.term_name({SymbolKind::Fluent, f});
      return "inconsistent" + at + "undefined pertinence of " + names;
    }
    const auto& e = std::get<EvalFailure>(r);
    return "error: " + e.message + at + to_string(program_->rules[e.rule], sig);
  }

  void command(std::string_view line) {
    std::istringstream in{std::string(line)};
    std::string name;
    in >> name;
    if (name == ":quit") {
      quit_ = true;
      return;
    }
    if (name == ":ground") {
      render_ground_program(out_, *program_);
      return;
    }
    if (name == ":state") {
      long long k = -1;
      if (!(in >> k)) {
        out_ << "error: usage: :state N\n";
        return;
      }
      try {
        if (!narrative_.initialized() || k < 0) throw SemanticError("situation " + std::to_string(k) + " does not exist", {});
        render_state(out_, *program_->signature, narrative_.state_at(static_cast<std::size_t>(k)));
      } catch (const Error& e) {
        out_ << "error: " << e.what() << '\n';
      }
      return;
    }
    out_ << "unknown command " << name << '\n';
  }

  std::ostream& out_;
  RunOptions opts_;
  Deadline deadline_;
  syntax::ProgramAst declarations_;
  std::shared_ptr<const GroundProgram> program_;
  std::unique_ptr<Semantics> semantics_;
  Options options_;
  Narrative narrative_;
  syntax::Section context_ = syntax::Section::None;
  std::string buffer_;
  int exit_code_ = kExitOk;
  bool quit_ = false;
};

// Batch run of `program` followed, if given, by line-oriented input.
inline int run(std::string_view program, std::istream* interactive, std::ostream& out, RunOptions opts = {}) {
  std::optional<Interpreter> interp;
  try {
    interp.emplace(out, std::move(opts));
  } catch (const Error& e) {
    out << "error: " << e.what() << '\n';
    return kExitSemantic;
  }
  const bool started = interp->run_program(program);
  if (started && interactive) {
    std::string line;
    while (!interp->quit_requested() && std::getline(*interactive, line)) {
      interp->feed_line(line);
      out.flush();
    }
    interp->finish();
  }
  out.flush();
  return interp->exit_code();
}

}  // namespace pal
