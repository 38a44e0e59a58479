#pragma once

#include <stdexcept>
#include <string>

namespace pal {

struct SourceLoc {
  int line = 0;
  int column = 0;

  bool known() const { return line > 0; }

  // Locations do not participate in structural equality of syntax trees.
  friend bool operator==(const SourceLoc&, const SourceLoc&) { return true; }
};

// Base class for every diagnostic raised by the library. The message is the
// bare text; `what()` carries the rendered "message (line L, column C)" form.
class Error : public std::runtime_error {
 public:
  Error(std::string message, SourceLoc loc)
      : std::runtime_error(render(message, loc)), message_(std::move(message)), loc_(loc) {}

  const std::string& message() const { return message_; }
  SourceLoc loc() const { return loc_; }

 private:
  static std::string render(const std::string& message, SourceLoc loc) {
    if (!loc.known()) return message;
    return message + " (line " + std::to_string(loc.line) + ", column " +
           std::to_string(loc.column) + ")";
  }

  std::string message_;
  SourceLoc loc_;
};

class LexicalError : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public Error {
 public:
  using Error::Error;
};

// Raised when the input ended before a sentence was complete. The interpreter
// loop uses it to ask for more text instead of reporting a failure.
class IncompleteInput : public SyntaxError {
 public:
  using SyntaxError::SyntaxError;
};

// Signature, grounding and narrative-initialization problems.
class SemanticError : public Error {
 public:
  using Error::Error;
};

// Failures while evaluating ground expressions (type errors in arithmetic,
// values outside a codomain).
class EvalError : public Error {
 public:
  using Error::Error;
};

}  // namespace pal
