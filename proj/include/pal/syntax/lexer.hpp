#pragma once

#include <array>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "pal/error.hpp"

namespace pal::syntax {

enum class TokenKind { Keyword, SymbolName, VariableName, Integer, Operator, Punctuation };

struct Token {
  TokenKind kind;
  std::string text;
  int line = 1;
  int column = 1;

  SourceLoc loc() const { return {line, column}; }
  bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
  bool is_keyword(std::string_view t) const { return is(TokenKind::Keyword, t); }
  bool is_op(std::string_view t) const {
    return (kind == TokenKind::Operator || kind == TokenKind::Punctuation) && text == t;
  }
};

inline constexpr std::array<std::string_view, 18> kKeywords = {
    "sets",    "actions", "fluents", "vars", "rules", "options",
    "initially", "do",    "query",   "if",   "and",   "not",
    "pert",    "prev",    "true",    "false", "concurrent", "solutions"};

inline bool is_keyword(std::string_view word) {
  for (auto k : kKeywords)
    if (k == word) return true;
  return false;
}

// `%` starts a comment running to the end of the line. Identifiers are
// [A-Za-z][A-Za-z0-9_]*; the case of the first letter decides between symbol
// and variable names.
inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  int line = 1;
  int column = 1;
  std::size_t i = 0;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  };
  auto push = [&](TokenKind kind, std::size_t len) {
    tokens.push_back({kind, std::string(text.substr(i, len)), line, column});
    advance(len);
  };

  while (i < text.size()) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (c == '%') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      advance(1);
      continue;
    }
    if (std::isalpha(c)) {
      std::size_t len = 1;
      while (i + len < text.size()) {
        const unsigned char d = static_cast<unsigned char>(text[i + len]);
        if (!std::isalnum(d) && d != '_') break;
        ++len;
      }
      const std::string_view word = text.substr(i, len);
      TokenKind kind = is_keyword(word)      ? TokenKind::Keyword
                       : std::isupper(c) != 0 ? TokenKind::VariableName
                                              : TokenKind::SymbolName;
      push(kind, len);
      continue;
    }
    if (std::isdigit(c)) {
      std::size_t len = 1;
      while (i + len < text.size() && std::isdigit(static_cast<unsigned char>(text[i + len])))
        ++len;
      if (len > 18) throw LexicalError("integer literal too large", {line, column});
      push(TokenKind::Integer, len);
      continue;
    }
    const std::string_view rest = text.substr(i);
    if (rest.starts_with("...")) {
      push(TokenKind::Operator, 3);
      continue;
    }
    bool matched = false;
    for (std::string_view op : {":=", "->", "<>", "<=", ">="}) {
      if (rest.starts_with(op)) {
        push(TokenKind::Operator, 2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    switch (c) {
      case '=': case '<': case '>': case '+': case '-': case '*':
        push(TokenKind::Operator, 1);
        continue;
      case '(': case ')': case '{': case '}': case '[': case ']':
      case ',': case ';': case ':': case '?':
        push(TokenKind::Punctuation, 1);
        continue;
      default:
        break;
    }
    if (c >= 0x80) throw LexicalError("non-ASCII character outside a comment", {line, column});
    throw LexicalError(std::string("unexpected character '") + static_cast<char>(c) + "'",
                       {line, column});
  }
  return tokens;
}

}  // namespace pal::syntax
