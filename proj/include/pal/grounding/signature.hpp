#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pal/error.hpp"
#include "pal/grounding/sort.hpp"
#include "pal/syntax/ast.hpp"
#include "pal/syntax/printer.hpp"

namespace pal {

enum class SymbolKind { Action, Fluent };

struct SymbolDecl {
  std::string name;
  SymbolKind kind = SymbolKind::Fluent;
  std::vector<SortRef> args;
  SortRef codomain;
  std::uint32_t first = 0;  // index of the first ground instance within its kind
  std::uint32_t count = 0;  // number of ground instances
  SourceLoc loc;

  std::size_t arity() const { return args.size(); }
};

// One ground action or fluent term, e.g. loc(3).
struct GroundTermInfo {
  std::uint32_t symbol = 0;  // index into Signature::actions() or fluents()
  std::vector<Value> args;
};

struct TermRef {
  SymbolKind kind = SymbolKind::Fluent;
  std::uint32_t index = 0;

  friend bool operator==(const TermRef&, const TermRef&) = default;
};

class Signature {
 public:
  const SortTable& sorts() const { return sorts_; }
  const std::vector<SymbolDecl>& actions() const { return actions_; }
  const std::vector<SymbolDecl>& fluents() const { return fluents_; }
  const std::vector<SymbolDecl>& decls(SymbolKind k) const {
    return k == SymbolKind::Action ? actions_ : fluents_;
  }

  std::size_t action_count() const { return action_terms_.size(); }
  std::size_t fluent_count() const { return fluent_terms_.size(); }

  const GroundTermInfo& term(TermRef t) const {
    return t.kind == SymbolKind::Action ? action_terms_[t.index] : fluent_terms_[t.index];
  }
  const SymbolDecl& decl(TermRef t) const { return decls(t.kind)[term(t).symbol]; }
  const Sort& codomain(TermRef t) const { return *decl(t).codomain; }

  // Looks up an action or fluent by name.
  std::optional<std::pair<SymbolKind, std::uint32_t>> find_symbol(std::string_view name) const {
    auto it = symbol_index_.find(name);
    if (it == symbol_index_.end()) return std::nullopt;
    return it->second;
  }

  // Ground index of `decl(args)`, or nullopt when some argument lies outside
  // its declared sort.
  std::optional<std::uint32_t> ground_index(const SymbolDecl& decl, std::span<const Value> args) const {
    std::uint64_t offset = 0;
    for (std::size_t i = 0; i < decl.args.size(); ++i) {
      auto pos = decl.args[i]->position(args[i]);
      if (!pos) return std::nullopt;
      offset = offset * decl.args[i]->size() + *pos;
    }
    return decl.first + static_cast<std::uint32_t>(offset);
  }

  std::string term_name(TermRef t) const {
    const GroundTermInfo& info = term(t);
    std::string out = decl(t).name;
    if (!info.args.empty()) {
      out += '(';
      for (std::size_t i = 0; i < info.args.size(); ++i) {
        if (i) out += ',';
        out += info.args[i].to_string();
      }
      out += ')';
    }
    return out;
  }

  const SortRef* variable_sort(std::string_view var) const {
    auto it = vars_.find(var);
    return it == vars_.end() ? nullptr : &it->second;
  }
  // Variables in declaration order.
  const std::vector<std::string>& variables() const { return var_order_; }

  // Structural identity of the declared actions and fluents (names, arities,
  // sorts). Used to decide whether an existing narrative is still valid.
  bool same_symbols(const Signature& other) const {
    auto same = [](const std::vector<SymbolDecl>& a, const std::vector<SymbolDecl>& b) {
      if (a.size() != b.size()) return false;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].name != b[i].name || a[i].args.size() != b[i].args.size() ||
            a[i].codomain->elements() != b[i].codomain->elements())
          return false;
        for (std::size_t j = 0; j < a[i].args.size(); ++j)
          if (a[i].args[j]->elements() != b[i].args[j]->elements()) return false;
      }
      return true;
    };
    return same(actions_, other.actions_) && same(fluents_, other.fluents_);
  }

 private:
  friend Signature build_signature(const syntax::ProgramAst& ast);

  SortTable sorts_;
  std::vector<SymbolDecl> actions_;
  std::vector<SymbolDecl> fluents_;
  std::vector<GroundTermInfo> action_terms_;
  std::vector<GroundTermInfo> fluent_terms_;
  std::map<std::string, std::pair<SymbolKind, std::uint32_t>, std::less<>> symbol_index_;
  std::map<std::string, SortRef, std::less<>> vars_;
  std::vector<std::string> var_order_;
};

namespace detail {

inline SortRef resolve_sort(const syntax::SetExpr& expr, const SortTable& sorts) {
  if (expr.kind == syntax::SetExpr::Kind::Name) {
    auto it = sorts.find(expr.name);
    if (it != sorts.end()) return it->second;
  }
  std::ostringstream name;
  syntax::detail::print_set(name, expr);
  return std::make_shared<const Sort>(name.str(), eval_set_expr(expr, sorts));
}

inline void require_nonempty(const SortRef& sort, const std::string& what, SourceLoc loc) {
  if (sort->empty()) throw SemanticError("empty sort '" + sort->name() + "' used as " + what, loc);
}

// Ground instances enumerated lexicographically by argument position.
inline void enumerate_instances(const SymbolDecl& decl, std::uint32_t symbol,
                                std::vector<GroundTermInfo>& out) {
  std::vector<std::size_t> pos(decl.args.size(), 0);
  while (true) {
    GroundTermInfo info;
    info.symbol = symbol;
    for (std::size_t i = 0; i < pos.size(); ++i) info.args.push_back(decl.args[i]->elements()[pos[i]]);
    out.push_back(std::move(info));
    std::size_t k = pos.size();
    while (k > 0) {
      --k;
      if (++pos[k] < decl.args[k]->size()) break;
      pos[k] = 0;
      if (k == 0) return;
    }
    if (pos.empty()) return;
  }
}

}  // namespace detail

inline Signature build_signature(const syntax::ProgramAst& ast) {
  constexpr std::uint64_t kMaxGroundTerms = 5'000'000;
  Signature sig;

  for (const auto& def : ast.set_defs) {
    if (sig.sorts_.count(def.name))
      throw SemanticError("set '" + def.name + "' defined twice", def.loc);
    sig.sorts_[def.name] = std::make_shared<const Sort>(def.name, eval_set_expr(def.value, sig.sorts_));
  }

  auto declare = [&](const syntax::SymbolDeclAst& d, SymbolKind kind, std::vector<SymbolDecl>& decls,
                     std::vector<GroundTermInfo>& terms) {
    if (sig.symbol_index_.count(d.name))
      throw SemanticError("symbol '" + d.name + "' declared twice", d.loc);
    SymbolDecl decl;
    decl.name = d.name;
    decl.kind = kind;
    decl.loc = d.loc;
    std::uint64_t count = 1;
    for (const auto& s : d.domain) {
      SortRef sort = detail::resolve_sort(s, sig.sorts_);
      detail::require_nonempty(sort, "a domain", s.loc);
      count *= sort->size();
      if (count > kMaxGroundTerms) throw SemanticError("too many ground instances of '" + d.name + "'", d.loc);
      decl.args.push_back(std::move(sort));
    }
    decl.codomain = d.codomain ? detail::resolve_sort(*d.codomain, sig.sorts_) : boolean_sort();
    if (d.codomain) detail::require_nonempty(decl.codomain, "a codomain", d.codomain->loc);
    decl.first = static_cast<std::uint32_t>(terms.size());
    decl.count = static_cast<std::uint32_t>(count);
    if (terms.size() + count > kMaxGroundTerms)
      throw SemanticError("too many ground terms", d.loc);
    const auto symbol = static_cast<std::uint32_t>(decls.size());
    detail::enumerate_instances(decl, symbol, terms);
    sig.symbol_index_[d.name] = {kind, symbol};
    decls.push_back(std::move(decl));
  };
  for (const auto& d : ast.action_decls) declare(d, SymbolKind::Action, sig.actions_, sig.action_terms_);
  for (const auto& d : ast.fluent_decls) declare(d, SymbolKind::Fluent, sig.fluents_, sig.fluent_terms_);

  // A constant spelled like a declared symbol would be ambiguous in expressions.
  auto check_constants = [&](const Sort& sort, SourceLoc loc) {
    for (const Value& v : sort.elements())
      if (v.is_symbol() && sig.symbol_index_.count(v.symbol_name()))
        throw SemanticError("constant '" + v.symbol_name() + "' clashes with a declared symbol", loc);
  };
  for (const auto& def : ast.set_defs) check_constants(*sig.sorts_.at(def.name), def.loc);
  for (const auto* decls : {&sig.actions_, &sig.fluents_})
    for (const auto& d : *decls) {
      check_constants(*d.codomain, d.loc);
      for (const auto& a : d.args) check_constants(*a, d.loc);
    }

  for (const auto& v : ast.var_decls) {
    SortRef sort = detail::resolve_sort(v.sort, sig.sorts_);
    for (const auto& name : v.names) {
      if (auto it = sig.vars_.find(name); it != sig.vars_.end()) {
        if (it->second->elements() != sort->elements())
          throw SemanticError("variable '" + name + "' redeclared with a different sort", v.loc);
        continue;
      }
      sig.vars_[name] = sort;
      sig.var_order_.push_back(name);
    }
  }
  return sig;
}

}  // namespace pal
