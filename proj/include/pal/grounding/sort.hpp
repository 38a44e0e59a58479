#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pal/error.hpp"
#include "pal/syntax/ast.hpp"
#include "pal/value.hpp"

namespace pal {

// A finite, ordered, duplicate-free set of values.
class Sort {
 public:
  Sort(std::string name, std::vector<Value> elements)
      : name_(std::move(name)), elements_(std::move(elements)) {
    for (std::size_t i = 0; i < elements_.size(); ++i) positions_.emplace(elements_[i], i);
  }

  const std::string& name() const { return name_; }
  const std::vector<Value>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }

  std::optional<std::size_t> position(const Value& v) const {
    auto it = positions_.find(v);
    if (it == positions_.end()) return std::nullopt;
    return it->second;
  }
  bool contains(const Value& v) const { return positions_.count(v) != 0; }

  bool is_boolean() const {
    return elements_.size() == 2 && contains(Value::truth()) && contains(Value::falsity());
  }

 private:
  std::string name_;
  std::vector<Value> elements_;
  std::unordered_map<Value, std::size_t, ValueHash> positions_;
};

using SortRef = std::shared_ptr<const Sort>;
using SortTable = std::map<std::string, SortRef, std::less<>>;

inline SortRef boolean_sort() {
  static const SortRef s =
      std::make_shared<const Sort>("{true,false}", std::vector<Value>{Value::truth(), Value::falsity()});
  return s;
}

// Intervals ascend; `a>b` yields the empty set. Union keeps the left operand's
// order and appends unseen right elements; difference and intersection keep
// left order.
inline std::vector<Value> eval_set_expr(const syntax::SetExpr& expr, const SortTable& sorts) {
  using Kind = syntax::SetExpr::Kind;
  switch (expr.kind) {
    case Kind::Name: {
      auto it = sorts.find(expr.name);
      if (it == sorts.end()) throw SemanticError("undefined sort '" + expr.name + "'", expr.loc);
      return it->second->elements();
    }
    case Kind::Interval: {
      std::vector<Value> out;
      if (expr.high >= expr.low && expr.high - expr.low >= 10'000'000)
        throw SemanticError("interval too large", expr.loc);
      for (std::int64_t n = expr.low; n <= expr.high; ++n) out.push_back(Value::integer(n));
      return out;
    }
    case Kind::Enumeration: {
      std::vector<Value> out;
      for (const auto& el : expr.elements) {
        Value v = el.is_integer ? Value::integer(el.number) : Value::symbol(el.symbol);
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
      }
      return out;
    }
    case Kind::Union:
    case Kind::Difference:
    case Kind::Intersection: {
      std::vector<Value> lhs = eval_set_expr(expr.operands[0], sorts);
      const std::vector<Value> rhs = eval_set_expr(expr.operands[1], sorts);
      const Sort right("", rhs);
      if (expr.kind == Kind::Union) {
        const Sort left("", lhs);
        for (const Value& v : rhs)
          if (!left.contains(v)) lhs.push_back(v);
        return lhs;
      }
      const bool keep_members = expr.kind == Kind::Intersection;
      std::erase_if(lhs, [&](const Value& v) { return right.contains(v) != keep_members; });
      return lhs;
    }
  }
  return {};
}

}  // namespace pal
