#pragma once

#include <cstdint>
#include <functional>
#include <mutex>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_set>

namespace pal {

namespace detail {

// Process-wide, append-only symbol table. Interned strings are never freed,
// so the returned pointers are stable and may be compared for identity.
inline const std::string* intern(std::string_view text) {
  static std::mutex mutex;
  static std::unordered_set<std::string> table;
  std::lock_guard<std::mutex> lock(mutex);
  return &*table.emplace(text).first;
}

}  // namespace detail

// A ground value: either an integer or a symbol constant such as `table`.
// `true` and `false` are ordinary symbols.
class Value {
 public:
  Value() = default;

  static Value integer(std::int64_t n) {
    Value v;
    v.number_ = n;
    return v;
  }
  static Value symbol(std::string_view name) {
    Value v;
    v.symbol_ = detail::intern(name);
    return v;
  }
  static Value boolean(bool b) { return b ? truth() : falsity(); }
  static Value truth() {
    static const Value v = symbol("true");
    return v;
  }
  static Value falsity() {
    static const Value v = symbol("false");
    return v;
  }

  bool is_integer() const { return symbol_ == nullptr; }
  bool is_symbol() const { return symbol_ != nullptr; }
  std::int64_t as_integer() const { return number_; }
  const std::string& symbol_name() const { return *symbol_; }

  std::string to_string() const {
    return is_integer() ? std::to_string(number_) : *symbol_;
  }

  friend bool operator==(const Value& a, const Value& b) {
    return a.symbol_ == b.symbol_ && (a.symbol_ != nullptr || a.number_ == b.number_);
  }

  std::size_t hash() const {
    return symbol_ ? std::hash<const void*>{}(symbol_)
                   : std::hash<std::int64_t>{}(number_) * 31u + 7u;
  }

  friend std::ostream& operator<<(std::ostream& os, const Value& v) {
    return os << v.to_string();
  }

 private:
  const std::string* symbol_ = nullptr;
  std::int64_t number_ = 0;
};

struct ValueHash {
  std::size_t operator()(const Value& v) const { return v.hash(); }
};

}  // namespace pal
