#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>

namespace pal {

class TimeoutError : public std::runtime_error {
 public:
  TimeoutError() : std::runtime_error("processing time limit exceeded") {}
};

// Optional wall-clock limit. Long-running loops call check() periodically.
class Deadline {
 public:
  Deadline() = default;
  explicit Deadline(std::chrono::milliseconds budget) : at_(std::chrono::steady_clock::now() + budget) {}

  bool expired() const { return at_ && std::chrono::steady_clock::now() >= *at_; }
  void check() const {
    if (expired()) throw TimeoutError();
  }

 private:
  std::optional<std::chrono::steady_clock::time_point> at_;
};

}  // namespace pal
