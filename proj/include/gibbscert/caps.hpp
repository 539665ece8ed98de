#pragma once

#include <chrono>
#include <cstdint>
#include <string>

namespace gibbscert {

/// Resource limits for streaming enumerations. A zero time limit means none.
struct Caps {
  std::uint64_t max_items = 10'000'000;
  std::chrono::milliseconds time_limit{0};
};

/// Outcome of a capped enumeration. `complete == false` means the stream was
/// cut short and every aggregate computed from it is only a partial value.
struct EnumerationStatus {
  std::uint64_t emitted = 0;
  bool complete = true;
  std::string stop_reason;
};

/// Counts emitted items and polls the clock; once tripped it stays tripped.
class CapGuard {
 public:
  explicit CapGuard(const Caps& caps)
      : caps_(caps), start_(std::chrono::steady_clock::now()) {}

  /// Records one emitted item. Returns false once the item cap is reached.
  bool admit() {
    if (stopped_) return false;
    if (status_.emitted >= caps_.max_items) {
      stop("item cap " + std::to_string(caps_.max_items) + " reached");
      return false;
    }
    ++status_.emitted;
    return true;
  }

  /// Called on every search step; checks wall time every 1024 steps.
  bool tick() {
    if (stopped_) return false;
    if (caps_.time_limit.count() > 0 && (++steps_ & 1023u) == 0 &&
        std::chrono::steady_clock::now() - start_ > caps_.time_limit) {
      stop("time limit " + std::to_string(caps_.time_limit.count()) + " ms reached");
      return false;
    }
    return true;
  }

  void stop(std::string reason) {
    stopped_ = true;
    status_.complete = false;
    status_.stop_reason = std::move(reason);
  }

  bool stopped() const { return stopped_; }
  const EnumerationStatus& status() const { return status_; }

 private:
  Caps caps_;
  std::chrono::steady_clock::time_point start_;
  EnumerationStatus status_;
  std::uint64_t steps_ = 0;
  bool stopped_ = false;
};

}  // namespace gibbscert
