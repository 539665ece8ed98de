#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gibbscert {

/// Malformed input: loops, vertices outside the graph, bad parameters.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Distance query between vertices in different components.
class Unreachable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Moment generating function evaluated outside its domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An exact computation would exceed a configured resource cap.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(const std::string& what, std::uint64_t required, std::uint64_t cap)
      : std::runtime_error(what + " (required " + std::to_string(required) +
                           ", cap " + std::to_string(cap) + ")"),
        required_(required),
        cap_(cap) {}

  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t cap() const noexcept { return cap_; }

 private:
  std::uint64_t required_;
  std::uint64_t cap_;
};

}  // namespace gibbscert
