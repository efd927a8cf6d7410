#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hcs {

// Default cap on states, vertices, or tree nodes built by exponential constructions.
inline constexpr std::size_t kDefaultStateCap = 1'000'000;

// Malformed model, unknown symbol, or unsupported input shape.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller violated an operation precondition (e.g. minimize on an NFA).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A construction exceeded its state cap.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, std::size_t cap)
      : std::runtime_error(what + " (cap " + std::to_string(cap) + ")"), cap_(cap) {}

  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t cap_;
};

}  // namespace hcs
