#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chargedrop {

// Stable, machine-readable failure classes. The CLI maps each to an exit code.
enum class ErrorCategory {
  invalid_argument,
  inadmissible_shape,
  numerical_failure,
  parse_error,
  io_error,
  precondition_violated,
};

constexpr std::string_view category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::invalid_argument: return "invalid_argument";
    case ErrorCategory::inadmissible_shape: return "inadmissible_shape";
    case ErrorCategory::numerical_failure: return "numerical_failure";
    case ErrorCategory::parse_error: return "parse_error";
    case ErrorCategory::io_error: return "io_error";
    case ErrorCategory::precondition_violated: return "precondition_violated";
  }
  return "unknown";
}

// Process exit status for each category (0 is success, 1 is reserved for
// unexpected failures).
constexpr int exit_code(ErrorCategory c) { return 2 + static_cast<int>(c); }

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

[[noreturn]] inline void fail(ErrorCategory category, const std::string& message) {
  throw Error(category, message);
}

}  // namespace chargedrop
