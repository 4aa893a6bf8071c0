#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stretchy {

// Stable machine-readable categories; the CLI prints these verbatim.
enum class ErrorCategory {
  arithmetic_overflow,
  numeric_overflow,
  degenerate_column,
  domain_error,
  singular_system,
  dimension_mismatch,
  invalid_argument,
  parse_error,
  validation_error,
  io_error,
  usage_error,
};

constexpr std::string_view to_string(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::arithmetic_overflow: return "arithmetic_overflow";
    case ErrorCategory::numeric_overflow: return "numeric_overflow";
    case ErrorCategory::degenerate_column: return "degenerate_column";
    case ErrorCategory::domain_error: return "domain_error";
    case ErrorCategory::singular_system: return "singular_system";
    case ErrorCategory::dimension_mismatch: return "dimension_mismatch";
    case ErrorCategory::invalid_argument: return "invalid_argument";
    case ErrorCategory::parse_error: return "parse_error";
    case ErrorCategory::validation_error: return "validation_error";
    case ErrorCategory::io_error: return "io_error";
    case ErrorCategory::usage_error: return "usage_error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

}  // namespace stretchy
