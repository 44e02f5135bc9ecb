#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qbessel {

enum class ErrorKind {
  DomainError,
  InvalidOrder,
  IntegerOrder,
  OrderOutOfRange,
  TruncationBudgetExceeded,
  Divergent,
  InvalidDenominator,
  NonFinite,
  BracketingFailed,
  NotAZero,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::InvalidOrder: return "InvalidOrder";
    case ErrorKind::IntegerOrder: return "IntegerOrder";
    case ErrorKind::OrderOutOfRange: return "OrderOutOfRange";
    case ErrorKind::TruncationBudgetExceeded: return "TruncationBudgetExceeded";
    case ErrorKind::Divergent: return "Divergent";
    case ErrorKind::InvalidDenominator: return "InvalidDenominator";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::BracketingFailed: return "BracketingFailed";
    case ErrorKind::NotAZero: return "NotAZero";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above, so
/// callers (the CLI in particular) can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace qbessel
