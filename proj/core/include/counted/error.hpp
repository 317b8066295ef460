#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace counted {

// Every failure the library reports carries one of these codes.
enum class Errc {
  // ledger
  DuplicateToken,
  ZeroAddressOwner,
  ZeroAddress,
  UnknownToken,
  TokenNotActive,
  NotAuthorized,
  NotOwner,
  TransferLimitReached,
  LimitBelowCount,
  UnboundedResetForbidden,
  CapNotReached,
  InvalidGrant,
  InvalidHistory,
  // valuation / market
  DomainError,
  NoRemainingBudget,
  UnboundedToken,
  BudgetExceeded,
  // population
  EmptyPopulation,
  Infeasible,
  // costs
  UnknownOperation,
  NotApplicable,
  // plumbing
  ParseError,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Raised by replay; `index` is the position of the first event that is not
// legal in the state built from the events before it.
class ReplayError : public Error {
 public:
  ReplayError(std::size_t index, const std::string& message)
      : Error(Errc::InvalidHistory, message), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace counted
