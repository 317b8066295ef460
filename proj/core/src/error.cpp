#include "counted/error.hpp"

namespace counted {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::DuplicateToken: return "DuplicateToken";
    case Errc::ZeroAddressOwner: return "ZeroAddressOwner";
    case Errc::ZeroAddress: return "ZeroAddress";
    case Errc::UnknownToken: return "UnknownToken";
    case Errc::TokenNotActive: return "TokenNotActive";
    case Errc::NotAuthorized: return "NotAuthorized";
    case Errc::NotOwner: return "NotOwner";
    case Errc::TransferLimitReached: return "TransferLimitReached";
    case Errc::LimitBelowCount: return "LimitBelowCount";
    case Errc::UnboundedResetForbidden: return "UnboundedResetForbidden";
    case Errc::CapNotReached: return "CapNotReached";
    case Errc::InvalidGrant: return "InvalidGrant";
    case Errc::InvalidHistory: return "InvalidHistory";
    case Errc::DomainError: return "DomainError";
    case Errc::NoRemainingBudget: return "NoRemainingBudget";
    case Errc::UnboundedToken: return "UnboundedToken";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::EmptyPopulation: return "EmptyPopulation";
    case Errc::Infeasible: return "Infeasible";
    case Errc::UnknownOperation: return "UnknownOperation";
    case Errc::NotApplicable: return "NotApplicable";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace counted
