#include "counted/market.hpp"

#include <string>

#include "counted/econ.hpp"

namespace counted::market {

void validate(const WashScenario& s) {
  if (s.limit == 0) throw Error(Errc::UnboundedToken, "wash scenario needs a finite limit");
  if (!(s.base_value >= 0.0) || !(s.inflation >= 0.0) || !(s.trade_cost >= 0.0)) {
    throw Error(Errc::DomainError, "wash scenario parameters must be non-negative");
  }
}

double fair_value_after(std::uint64_t trades, const WashScenario& s) {
  validate(s);
  if (trades > s.limit) {
    throw Error(Errc::BudgetExceeded, std::to_string(trades) + " trades exceed limit " +
                                          std::to_string(s.limit));
  }
  return econ::value(econ::Power{0.5}, {s.base_value, trades, s.limit});
}

double max_sell(std::uint64_t trades, const WashScenario& s) {
  return fair_value_after(trades, s) * (1.0 + s.inflation);
}

double profit_cap(std::uint64_t trades, const WashScenario& s) {
  return max_sell(trades, s) - s.base_value - static_cast<double>(trades) * s.trade_cost;
}

double profit_nocap(std::uint64_t trades, const WashScenario& s) {
  return s.base_value * s.inflation - static_cast<double>(trades) * s.trade_cost;
}

std::optional<std::uint64_t> break_even(const WashScenario& s) {
  validate(s);
  for (std::uint64_t n = 1; n <= s.limit; ++n) {
    if (profit_cap(n, s) <= 0.0) return n;
  }
  return std::nullopt;
}

std::vector<TrajectoryPoint> trajectory(const WashScenario& s) {
  validate(s);
  std::vector<TrajectoryPoint> rows;
  rows.reserve(s.limit + 1);
  for (std::uint64_t n = 0; n <= s.limit; ++n) {
    rows.push_back({n, fair_value_after(n, s), max_sell(n, s), profit_cap(n, s),
                    profit_nocap(n, s)});
  }
  return rows;
}

}  // namespace counted::market
