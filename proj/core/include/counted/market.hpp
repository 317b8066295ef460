#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "counted/error.hpp"

// Wash-trading profitability in a cap-aware market.
//
// Buyers price a token by its concave (gamma = 0.5) transfer-adjusted value,
// so each wash trade burns part of the budget the attacker later sells.
namespace counted::market {

struct WashScenario {
  std::uint64_t limit = 10;    // L > 0
  double base_value = 10.0;    // ETH
  double inflation = 0.3;      // alpha
  double trade_cost = 0.005;   // g, ETH per trade
};

void validate(const WashScenario& s);

// V_base * sqrt((L - n) / L). Throws BudgetExceeded when n > L.
double fair_value_after(std::uint64_t trades, const WashScenario& s);

// Fair value marked up by the inflation the wash trades bought.
double max_sell(std::uint64_t trades, const WashScenario& s);

double profit_cap(std::uint64_t trades, const WashScenario& s);
double profit_nocap(std::uint64_t trades, const WashScenario& s);

// Smallest n in 1..L with profit_cap(n) <= 0, or nullopt if profit stays
// positive through n = L.
std::optional<std::uint64_t> break_even(const WashScenario& s);

struct TrajectoryPoint {
  std::uint64_t trades = 0;
  double fair_value = 0.0;
  double max_sell = 0.0;
  double profit_cap = 0.0;
  double profit_nocap = 0.0;
};

// Rows for n = 0..L.
std::vector<TrajectoryPoint> trajectory(const WashScenario& s);

}  // namespace counted::market
