#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "counted/error.hpp"
#include "counted/ledger.hpp"

// Recursive collateralization under a transfer cap.
//
// Every deposit/redeem cycle costs two native transfers, so a cap L bounds
// the re-hypothecation depth at floor(L / 2) and truncates the geometric
// leverage series sum_{i=0}^{d} LTV^i.
namespace counted::credit {

struct LeverageScenario {
  std::uint64_t limit = 10;  // L, 0 = unbounded
  double ltv = 0.7;
  double initial_value = 10.0;  // V0, ETH
};

void validate(const LeverageScenario& s);

// floor(L / 2); nullopt for an unbounded token.
std::optional<std::uint64_t> max_depth(std::uint64_t limit);

// Closed form (1 - LTV^(d+1)) / (1 - LTV); 1 / (1 - LTV) when unbounded.
double max_leverage(const LeverageScenario& s);

double unbounded_leverage(double ltv);

// 1 - max_leverage / unbounded_leverage, as a fraction.
double reduction_vs_unbounded(const LeverageScenario& s);

struct Position {
  double collateral_value = 0.0;
  double debt = 0.0;
};

struct LeverageChain {
  std::vector<Position> positions;

  // Number of re-hypothecation cycles (positions after the first).
  std::size_t depth() const noexcept { return positions.empty() ? 0 : positions.size() - 1; }
  double exposure() const noexcept;
};

// Positions stop below this collateral value; keeps unbounded chains finite.
inline constexpr double kChainValueFloor = 0.01;

// Position i holds V0 * LTV^i and owes LTV times that, for i up to the
// smaller of max_depth and the value floor.
LeverageChain build_chain(const LeverageScenario& s);

struct CascadeResult {
  std::size_t cascade_depth = 0;  // liquidated positions
  double aggregate_loss = 0.0;    // ETH
  std::vector<bool> liquidated;
};

inline constexpr double kDefaultLiquidationPenalty = 0.05;

// Marks every position down by `shock`; a position whose predecessor was
// liquidated takes `penalty` on top. A position liquidates when its marked
// value is at or below its debt (ties liquidate); each liquidation loses
// max(debt - marked, 0).
CascadeResult cascade(const LeverageChain& chain, double shock,
                      double penalty = kDefaultLiquidationPenalty);

struct CoSimulation {
  std::uint64_t cycles = 0;
  std::uint64_t transfers = 0;
  Errc refusal = Errc::TransferLimitReached;  // why the next deposit failed
};

// Runs deposit (borrower -> pool) / redeem (pool -> borrower) cycles against
// a live ledger token until the ledger refuses a transfer or `max_cycles`
// is hit.
CoSimulation rehypothecate(ledger::Ledger& book, ledger::TokenId token,
                           ledger::Address borrower, ledger::Address pool,
                           std::uint64_t max_cycles = 1'000'000);

}  // namespace counted::credit
