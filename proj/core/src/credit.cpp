#include "counted/credit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace counted::credit {

void validate(const LeverageScenario& s) {
  if (!(s.ltv > 0.0 && s.ltv < 1.0)) throw Error(Errc::DomainError, "LTV must lie in (0, 1)");
  if (!(s.initial_value >= 0.0)) throw Error(Errc::DomainError, "negative initial value");
}

std::optional<std::uint64_t> max_depth(std::uint64_t limit) {
  if (limit == 0) return std::nullopt;
  return limit / 2;
}

double unbounded_leverage(double ltv) { return 1.0 / (1.0 - ltv); }

double max_leverage(const LeverageScenario& s) {
  validate(s);
  const auto depth = max_depth(s.limit);
  if (!depth) return unbounded_leverage(s.ltv);
  return (1.0 - std::pow(s.ltv, static_cast<double>(*depth + 1))) / (1.0 - s.ltv);
}

double reduction_vs_unbounded(const LeverageScenario& s) {
  return 1.0 - max_leverage(s) / unbounded_leverage(s.ltv);
}

double LeverageChain::exposure() const noexcept {
  return std::accumulate(positions.begin(), positions.end(), 0.0,
                         [](double acc, const Position& p) { return acc + p.collateral_value; });
}

LeverageChain build_chain(const LeverageScenario& s) {
  validate(s);
  const auto depth = max_depth(s.limit);
  LeverageChain chain;
  double collateral = s.initial_value;
  for (std::uint64_t i = 0; !depth || i <= *depth; ++i) {
    if (collateral < kChainValueFloor) break;
    chain.positions.push_back({collateral, s.ltv * collateral});
    collateral *= s.ltv;
  }
  return chain;
}

CascadeResult cascade(const LeverageChain& chain, double shock, double penalty) {
  if (!(shock >= 0.0 && shock < 1.0)) throw Error(Errc::DomainError, "shock outside [0, 1)");
  if (!(penalty >= 0.0 && penalty < 1.0)) {
    throw Error(Errc::DomainError, "liquidation penalty outside [0, 1)");
  }
  // Ties at p = 1 - LTV are exact in real arithmetic; allow for rounding.
  constexpr double kTieSlack = 1e-12;

  CascadeResult out;
  out.liquidated.reserve(chain.positions.size());
  bool previous = false;
  for (const Position& pos : chain.positions) {
    const double hit = std::min(1.0, shock + (previous ? penalty : 0.0));
    const double marked = pos.collateral_value * (1.0 - hit);
    const bool liquidate = pos.debt > 0.0 && marked <= pos.debt * (1.0 + kTieSlack);
    if (liquidate) {
      ++out.cascade_depth;
      out.aggregate_loss += std::max(pos.debt - marked, 0.0);
    }
    out.liquidated.push_back(liquidate);
    previous = liquidate;
  }
  return out;
}

CoSimulation rehypothecate(ledger::Ledger& book, ledger::TokenId token,
                           ledger::Address borrower, ledger::Address pool,
                           std::uint64_t max_cycles) {
  CoSimulation sim;
  while (sim.cycles < max_cycles) {
    try {
      book.transfer(borrower, pool, token);
      ++sim.transfers;
      book.transfer(pool, borrower, token);
      ++sim.transfers;
    } catch (const Error& e) {
      sim.refusal = e.code();
      return sim;
    }
    ++sim.cycles;
  }
  return sim;
}

}  // namespace counted::credit
