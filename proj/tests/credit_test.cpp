#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "counted/credit.hpp"

namespace counted::credit {
namespace {

// Explicit series sum_{i=0}^{d} LTV^i, term by term.
double series(double ltv, std::uint64_t depth) {
  double sum = 0.0;
  double term = 1.0;
  for (std::uint64_t i = 0; i <= depth; ++i) {
    sum += term;
    term *= ltv;
  }
  return sum;
}

TEST(MaxDepth, Floor) {
  EXPECT_EQ(max_depth(10), std::optional<std::uint64_t>(5));
  EXPECT_EQ(max_depth(4), std::optional<std::uint64_t>(2));
  EXPECT_EQ(max_depth(1), std::optional<std::uint64_t>(0));
  EXPECT_EQ(max_depth(0), std::nullopt);
}

TEST(MaxLeverage, Examples) {
  EXPECT_NEAR(max_leverage({10, 0.7, 10.0}), 2.94, 0.005);
  EXPECT_NEAR(10.0 * max_leverage({10, 0.7, 10.0}), 29.41, 0.005);
  EXPECT_NEAR(max_leverage({50, 0.7, 10.0}), 3.33, 0.005);
  EXPECT_NEAR(max_leverage({7, 1e-9, 10.0}), 1.0, 1e-8);
  EXPECT_DOUBLE_EQ(max_leverage({0, 0.5, 10.0}), 2.0);
  EXPECT_THROW(max_leverage({10, 1.0, 10.0}), Error);
  EXPECT_THROW(max_leverage({10, 0.0, 10.0}), Error);
}

TEST(MaxLeverage, ClosedFormMatchesSeries) {
  for (std::uint64_t limit = 1; limit <= 100; ++limit) {
    for (int step = 1; step < 20; ++step) {
      const double ltv = 0.05 * step;
      EXPECT_NEAR(max_leverage({limit, ltv, 10.0}), series(ltv, limit / 2), 1e-12)
          << "L=" << limit << " LTV=" << ltv;
    }
  }
}

TEST(MaxLeverage, Monotone) {
  for (double ltv : {0.3, 0.5, 0.7, 0.9}) {
    for (std::uint64_t limit = 1; limit < 80; ++limit) {
      EXPECT_LE(max_leverage({limit, ltv, 10.0}), max_leverage({limit + 1, ltv, 10.0}));
      EXPECT_GE(reduction_vs_unbounded({limit, ltv, 10.0}),
                reduction_vs_unbounded({limit + 1, ltv, 10.0}));
    }
  }
}

TEST(Reduction, Examples) {
  EXPECT_NEAR(100.0 * reduction_vs_unbounded({10, 0.7, 10.0}), 11.7, 0.1);
  EXPECT_NEAR(100.0 * reduction_vs_unbounded({6, 0.7, 10.0}), 24.0, 0.05);
  EXPECT_NEAR(100.0 * reduction_vs_unbounded({20, 0.7, 10.0}), 1.9, 0.1);
  // Printed 34.2; exact arithmetic gives 34.3.
  EXPECT_NEAR(100.0 * reduction_vs_unbounded({4, 0.7, 10.0}), 34.3, 1e-9);
  EXPECT_NEAR(100.0 * reduction_vs_unbounded({4, 0.7, 10.0}), 34.2, 0.1 + 1e-9);
}

TEST(BuildChain, GeometricPositions) {
  const auto chain = build_chain({10, 0.7, 10.0});
  const std::vector<double> expected{10, 7, 4.9, 3.43, 2.401, 1.6807};
  ASSERT_EQ(chain.positions.size(), expected.size());
  EXPECT_EQ(chain.depth(), 5u);
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_NEAR(chain.positions[i].collateral_value, expected[i], 1e-12);
    EXPECT_NEAR(chain.positions[i].debt, 0.7 * expected[i], 1e-12);
  }
  EXPECT_NEAR(chain.exposure(), 29.41, 0.005);
  EXPECT_NEAR(chain.exposure(), 10.0 * max_leverage({10, 0.7, 10.0}), 1e-12);
}

TEST(BuildChain, UnboundedStopsAtFloor) {
  const auto chain = build_chain({0, 0.7, 10.0});
  ASSERT_FALSE(chain.positions.empty());
  EXPECT_GE(chain.positions.back().collateral_value, kChainValueFloor);
  EXPECT_LT(chain.positions.back().collateral_value * 0.7, kChainValueFloor);
  // 10 * 0.7^19 = 0.0114, 10 * 0.7^20 = 0.0080.
  EXPECT_EQ(chain.depth(), 19u);
}

TEST(Cascade, NoShockNoLoss) {
  for (std::uint64_t limit : {0u, 4u, 10u, 50u}) {
    const auto r = cascade(build_chain({limit, 0.7, 10.0}), 0.0);
    EXPECT_EQ(r.cascade_depth, 0u);
    EXPECT_DOUBLE_EQ(r.aggregate_loss, 0.0);
  }
}

TEST(Cascade, BoundaryShockLiquidatesEverything) {
  const auto chain = build_chain({10, 0.7, 10.0});
  const auto r = cascade(chain, 0.3, 0.05);
  EXPECT_EQ(r.cascade_depth, chain.positions.size());
  // The first position sits exactly on the boundary and loses nothing; the
  // rest lose the penalty share of their collateral.
  double expected = 0.0;
  for (std::size_t i = 1; i < chain.positions.size(); ++i) {
    expected += 0.05 * chain.positions[i].collateral_value;
  }
  EXPECT_NEAR(r.aggregate_loss, expected, 1e-9);
}

TEST(Cascade, CapShortensCascade) {
  const auto capped = cascade(build_chain({10, 0.7, 10.0}), 0.3, 0.05);
  const auto loose = cascade(build_chain({50, 0.7, 10.0}), 0.3, 0.05);
  EXPECT_LT(capped.aggregate_loss, loose.aggregate_loss);
  EXPECT_LT(capped.cascade_depth, loose.cascade_depth);
}

TEST(Cascade, MonotoneInShockAndDepth) {
  for (double penalty : {0.0, 0.05, 0.2}) {
    for (std::uint64_t limit : {2u, 6u, 10u, 20u, 50u}) {
      const auto chain = build_chain({limit, 0.7, 10.0});
      double prev = -1.0;
      for (int i = 0; i < 100; ++i) {
        const double loss = cascade(chain, i / 100.0, penalty).aggregate_loss;
        EXPECT_GE(loss, prev - 1e-12);
        prev = loss;
      }
    }
    for (double shock : {0.1, 0.3, 0.45}) {
      double prev = -1.0;
      for (std::uint64_t limit = 2; limit <= 60; limit += 2) {
        const double loss = cascade(build_chain({limit, 0.7, 10.0}), shock, penalty).aggregate_loss;
        EXPECT_GE(loss, prev - 1e-12);
        prev = loss;
      }
    }
  }
}

TEST(Cascade, Errors) {
  const auto chain = build_chain({10, 0.7, 10.0});
  EXPECT_THROW(cascade(chain, 1.0), Error);
  EXPECT_THROW(cascade(chain, -0.1), Error);
  EXPECT_THROW(cascade(chain, 0.3, 1.0), Error);
}

TEST(CoSimulation, CapAdmitsFloorHalfCycles) {
  for (std::uint64_t limit : {1u, 2u, 5u, 10u, 11u, 20u}) {
    ledger::Ledger book;
    const ledger::Address borrower{10};
    const ledger::Address pool{20};
    book.mint(borrower, 1, limit);
    const auto sim = rehypothecate(book, 1, borrower, pool);
    EXPECT_EQ(sim.cycles, *max_depth(limit)) << "L=" << limit;
    EXPECT_EQ(sim.transfers, limit);
    EXPECT_EQ(book.transfer_count_of(1), limit);
    // The capping transfer fires the post-cap policy, so the next one is
    // refused because the token has settled.
    EXPECT_EQ(sim.refusal, Errc::TokenNotActive);
  }
}

TEST(CoSimulation, LimitReachedWhenCapLoweredToCount) {
  ledger::Ledger book;
  const ledger::Address borrower{10};
  const ledger::Address pool{20};
  book.mint(borrower, 1, 20);
  rehypothecate(book, 1, borrower, pool, 3);
  book.set_transfer_limit(borrower, 1, 6);
  const auto sim = rehypothecate(book, 1, borrower, pool);
  EXPECT_EQ(sim.cycles, 0u);
  EXPECT_EQ(sim.refusal, Errc::TransferLimitReached);
}

}  // namespace
}  // namespace counted::credit
