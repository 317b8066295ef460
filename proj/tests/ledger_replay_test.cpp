#include <gtest/gtest.h>

#include <map>
#include <random>
#include <sstream>

#include "counted/event_log.hpp"
#include "counted/ledger.hpp"

namespace counted::ledger {
namespace {

constexpr Address kAlice{1};
constexpr Address kBob{2};

// Seeded random operation history. Failed operations are part of the mix;
// they must leave no trace in the log.
Ledger random_run(std::uint64_t seed, int ops, LedgerConfig config = {}) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::uint64_t n) { return rng() % n; };
  Ledger l(config);
  const std::array<PostCapPolicy, 4> policies{
      PostCapPolicy::soulbound(), PostCapPolicy::auto_burn(),
      PostCapPolicy::lock_and_release(2), PostCapPolicy::provenance_freeze()};
  for (int i = 0; i < ops; ++i) {
    const TokenId id = 1 + pick(40);
    const Address actor{pick(6)};  // 0 is the zero address
    const Address other{pick(6)};
    try {
      switch (pick(10)) {
        case 0:
          l.mint(Address{1 + pick(5)}, id, pick(3) == 0 ? 0 : 1 + pick(8), policies[pick(4)]);
          break;
        case 1: l.set_transfer_limit(actor, id, pick(10)); break;
        case 2: l.burn(actor, id); break;
        case 3: l.apply_post_cap_policy(id); break;
        case 4: l.unlock(id, pick(2) ? std::optional<std::uint64_t>(pick(4)) : std::nullopt); break;
        default: {
          const TokenRecord* t = l.find(id);
          const Address from = (t && pick(4) != 0) ? t->owner : actor;
          l.transfer(from, other, id);
        }
      }
    } catch (const Error&) {
    }
  }
  return l;
}

TEST(Replay, EmptyLog) {
  Ledger l = replay({});
  EXPECT_TRUE(l.tokens().empty());
  EXPECT_TRUE(l.events().empty());
  EXPECT_EQ(l, Ledger{});
}

TEST(Replay, CountBeforeMintIsInvalid) {
  std::vector<LedgerEvent> log{{1, TransferCountIncreased{1, 1}}, {2, Minted{1, kAlice, 5, {}}}};
  try {
    replay(log);
    FAIL();
  } catch (const ReplayError& e) {
    EXPECT_EQ(e.code(), Errc::InvalidHistory);
    EXPECT_EQ(e.index(), 0u);
  }
}

TEST(Replay, RejectsIllegalHistories) {
  auto first_bad = [](std::vector<LedgerEvent> log) -> std::optional<std::size_t> {
    try {
      replay(log);
    } catch (const ReplayError& e) {
      return e.index();
    }
    return std::nullopt;
  };
  const Minted mint{1, kAlice, 1, {}};
  // Transfer past the cap.
  EXPECT_EQ(first_bad({{1, mint},
                       {2, Transferred{1, kAlice, kBob}},
                       {3, TransferCountIncreased{1, 1}},
                       {4, PolicyTriggered{1, PolicyKind::ProvenanceFreeze}},
                       {5, Transferred{1, kBob, kAlice}}}),
            std::optional<std::size_t>(4));
  // Missing PolicyTriggered at the cap.
  EXPECT_EQ(first_bad({{1, mint}, {2, Transferred{1, kAlice, kBob}}, {3, TransferCountIncreased{1, 1}}}),
            std::optional<std::size_t>(3));
  // Wrong count.
  EXPECT_EQ(first_bad({{1, mint}, {2, Transferred{1, kAlice, kBob}}, {3, TransferCountIncreased{1, 2}}}),
            std::optional<std::size_t>(2));
  // Non-increasing sequence numbers.
  EXPECT_EQ(first_bad({{5, Minted{1, kAlice, 0, {}}}, {5, Minted{2, kAlice, 0, {}}}}),
            std::optional<std::size_t>(1));
  // Transfer from a non-owner.
  EXPECT_EQ(first_bad({{1, Minted{1, kAlice, 0, {}}}, {2, Transferred{1, kBob, kAlice}}}),
            std::optional<std::size_t>(1));
  // Limit below count.
  EXPECT_EQ(first_bad({{1, Minted{1, kAlice, 0, {}}},
                       {2, Transferred{1, kAlice, kBob}},
                       {3, TransferCountIncreased{1, 1}},
                       {4, Transferred{1, kBob, kAlice}},
                       {5, TransferCountIncreased{1, 2}},
                       {6, TransferLimitUpdated{1, 1}}}),
            std::optional<std::size_t>(5));
  // Policy kind differs from the minted one.
  EXPECT_EQ(first_bad({{1, mint},
                       {2, Transferred{1, kAlice, kBob}},
                       {3, TransferCountIncreased{1, 1}},
                       {4, PolicyTriggered{1, PolicyKind::AutoBurn}}}),
            std::optional<std::size_t>(3));
  // Forbidden unbounded reset unless the config allows it.
  std::vector<LedgerEvent> reset{{1, Minted{1, kAlice, 4, {}}}, {2, TransferLimitUpdated{1, 0}}};
  EXPECT_EQ(first_bad(reset), std::optional<std::size_t>(1));
  EXPECT_NO_THROW(replay(reset, {.allow_unbounded_reset = true}));
}

// Live state must equal the state replayed from its own log.
TEST(ReplayProperty, RandomRunsReplayExactly) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const LedgerConfig config{.allow_unbounded_reset = seed % 2 == 0};
    Ledger live = random_run(seed, 1000, config);
    Ledger rebuilt = replay(live.events(), config);
    ASSERT_EQ(rebuilt, live) << "seed " << seed;
    // Idempotent.
    ASSERT_EQ(replay(rebuilt.events(), config), rebuilt);
  }
}

TEST(ReplayProperty, InvariantsHoldOnRandomRuns) {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    Ledger l = random_run(seed, 1500);
    std::map<TokenId, std::uint64_t> transferred;
    std::map<TokenId, std::uint64_t> capping;
    std::map<TokenId, std::uint64_t> triggered;
    std::map<TokenId, std::uint64_t> limit;
    std::map<TokenId, std::uint64_t> last_count;
    std::uint64_t prev_seq = 0;
    for (const auto& ev : l.events()) {
      ASSERT_GT(ev.seq, prev_seq);
      prev_seq = ev.seq;
      const TokenId id = ev.token_id();
      if (const auto* m = std::get_if<Minted>(&ev.payload)) limit[id] = m->limit;
      if (const auto* u = std::get_if<TransferLimitUpdated>(&ev.payload)) limit[id] = u->limit;
      if (std::holds_alternative<Transferred>(ev.payload)) ++transferred[id];
      if (const auto* c = std::get_if<TransferCountIncreased>(&ev.payload)) {
        // A count of c is preceded by exactly c Transferred events.
        ASSERT_EQ(c->count, transferred[id]);
        ASSERT_GE(c->count, last_count[id]);
        last_count[id] = c->count;
        if (limit[id] > 0) {
          ASSERT_LE(c->count, limit[id]);
          if (c->count == limit[id]) ++capping[id];
        }
      }
      if (std::holds_alternative<PolicyTriggered>(ev.payload)) ++triggered[id];
    }
    for (const auto& [id, token] : l.tokens()) {
      if (token.transfer_limit > 0) ASSERT_LE(token.transfer_count, token.transfer_limit);
      ASSERT_FALSE(token.owner.is_zero());
      ASSERT_EQ(token.transfer_count, transferred[id]);
      // One policy firing per transfer that hit the cap, plus manual pokes.
      ASSERT_GE(triggered[id], capping[id]);
    }
  }
}

TEST(EventLog, LineFormat) {
  Ledger l;
  l.mint(kAlice, 7, 3, PostCapPolicy::lock_and_release(2));
  l.transfer(kAlice, kBob, 7);
  auto ev = l.events();
  EXPECT_EQ(to_line(ev[0]),
            R"({"kind":"Minted","limit":3,"owner":1,"policy":"LockAndRelease","seq":1,"token_id":7,"unlock_grant":2})");
  EXPECT_EQ(to_line(ev[1]), R"({"from":1,"kind":"Transferred","seq":2,"to":2,"token_id":7})");
  EXPECT_EQ(to_line(ev[2]), R"({"count":1,"kind":"TransferCountIncreased","seq":3,"token_id":7})");
}

TEST(EventLog, RoundTripReplaysBitExact) {
  for (std::uint64_t seed = 7; seed < 12; ++seed) {
    Ledger live = random_run(seed, 2000);
    std::stringstream buffer;
    write_log(buffer, live.events());
    const std::string text = buffer.str();
    auto parsed = read_log(buffer);
    ASSERT_EQ(parsed.size(), live.events().size());
    Ledger rebuilt = replay(parsed);
    ASSERT_EQ(rebuilt, live);
    std::stringstream again;
    write_log(again, rebuilt.events());
    ASSERT_EQ(again.str(), text);
  }
}

TEST(EventLog, ParseErrors) {
  EXPECT_THROW(parse_line("not json"), Error);
  EXPECT_THROW(parse_line(R"({"seq":1,"kind":"Minted","token_id":1})"), Error);
  EXPECT_THROW(parse_line(R"({"seq":1,"kind":"Exploded","token_id":1})"), Error);
  EXPECT_THROW(parse_line(R"({"seq":1,"kind":"Burned","token_id":1,"extra":2})"), Error);
  EXPECT_THROW(parse_line(R"({"seq":-1,"kind":"Burned","token_id":1})"), Error);
  try {
    parse_line(R"({"seq":1,"kind":"PolicyTriggered","token_id":1,"policy":"Melt"})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ParseError);
  }
}

}  // namespace
}  // namespace counted::ledger
