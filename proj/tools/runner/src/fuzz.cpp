#include "counted/runner/fuzz.hpp"

#include <array>
#include <optional>
#include <random>
#include <sstream>
#include <unordered_map>

#include "counted/event_log.hpp"
#include "counted/ledger.hpp"
#include "counted/runner/csv.hpp"

namespace counted::runner {

namespace {

using namespace counted::ledger;

constexpr std::uint64_t kAddresses = 8;  // 0 is the zero address

struct ShadowToken {
  std::uint64_t owner = 0;
  std::uint64_t k = 0;
  std::uint64_t limit = 0;
  TokenStatus status = TokenStatus::Active;
  PolicyKind policy = PolicyKind::ProvenanceFreeze;
  std::uint64_t grant = 0;

  bool capped() const { return limit > 0 && k >= limit; }
  void settle() {
    status = policy == PolicyKind::AutoBurn ? TokenStatus::Burned : TokenStatus::Settled;
  }
};

using Outcome = std::optional<Errc>;

// Written from the transfer rules directly; shares no code with Ledger.
class Shadow {
 public:
  Outcome mint(std::uint64_t owner, TokenId id, std::uint64_t limit, PolicyKind policy,
               std::uint64_t grant) {
    if (owner == 0) return Errc::ZeroAddressOwner;
    if (tokens_.count(id)) return Errc::DuplicateToken;
    tokens_[id] = {owner, 0, limit, TokenStatus::Active, policy,
                   policy == PolicyKind::LockAndRelease ? grant : 0};
    return std::nullopt;
  }

  Outcome set_limit(std::uint64_t caller, TokenId id, std::uint64_t limit) {
    auto* t = find(id);
    if (!t) return Errc::UnknownToken;
    if (t->status != TokenStatus::Active) return Errc::TokenNotActive;
    if (caller == 0 || caller != t->owner) return Errc::NotAuthorized;
    if (limit == 0 && t->limit != 0) return Errc::UnboundedResetForbidden;
    if (limit != 0 && limit < t->k) return Errc::LimitBelowCount;
    t->limit = limit;
    return std::nullopt;
  }

  static bool admitted(const ShadowToken* t, std::uint64_t from, std::uint64_t to) {
    return t && from != 0 && to != 0 && t->status == TokenStatus::Active && t->owner == from &&
           (t->limit == 0 || t->k < t->limit);
  }

  Outcome transfer(std::uint64_t from, std::uint64_t to, TokenId id) {
    auto* t = find(id);
    if (!t) return Errc::UnknownToken;
    if (from == 0 || to == 0) return Errc::ZeroAddress;
    if (t->status != TokenStatus::Active) return Errc::TokenNotActive;
    if (t->owner != from) return Errc::NotOwner;
    if (t->capped()) return Errc::TransferLimitReached;
    t->owner = to;
    ++t->k;
    if (t->capped()) t->settle();
    return std::nullopt;
  }

  Outcome burn(std::uint64_t caller, TokenId id) {
    auto* t = find(id);
    if (!t) return Errc::UnknownToken;
    if (t->status != TokenStatus::Active) return Errc::TokenNotActive;
    if (caller == 0 || caller != t->owner) return Errc::NotAuthorized;
    t->status = TokenStatus::Burned;
    return std::nullopt;
  }

  Outcome apply_policy(TokenId id) {
    auto* t = find(id);
    if (!t) return Errc::UnknownToken;
    if (t->status != TokenStatus::Active) return Errc::TokenNotActive;
    if (!t->capped()) return Errc::CapNotReached;
    t->settle();
    return std::nullopt;
  }

  Outcome unlock(TokenId id, std::optional<std::uint64_t> grant) {
    auto* t = find(id);
    if (!t) return Errc::UnknownToken;
    if (t->status != TokenStatus::Settled || t->policy != PolicyKind::LockAndRelease) {
      return Errc::TokenNotActive;
    }
    const std::uint64_t amount = grant.value_or(t->grant);
    if (amount == 0) return Errc::InvalidGrant;
    t->limit += amount;
    t->status = TokenStatus::Active;
    return std::nullopt;
  }

  ShadowToken* find(TokenId id) {
    auto it = tokens_.find(id);
    return it == tokens_.end() ? nullptr : &it->second;
  }

  const std::unordered_map<TokenId, ShadowToken>& tokens() const { return tokens_; }

 private:
  std::unordered_map<TokenId, ShadowToken> tokens_;
};

template <class F>
Outcome attempt(F&& f) {
  try {
    f();
    return std::nullopt;
  } catch (const Error& e) {
    return e.code();
  }
}

bool same_state(const TokenRecord& live, const ShadowToken& s) {
  return live.owner.value == s.owner && live.transfer_count == s.k &&
         live.transfer_limit == s.limit && live.status == s.status && live.policy.kind == s.policy;
}

}  // namespace

FuzzReport run_fuzz(const FuzzOptions& o) {
  std::mt19937_64 rng(o.seed);
  auto below = [&](std::uint64_t n) { return rng() % n; };
  auto draw_limit = [&]() -> std::uint64_t { return below(4) == 0 ? 0 : 1 + below(o.max_limit); };
  constexpr std::array<PolicyKind, 4> kPolicies{PolicyKind::SoulboundConvert, PolicyKind::AutoBurn,
                                                PolicyKind::LockAndRelease,
                                                PolicyKind::ProvenanceFreeze};

  Ledger live;
  Shadow shadow;
  FuzzReport r;
  std::unordered_map<TokenId, std::uint64_t> last_count;

  auto policy_for = [](PolicyKind kind, std::uint64_t grant) {
    switch (kind) {
      case PolicyKind::SoulboundConvert: return PostCapPolicy::soulbound();
      case PolicyKind::AutoBurn: return PostCapPolicy::auto_burn();
      case PolicyKind::LockAndRelease: return PostCapPolicy::lock_and_release(grant);
      case PolicyKind::ProvenanceFreeze: break;
    }
    return PostCapPolicy::provenance_freeze();
  };

  for (std::uint64_t i = 0; i < o.ops; ++i) {
    // The first pass mints every token; later mints mostly collide.
    const bool seeding = i < o.tokens;
    const TokenId id = seeding ? i + 1 : 1 + below(o.tokens + o.tokens / 20);
    const std::uint64_t roll = seeding ? 0 : 1 + below(100);
    const std::uint64_t a = below(kAddresses);
    Outcome expected;
    Outcome got;

    if (roll <= 2) {
      const std::uint64_t owner = seeding ? 1 + below(kAddresses - 1) : a;
      const std::uint64_t limit = draw_limit();
      const PolicyKind kind = kPolicies[below(4)];
      const std::uint64_t grant = below(4);
      expected = shadow.mint(owner, id, limit, kind, grant);
      got = attempt([&] { live.mint(Address{owner}, id, limit, policy_for(kind, grant)); });
    } else if (roll <= 10) {
      const ShadowToken* t = shadow.find(id);
      const std::uint64_t caller = (t && below(4) != 0) ? t->owner : a;
      const std::uint64_t limit = below(6) == 0 ? 0 : (t ? t->k : 0) + below(o.max_limit);
      expected = shadow.set_limit(caller, id, limit);
      got = attempt([&] { live.set_transfer_limit(Address{caller}, id, limit); });
    } else if (roll <= 11) {
      const ShadowToken* t = shadow.find(id);
      const std::uint64_t caller = (t && below(2) != 0) ? t->owner : a;
      expected = shadow.burn(caller, id);
      got = attempt([&] { live.burn(Address{caller}, id); });
    } else if (roll <= 15) {
      expected = shadow.apply_policy(id);
      got = attempt([&] { live.apply_post_cap_policy(id); });
    } else if (roll <= 25) {
      const auto grant = below(3) == 0 ? std::nullopt : std::optional<std::uint64_t>(below(5));
      expected = shadow.unlock(id, grant);
      got = attempt([&] { live.unlock(id, grant); });
    } else {
      const ShadowToken* t = shadow.find(id);
      const std::uint64_t from = (t && below(8) != 0) ? t->owner : a;
      const std::uint64_t to = below(16) == 0 ? 0 : 1 + below(kAddresses - 1);
      const bool should_admit = Shadow::admitted(t, from, to);
      expected = shadow.transfer(from, to, id);
      got = attempt([&] { live.transfer(Address{from}, Address{to}, id); });
      if (should_admit != !got.has_value()) ++r.liveness_violations;
      if (!got) {
        ++r.transfers;
        const TokenRecord& rec = live.record(id);
        if (rec.at_cap()) ++r.caps_hit;
      }
    }

    ++r.ops;
    got ? ++r.rejected : ++r.accepted;
    if (expected != got) ++r.model_mismatches;

    if (const TokenRecord* rec = live.find(id)) {
      if (rec->transfer_limit > 0 && rec->transfer_count > rec->transfer_limit) ++r.safety_violations;
      if (rec->transfer_count < last_count[id]) ++r.safety_violations;
      last_count[id] = rec->transfer_count;
      const ShadowToken* s = shadow.find(id);
      if (!s || !same_state(*rec, *s)) ++r.model_mismatches;
    } else if (shadow.find(id)) {
      ++r.model_mismatches;
    }
  }

  for (const auto& [id, rec] : live.tokens()) {
    if (rec.transfer_limit > 0 && rec.transfer_count > rec.transfer_limit) ++r.safety_violations;
    if (rec.owner.is_zero()) ++r.safety_violations;
  }
  if (live.tokens().size() != shadow.tokens().size()) ++r.model_mismatches;

  r.events = live.events().size();
  const Ledger rebuilt = replay(live.events());
  r.replay_matches = rebuilt == live;

  std::stringstream text;
  write_log(text, live.events());
  const std::string original = text.str();
  const Ledger reparsed = replay(read_log(text));
  std::stringstream again;
  write_log(again, reparsed.events());
  r.round_trip_matches = reparsed == live && again.str() == original;
  return r;
}

std::string to_csv(const FuzzReport& r) {
  CsvWriter w({"metric", "value"});
  auto row = [&](const char* name, std::uint64_t v) { w.cell(name).cell(v).end_row(); };
  row("ops", r.ops);
  row("accepted", r.accepted);
  row("rejected", r.rejected);
  row("transfers", r.transfers);
  row("caps_hit", r.caps_hit);
  row("events", r.events);
  row("safety_violations", r.safety_violations);
  row("liveness_violations", r.liveness_violations);
  row("model_mismatches", r.model_mismatches);
  row("replay_matches", r.replay_matches ? 1 : 0);
  row("round_trip_matches", r.round_trip_matches ? 1 : 0);
  return w.str();
}

}  // namespace counted::runner
