#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "counted/error.hpp"

// Event-sourced counted-transfer ledger.
//
// Each token carries a transfer state (k, L): k counts native transfers
// (both endpoints non-zero), L is the cap with 0 meaning unbounded. Mint and
// burn never touch k. A native transfer is admitted iff L == 0 or k < L.
// When a transfer brings k up to L the token's post-cap policy fires in the
// same call.
namespace counted::ledger {

struct Address {
  std::uint64_t value = 0;

  constexpr bool is_zero() const noexcept { return value == 0; }
  friend constexpr auto operator<=>(Address, Address) = default;
};

inline constexpr Address kZeroAddress{};

using TokenId = std::uint64_t;

enum class PolicyKind : std::uint8_t {
  SoulboundConvert,
  AutoBurn,
  LockAndRelease,
  ProvenanceFreeze,
};

std::string_view to_string(PolicyKind kind) noexcept;
std::optional<PolicyKind> policy_from_string(std::string_view name) noexcept;

struct PostCapPolicy {
  PolicyKind kind = PolicyKind::ProvenanceFreeze;
  // LockAndRelease only: budget restored by a default unlock.
  std::optional<std::uint64_t> unlock_grant;

  static PostCapPolicy soulbound() { return {PolicyKind::SoulboundConvert, {}}; }
  static PostCapPolicy auto_burn() { return {PolicyKind::AutoBurn, {}}; }
  static PostCapPolicy lock_and_release(std::optional<std::uint64_t> grant = {}) {
    return {PolicyKind::LockAndRelease, grant};
  }
  static PostCapPolicy provenance_freeze() { return {PolicyKind::ProvenanceFreeze, {}}; }

  friend bool operator==(const PostCapPolicy&, const PostCapPolicy&) = default;
};

enum class TokenStatus : std::uint8_t { Active, Burned, Settled };

std::string_view to_string(TokenStatus status) noexcept;

struct TokenRecord {
  TokenId id = 0;
  Address owner;
  std::uint64_t transfer_count = 0;
  std::uint64_t transfer_limit = 0;
  TokenStatus status = TokenStatus::Active;
  PostCapPolicy policy;

  bool unbounded() const noexcept { return transfer_limit == 0; }
  bool at_cap() const noexcept {
    return transfer_limit > 0 && transfer_count == transfer_limit;
  }

  friend bool operator==(const TokenRecord&, const TokenRecord&) = default;
};

// Remaining transfer budget; std::nullopt encodes "unbounded".
using Remaining = std::optional<std::uint64_t>;

// Mint carries the policy as well so that a log alone rebuilds the state.
struct Minted {
  TokenId token_id = 0;
  Address owner;
  std::uint64_t limit = 0;
  PostCapPolicy policy;
  friend bool operator==(const Minted&, const Minted&) = default;
};
struct Transferred {
  TokenId token_id = 0;
  Address from;
  Address to;
  friend bool operator==(const Transferred&, const Transferred&) = default;
};
struct TransferCountIncreased {
  TokenId token_id = 0;
  std::uint64_t count = 0;
  friend bool operator==(const TransferCountIncreased&,
                         const TransferCountIncreased&) = default;
};
// Also emitted when a locked LockAndRelease token is unlocked.
struct TransferLimitUpdated {
  TokenId token_id = 0;
  std::uint64_t limit = 0;
  friend bool operator==(const TransferLimitUpdated&,
                         const TransferLimitUpdated&) = default;
};
struct Burned {
  TokenId token_id = 0;
  friend bool operator==(const Burned&, const Burned&) = default;
};
struct PolicyTriggered {
  TokenId token_id = 0;
  PolicyKind policy = PolicyKind::ProvenanceFreeze;
  friend bool operator==(const PolicyTriggered&, const PolicyTriggered&) = default;
};

using EventPayload = std::variant<Minted, Transferred, TransferCountIncreased,
                                  TransferLimitUpdated, Burned, PolicyTriggered>;

struct LedgerEvent {
  std::uint64_t seq = 0;
  EventPayload payload;

  TokenId token_id() const noexcept;
  std::string_view kind() const noexcept;

  friend bool operator==(const LedgerEvent&, const LedgerEvent&) = default;
};

struct LedgerConfig {
  // Permits setting L' = 0 on a capped token, i.e. removing the cap.
  bool allow_unbounded_reset = false;

  friend bool operator==(const LedgerConfig&, const LedgerConfig&) = default;
};

// Single writer. Reads are const and safe to share once mutation has stopped.
class Ledger {
 public:
  explicit Ledger(LedgerConfig config = {}) : config_(config) {}

  TokenRecord mint(Address owner, TokenId id, std::uint64_t initial_limit,
                   PostCapPolicy policy = {});

  // Owner-only. L' must be >= k; L' == 0 on a capped token needs
  // allow_unbounded_reset.
  TokenRecord set_transfer_limit(Address caller, TokenId id, std::uint64_t new_limit);

  TokenRecord transfer(Address from, Address to, TokenId id);

  void burn(Address caller, TokenId id);

  // Fires the token's post-cap policy. Transfers already do this eagerly, so
  // the only way to reach an Active token with k == L > 0 is lowering the
  // limit to the current count.
  TokenRecord apply_post_cap_policy(TokenId id);

  // Governance release of a locked LockAndRelease token: L += grant and the
  // token becomes Active again. Without an explicit grant the policy's
  // unlock_grant is used.
  TokenRecord unlock(TokenId id, std::optional<std::uint64_t> grant = std::nullopt);

  std::uint64_t transfer_count_of(TokenId id) const;
  std::uint64_t transfer_limit_of(TokenId id) const;
  Remaining remaining(TokenId id) const;

  const TokenRecord& record(TokenId id) const;
  const TokenRecord* find(TokenId id) const noexcept;

  const std::map<TokenId, TokenRecord>& tokens() const noexcept { return tokens_; }
  std::span<const LedgerEvent> events() const noexcept { return log_; }
  const LedgerConfig& config() const noexcept { return config_; }

  friend bool operator==(const Ledger&, const Ledger&) = default;

 private:
  friend Ledger replay(std::span<const LedgerEvent>, LedgerConfig);

  TokenRecord& existing(TokenId id);
  TokenRecord& active_owned(Address caller, TokenId id);
  void emit(EventPayload payload);
  void settle(TokenRecord& token);

  LedgerConfig config_;
  std::map<TokenId, TokenRecord> tokens_;
  std::vector<LedgerEvent> log_;
  std::uint64_t next_seq_ = 1;
};

// Rebuilds a ledger from its event log. Every event is checked against the
// state produced by the events before it; the first illegal one raises
// ReplayError with its index. A log that stops between a transfer and its
// count/policy follow-ups is rejected at index events.size().
Ledger replay(std::span<const LedgerEvent> events, LedgerConfig config = {});

}  // namespace counted::ledger
