#include "counted/ledger.hpp"

#include <limits>
#include <string>
#include <utility>

namespace counted::ledger {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string token_str(TokenId id) { return "token " + std::to_string(id); }

}  // namespace

std::string_view to_string(PolicyKind kind) noexcept {
  switch (kind) {
    case PolicyKind::SoulboundConvert: return "SoulboundConvert";
    case PolicyKind::AutoBurn: return "AutoBurn";
    case PolicyKind::LockAndRelease: return "LockAndRelease";
    case PolicyKind::ProvenanceFreeze: return "ProvenanceFreeze";
  }
  return "ProvenanceFreeze";
}

std::optional<PolicyKind> policy_from_string(std::string_view name) noexcept {
  for (auto kind : {PolicyKind::SoulboundConvert, PolicyKind::AutoBurn,
                    PolicyKind::LockAndRelease, PolicyKind::ProvenanceFreeze}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

std::string_view to_string(TokenStatus status) noexcept {
  switch (status) {
    case TokenStatus::Active: return "Active";
    case TokenStatus::Burned: return "Burned";
    case TokenStatus::Settled: return "Settled";
  }
  return "Active";
}

TokenId LedgerEvent::token_id() const noexcept {
  return std::visit([](const auto& e) { return e.token_id; }, payload);
}

std::string_view LedgerEvent::kind() const noexcept {
  return std::visit(
      overloaded{
          [](const Minted&) { return std::string_view{"Minted"}; },
          [](const Transferred&) { return std::string_view{"Transferred"}; },
          [](const TransferCountIncreased&) {
            return std::string_view{"TransferCountIncreased"};
          },
          [](const TransferLimitUpdated&) {
            return std::string_view{"TransferLimitUpdated"};
          },
          [](const Burned&) { return std::string_view{"Burned"}; },
          [](const PolicyTriggered&) { return std::string_view{"PolicyTriggered"}; },
      },
      payload);
}

// ---------------------------------------------------------------------------
// Live operations

TokenRecord Ledger::mint(Address owner, TokenId id, std::uint64_t initial_limit,
                         PostCapPolicy policy) {
  if (owner.is_zero()) {
    throw Error(Errc::ZeroAddressOwner, "cannot mint " + token_str(id) + " to the zero address");
  }
  if (tokens_.contains(id)) {
    throw Error(Errc::DuplicateToken, token_str(id) + " already exists");
  }
  if (policy.kind != PolicyKind::LockAndRelease) policy.unlock_grant.reset();

  TokenRecord rec{id, owner, 0, initial_limit, TokenStatus::Active, policy};
  tokens_.emplace(id, rec);
  emit(Minted{id, owner, initial_limit, policy});
  return rec;
}

TokenRecord Ledger::set_transfer_limit(Address caller, TokenId id, std::uint64_t new_limit) {
  TokenRecord& token = active_owned(caller, id);
  if (new_limit == 0) {
    if (!token.unbounded() && !config_.allow_unbounded_reset) {
      throw Error(Errc::UnboundedResetForbidden,
                  "removing the cap of " + token_str(id) + " is disabled");
    }
  } else if (new_limit < token.transfer_count) {
    throw Error(Errc::LimitBelowCount,
                "limit " + std::to_string(new_limit) + " is below transfer count " +
                    std::to_string(token.transfer_count));
  }
  token.transfer_limit = new_limit;
  emit(TransferLimitUpdated{id, new_limit});
  return token;
}

TokenRecord Ledger::transfer(Address from, Address to, TokenId id) {
  TokenRecord& token = existing(id);
  if (from.is_zero() || to.is_zero()) {
    throw Error(Errc::ZeroAddress, "native transfers need non-zero endpoints");
  }
  if (token.status != TokenStatus::Active) {
    throw Error(Errc::TokenNotActive, token_str(id) + " is " +
                                          std::string(to_string(token.status)));
  }
  if (token.owner != from) {
    throw Error(Errc::NotOwner, "sender does not own " + token_str(id));
  }
  // Pre-transfer enforcement.
  if (token.transfer_limit > 0 && token.transfer_count >= token.transfer_limit) {
    throw Error(Errc::TransferLimitReached, "transfer limit reached");
  }

  token.owner = to;
  emit(Transferred{id, from, to});

  // Post-transfer accounting.
  ++token.transfer_count;
  emit(TransferCountIncreased{id, token.transfer_count});

  if (token.at_cap()) settle(token);
  return token;
}

void Ledger::burn(Address caller, TokenId id) {
  TokenRecord& token = active_owned(caller, id);
  token.status = TokenStatus::Burned;
  emit(Burned{id});
}

TokenRecord Ledger::apply_post_cap_policy(TokenId id) {
  TokenRecord& token = existing(id);
  if (token.status != TokenStatus::Active) {
    throw Error(Errc::TokenNotActive, token_str(id) + " is " +
                                          std::string(to_string(token.status)));
  }
  if (!token.at_cap()) {
    throw Error(Errc::CapNotReached, token_str(id) + " has not exhausted its budget");
  }
  settle(token);
  return token;
}

TokenRecord Ledger::unlock(TokenId id, std::optional<std::uint64_t> grant) {
  TokenRecord& token = existing(id);
  if (token.status != TokenStatus::Settled ||
      token.policy.kind != PolicyKind::LockAndRelease) {
    throw Error(Errc::TokenNotActive, token_str(id) + " is not a locked LockAndRelease token");
  }
  const std::uint64_t amount = grant.value_or(token.policy.unlock_grant.value_or(0));
  if (amount == 0 ||
      amount > std::numeric_limits<std::uint64_t>::max() - token.transfer_limit) {
    throw Error(Errc::InvalidGrant, "unlock of " + token_str(id) + " needs a positive grant");
  }
  token.transfer_limit += amount;
  token.status = TokenStatus::Active;
  emit(TransferLimitUpdated{id, token.transfer_limit});
  return token;
}

std::uint64_t Ledger::transfer_count_of(TokenId id) const { return record(id).transfer_count; }

std::uint64_t Ledger::transfer_limit_of(TokenId id) const { return record(id).transfer_limit; }

Remaining Ledger::remaining(TokenId id) const {
  const TokenRecord& token = record(id);
  if (token.unbounded()) return std::nullopt;
  return token.transfer_limit - token.transfer_count;
}

const TokenRecord& Ledger::record(TokenId id) const {
  if (const TokenRecord* token = find(id)) return *token;
  throw Error(Errc::UnknownToken, token_str(id) + " does not exist");
}

const TokenRecord* Ledger::find(TokenId id) const noexcept {
  auto it = tokens_.find(id);
  return it == tokens_.end() ? nullptr : &it->second;
}

TokenRecord& Ledger::existing(TokenId id) {
  auto it = tokens_.find(id);
  if (it == tokens_.end()) {
    throw Error(Errc::UnknownToken, token_str(id) + " does not exist");
  }
  return it->second;
}

TokenRecord& Ledger::active_owned(Address caller, TokenId id) {
  TokenRecord& token = existing(id);
  if (token.status != TokenStatus::Active) {
    throw Error(Errc::TokenNotActive, token_str(id) + " is " +
                                          std::string(to_string(token.status)));
  }
  if (caller.is_zero() || token.owner != caller) {
    throw Error(Errc::NotAuthorized, "caller does not own " + token_str(id));
  }
  return token;
}

void Ledger::emit(EventPayload payload) {
  log_.push_back(LedgerEvent{next_seq_++, std::move(payload)});
}

void Ledger::settle(TokenRecord& token) {
  token.status = token.policy.kind == PolicyKind::AutoBurn ? TokenStatus::Burned
                                                           : TokenStatus::Settled;
  emit(PolicyTriggered{token.id, token.policy.kind});
}

// ---------------------------------------------------------------------------
// Replay

namespace {

// Follow-up events a transfer obliges the log to contain next.
struct Obligation {
  enum class Kind { None, Count, Policy } kind = Kind::None;
  TokenId token = 0;
  std::uint64_t count = 0;
};

class Replayer {
 public:
  explicit Replayer(LedgerConfig config) : config_(config) {}

  void apply(std::size_t index, const LedgerEvent& ev,
             std::map<TokenId, TokenRecord>& tokens) {
    index_ = index;
    tokens_ = &tokens;

    if (pending_.kind == Obligation::Kind::Count) {
      const auto* inc = std::get_if<TransferCountIncreased>(&ev.payload);
      if (!inc || inc->token_id != pending_.token || inc->count != pending_.count) {
        fail("expected TransferCountIncreased(" + std::to_string(pending_.token) + ", " +
             std::to_string(pending_.count) + ")");
      }
      TokenRecord& token = tokens.at(inc->token_id);
      token.transfer_count = inc->count;
      pending_ = token.at_cap() ? Obligation{Obligation::Kind::Policy, token.id, 0}
                                : Obligation{};
      return;
    }
    if (pending_.kind == Obligation::Kind::Policy) {
      const auto* trig = std::get_if<PolicyTriggered>(&ev.payload);
      if (!trig || trig->token_id != pending_.token) {
        fail("expected PolicyTriggered for token " + std::to_string(pending_.token));
      }
      pending_ = {};
      on_policy(*trig);
      return;
    }

    std::visit(overloaded{
                   [&](const Minted& e) { on_mint(e); },
                   [&](const Transferred& e) { on_transfer(e); },
                   [&](const TransferCountIncreased&) {
                     fail("TransferCountIncreased without a preceding Transferred");
                   },
                   [&](const TransferLimitUpdated& e) { on_limit(e); },
                   [&](const Burned& e) { on_burn(e); },
                   [&](const PolicyTriggered& e) { on_policy(e); },
               },
               ev.payload);
  }

  void finish(std::size_t size) const {
    if (pending_.kind != Obligation::Kind::None) {
      throw ReplayError(size, "event log ends inside a transfer of token " +
                                  std::to_string(pending_.token));
    }
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ReplayError(index_, "event " + std::to_string(index_) + ": " + why);
  }

  TokenRecord& token(TokenId id) const {
    auto it = tokens_->find(id);
    if (it == tokens_->end()) fail("unknown token " + std::to_string(id));
    return it->second;
  }

  TokenRecord& active(TokenId id) const {
    TokenRecord& t = token(id);
    if (t.status != TokenStatus::Active) fail("token " + std::to_string(id) + " is not active");
    return t;
  }

  void on_mint(const Minted& e) {
    if (e.owner.is_zero()) fail("mint to the zero address");
    if (tokens_->contains(e.token_id)) fail("duplicate mint of token " + std::to_string(e.token_id));
    tokens_->emplace(e.token_id, TokenRecord{e.token_id, e.owner, 0, e.limit,
                                             TokenStatus::Active, e.policy});
  }

  void on_transfer(const Transferred& e) {
    TokenRecord& t = active(e.token_id);
    if (e.from.is_zero() || e.to.is_zero()) fail("transfer with a zero endpoint");
    if (t.owner != e.from) fail("transfer from a non-owner");
    if (t.transfer_limit > 0 && t.transfer_count >= t.transfer_limit) {
      fail("transfer past the limit");
    }
    t.owner = e.to;
    pending_ = {Obligation::Kind::Count, t.id, t.transfer_count + 1};
  }

  void on_limit(const TransferLimitUpdated& e) {
    TokenRecord& t = token(e.token_id);
    if (t.status == TokenStatus::Settled && t.policy.kind == PolicyKind::LockAndRelease) {
      if (e.limit <= t.transfer_count) fail("unlock without a positive grant");
      t.transfer_limit = e.limit;
      t.status = TokenStatus::Active;
      return;
    }
    if (t.status != TokenStatus::Active) fail("limit update on an inactive token");
    if (e.limit == 0) {
      if (!t.unbounded() && !config_.allow_unbounded_reset) fail("forbidden unbounded reset");
    } else if (e.limit < t.transfer_count) {
      fail("limit below transfer count");
    }
    t.transfer_limit = e.limit;
  }

  void on_burn(const Burned& e) { active(e.token_id).status = TokenStatus::Burned; }

  void on_policy(const PolicyTriggered& e) {
    TokenRecord& t = active(e.token_id);
    if (!t.at_cap()) fail("policy triggered before the cap");
    if (t.policy.kind != e.policy) fail("policy does not match the minted policy");
    t.status = e.policy == PolicyKind::AutoBurn ? TokenStatus::Burned : TokenStatus::Settled;
  }

  LedgerConfig config_;
  Obligation pending_;
  std::size_t index_ = 0;
  std::map<TokenId, TokenRecord>* tokens_ = nullptr;
};

}  // namespace

Ledger replay(std::span<const LedgerEvent> events, LedgerConfig config) {
  Ledger out(config);
  Replayer replayer(config);
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (i > 0 && events[i].seq <= events[i - 1].seq) {
      throw ReplayError(i, "event " + std::to_string(i) + ": sequence number does not increase");
    }
    replayer.apply(i, events[i], out.tokens_);
  }
  replayer.finish(events.size());
  out.log_.assign(events.begin(), events.end());
  out.next_seq_ = events.empty() ? 1 : events.back().seq + 1;
  return out;
}

}  // namespace counted::ledger
