#include "counted/event_log.hpp"

#include <istream>
#include <ostream>
#include <set>

#include "json.hpp"

namespace counted::ledger {

namespace {

using nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void bad(const std::string& why) {
  throw Error(Errc::ParseError, "event log: " + why);
}

std::uint64_t field(const json& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end() || !it->is_number_unsigned()) {
    bad(std::string("missing or non-integer field '") + name + "'");
  }
  return it->get<std::uint64_t>();
}

PolicyKind policy_field(const json& obj) {
  auto it = obj.find("policy");
  if (it == obj.end() || !it->is_string()) bad("missing field 'policy'");
  auto kind = policy_from_string(it->get<std::string>());
  if (!kind) bad("unknown policy '" + it->get<std::string>() + "'");
  return *kind;
}

void expect_fields(const json& obj, std::initializer_list<const char*> allowed) {
  std::set<std::string_view> names(allowed.begin(), allowed.end());
  for (const auto& item : obj.items()) {
    if (!names.contains(item.key())) bad("unexpected field '" + item.key() + "'");
  }
}

}  // namespace

std::string to_line(const LedgerEvent& event) {
  json obj;
  obj["seq"] = event.seq;
  obj["kind"] = event.kind();
  obj["token_id"] = event.token_id();
  std::visit(overloaded{
                 [&](const Minted& e) {
                   obj["owner"] = e.owner.value;
                   obj["limit"] = e.limit;
                   obj["policy"] = to_string(e.policy.kind);
                   if (e.policy.unlock_grant) obj["unlock_grant"] = *e.policy.unlock_grant;
                 },
                 [&](const Transferred& e) {
                   obj["from"] = e.from.value;
                   obj["to"] = e.to.value;
                 },
                 [&](const TransferCountIncreased& e) { obj["count"] = e.count; },
                 [&](const TransferLimitUpdated& e) { obj["limit"] = e.limit; },
                 [](const Burned&) {},
                 [&](const PolicyTriggered& e) { obj["policy"] = to_string(e.policy); },
             },
             event.payload);
  return obj.dump();
}

LedgerEvent parse_line(std::string_view line) {
  json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (obj.is_discarded() || !obj.is_object()) bad("not a JSON object");
  auto kind_it = obj.find("kind");
  if (kind_it == obj.end() || !kind_it->is_string()) bad("missing field 'kind'");
  const std::string kind = kind_it->get<std::string>();

  LedgerEvent ev;
  ev.seq = field(obj, "seq");
  const TokenId id = field(obj, "token_id");

  if (kind == "Minted") {
    expect_fields(obj, {"seq", "kind", "token_id", "owner", "limit", "policy", "unlock_grant"});
    PostCapPolicy policy{policy_field(obj), {}};
    if (obj.contains("unlock_grant")) policy.unlock_grant = field(obj, "unlock_grant");
    ev.payload = Minted{id, Address{field(obj, "owner")}, field(obj, "limit"), policy};
  } else if (kind == "Transferred") {
    expect_fields(obj, {"seq", "kind", "token_id", "from", "to"});
    ev.payload = Transferred{id, Address{field(obj, "from")}, Address{field(obj, "to")}};
  } else if (kind == "TransferCountIncreased") {
    expect_fields(obj, {"seq", "kind", "token_id", "count"});
    ev.payload = TransferCountIncreased{id, field(obj, "count")};
  } else if (kind == "TransferLimitUpdated") {
    expect_fields(obj, {"seq", "kind", "token_id", "limit"});
    ev.payload = TransferLimitUpdated{id, field(obj, "limit")};
  } else if (kind == "Burned") {
    expect_fields(obj, {"seq", "kind", "token_id"});
    ev.payload = Burned{id};
  } else if (kind == "PolicyTriggered") {
    expect_fields(obj, {"seq", "kind", "token_id", "policy"});
    ev.payload = PolicyTriggered{id, policy_field(obj)};
  } else {
    bad("unknown kind '" + kind + "'");
  }
  return ev;
}

void write_log(std::ostream& out, std::span<const LedgerEvent> events) {
  for (const auto& ev : events) out << to_line(ev) << '\n';
}

std::vector<LedgerEvent> read_log(std::istream& in) {
  std::vector<LedgerEvent> events;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    events.push_back(parse_line(line));
  }
  return events;
}

}  // namespace counted::ledger
