#include "counted/costs.hpp"

#include <algorithm>
#include <cctype>

namespace counted::costs {

std::string_view to_string(GasOp op) noexcept {
  switch (op) {
    case GasOp::Mint: return "mint";
    case GasOp::MintWithLimit: return "mint_with_limit";
    case GasOp::TransferFirst: return "transfer_first";
    case GasOp::TransferNearCap: return "transfer_near_cap";
    case GasOp::ApproveTransfer: return "approve_transfer";
    case GasOp::SetLimit: return "set_limit";
  }
  return "mint";
}

std::string_view display_name(GasOp op) noexcept {
  switch (op) {
    case GasOp::Mint: return "Mint";
    case GasOp::MintWithLimit: return "Mint + setLimit";
    case GasOp::TransferFirst: return "Transfer (first)";
    case GasOp::TransferNearCap: return "Transfer (near cap)";
    case GasOp::ApproveTransfer: return "Approve + transfer";
    case GasOp::SetLimit: return "setTransferLimit";
  }
  return "Mint";
}

GasOp gas_op_from_string(std::string_view name) {
  for (auto op : kGasOps) {
    if (to_string(op) == name) return op;
  }
  throw Error(Errc::UnknownOperation, "unknown gas operation '" + std::string(name) + "'");
}

GasTable default_gas_table() {
  GasTable t;
  t.at(GasOp::Mint) = {51'316, 51'316};
  t.at(GasOp::MintWithLimit) = {std::nullopt, 74'812};
  t.at(GasOp::TransferFirst) = {48'947, 54'283};
  t.at(GasOp::TransferNearCap) = {48'947, 54'471};
  t.at(GasOp::ApproveTransfer) = {73'221, 78'557};
  t.at(GasOp::SetLimit) = {std::nullopt, 23'496};
  return t;
}

double overhead(const GasTable& table, GasOp op) {
  const GasEntry& e = table.at(op);
  if (!e.baseline) {
    throw Error(Errc::NotApplicable, std::string(to_string(op)) + " has no baseline cost");
  }
  const double base = static_cast<double>(*e.baseline);
  return (static_cast<double>(e.counted) - base) / base * 100.0;
}

double overhead(const GasTable& table, std::string_view op) {
  return overhead(table, gas_op_from_string(op));
}

void validate(const BypassParams& p) {
  if (p.deploy_gas == 0 || p.deposit_gas == 0 || p.wrapper_transfer_gas == 0 ||
      p.direct_transfer_gas == 0 || !(p.gas_price_gwei > 0.0) || !(p.eth_price_usd > 0.0)) {
    throw Error(Errc::DomainError, "bypass parameters must be positive");
  }
}

double gas_to_eth(std::uint64_t gas, const BypassParams& p) noexcept {
  return static_cast<double>(gas) * p.gas_price_gwei * 1e-9;
}

BypassCost bypass_cost(std::uint64_t transfers, const BypassParams& p) {
  validate(p);
  BypassCost c;
  c.gas = p.deploy_gas + p.deposit_gas + transfers * p.wrapper_transfer_gas;
  c.eth = gas_to_eth(c.gas, p);
  c.usd = c.eth * p.eth_price_usd;
  c.deploy_usd = gas_to_eth(p.deploy_gas, p) * p.eth_price_usd;
  return c;
}

std::uint64_t direct_cost(std::uint64_t transfers, const BypassParams& p) noexcept {
  return transfers * p.direct_transfer_gas;
}

std::optional<std::uint64_t> break_even_transfers(const BypassParams& p) {
  validate(p);
  if (p.wrapper_transfer_gas >= p.direct_transfer_gas) return std::nullopt;
  const std::uint64_t fixed = p.deploy_gas + p.deposit_gas;
  const std::uint64_t margin = p.direct_transfer_gas - p.wrapper_transfer_gas;
  return (fixed + margin - 1) / margin;
}

std::vector<Mitigation> mitigation_catalog() {
  return {
      {"allowlist", "Recipient allowlist", 8'200, std::nullopt, std::nullopt},
      {"soulbound-detection", "Soulbound wrapper detection", 12'400, std::nullopt, std::nullopt},
      {"ERC-6982", "ERC-6982 lockable integration", 15'600, 85.0, 55.0},
      {"cooldown", "Transfer cooldown period", 5'100, std::nullopt, std::nullopt},
      {"baseline", "No mitigation (baseline)", 0, std::nullopt, std::nullopt},
  };
}

namespace {

bool iequals(std::string_view a, std::string_view b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](char x, char y) {
    return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
  });
}

}  // namespace

Mitigation lookup_mitigation(std::string_view key_or_name) {
  for (auto& m : mitigation_catalog()) {
    if (iequals(m.key, key_or_name) || iequals(m.name, key_or_name)) return m;
  }
  throw Error(Errc::UnknownOperation, "unknown mitigation '" + std::string(key_or_name) + "'");
}

}  // namespace counted::costs
