#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "counted/error.hpp"

// Gas model for counted transfers and the wrapper bypass.
//
// Gas figures are model constants, not measurements.
namespace counted::costs {

enum class GasOp : std::uint8_t {
  Mint,
  MintWithLimit,
  TransferFirst,
  TransferNearCap,
  ApproveTransfer,
  SetLimit,
};

inline constexpr std::array<GasOp, 6> kGasOps{GasOp::Mint,          GasOp::MintWithLimit,
                                              GasOp::TransferFirst, GasOp::TransferNearCap,
                                              GasOp::ApproveTransfer, GasOp::SetLimit};

std::string_view to_string(GasOp op) noexcept;      // identifier, e.g. "transfer_first"
std::string_view display_name(GasOp op) noexcept;   // table label, e.g. "Transfer (first)"
GasOp gas_op_from_string(std::string_view name);    // throws UnknownOperation

struct GasEntry {
  std::optional<std::uint64_t> baseline;  // plain ERC-721; absent when not offered
  std::uint64_t counted = 0;              // ERC-7634
};

struct GasTable {
  std::array<GasEntry, kGasOps.size()> entries;

  const GasEntry& at(GasOp op) const { return entries[static_cast<std::size_t>(op)]; }
  GasEntry& at(GasOp op) { return entries[static_cast<std::size_t>(op)]; }
};

GasTable default_gas_table();

// (counted - baseline) / baseline * 100. NotApplicable when the baseline
// standard has no such operation.
double overhead(const GasTable& table, GasOp op);
double overhead(const GasTable& table, std::string_view op);

struct BypassParams {
  std::uint64_t deploy_gas = 450'000;
  std::uint64_t deposit_gas = 54'283;
  std::uint64_t wrapper_transfer_gas = 52'001;
  std::uint64_t direct_transfer_gas = 54'283;
  double gas_price_gwei = 30.0;
  double eth_price_usd = 40.0 / (450'000 * 30e-9);
};

void validate(const BypassParams& p);

struct BypassCost {
  std::uint64_t gas = 0;
  double eth = 0.0;
  double usd = 0.0;
  double deploy_usd = 0.0;  // the wrapper deployment alone
};

double gas_to_eth(std::uint64_t gas, const BypassParams& p) noexcept;

// G_deploy + G_deposit + n * G_wrapper_transfer
BypassCost bypass_cost(std::uint64_t transfers, const BypassParams& p);

// n * G_direct
std::uint64_t direct_cost(std::uint64_t transfers, const BypassParams& p) noexcept;

// Smallest N with bypass_cost(N) <= direct_cost(N); nullopt ("never") when a
// wrapper transfer costs at least as much as a direct one.
std::optional<std::uint64_t> break_even_transfers(const BypassParams& p);

struct Mitigation {
  std::string key;
  std::string name;
  std::uint64_t extra_gas = 0;
  std::optional<double> resistance_pct;
  std::optional<double> composability_pct;
};

std::vector<Mitigation> mitigation_catalog();

// Case-insensitive match on key or name; throws UnknownOperation.
Mitigation lookup_mitigation(std::string_view key_or_name);

}  // namespace counted::costs
