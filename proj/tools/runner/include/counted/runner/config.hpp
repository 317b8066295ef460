#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "counted/costs.hpp"

namespace counted::runner {

struct EconParams {
  double base_value = 10.0;
  std::uint64_t limit = 20;
  std::vector<std::uint64_t> limits{5, 10, 20, 50};
};

struct MarketParams {
  double base_value = 10.0;
  double inflation = 0.3;
  double trade_cost = 0.005;
  std::vector<std::uint64_t> limits{5, 10, 15, 20, 50};
};

struct CreditParams {
  double ltv = 0.7;
  double initial_value = 10.0;
  double penalty = 0.05;
  std::vector<std::uint64_t> limits{4, 6, 10, 20, 50};
  std::vector<std::uint64_t> cascade_limits{10, 50};
  std::vector<double> shocks{0.1, 0.2, 0.3, 0.4, 0.5};
};

struct PopgenParams {
  std::uint64_t n_tokens = 10'000;
  std::uint64_t max_count = 1000;
  std::vector<std::uint64_t> caps{3, 5, 10, 20, 50, 100};
  std::uint64_t shards = 4;
};

struct CostsParams {
  costs::BypassParams bypass;
  std::uint64_t max_transfers = 300;
};

struct FuzzParams {
  std::uint64_t ops = 100'000;
  std::uint64_t tokens = 1000;
  std::uint64_t max_limit = 20;
};

struct ScenarioConfig {
  std::string experiment = "all";
  std::uint64_t seed = 42;
  std::filesystem::path out = "out";
  EconParams econ;
  MarketParams market;
  CreditParams credit;
  PopgenParams popgen;
  CostsParams costs;
  FuzzParams fuzz;
};

// JSON object; missing keys keep their defaults, unknown keys are a
// ParseError naming the dotted path.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);

// Checks ranges across all blocks; throws DomainError.
void validate(const ScenarioConfig& config);

// Flattened "block.key" -> value text, sorted, without the output path.
std::vector<std::pair<std::string, std::string>> echo(const ScenarioConfig& config);

}  // namespace counted::runner
