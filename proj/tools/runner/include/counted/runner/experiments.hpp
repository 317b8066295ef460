#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "counted/runner/config.hpp"
#include "counted/runner/fuzz.hpp"

namespace counted::runner {

inline constexpr std::string_view kManifestName = "manifest.txt";

// File name -> CSV text. Ordered so writes and manifests are stable.
using Outputs = std::map<std::string, std::string>;

Outputs econ_tables(const ScenarioConfig& c);      // table4, table5, fig5, marginal_cost
Outputs market_table(const ScenarioConfig& c);     // table6, fig6, fig6b, fig7
Outputs leverage_table(const ScenarioConfig& c);   // table7, leverage_curve
Outputs cascade_curves(const ScenarioConfig& c);   // fig9
Outputs popgen_tables(const ScenarioConfig& c);    // table2, table3, fig3_<collection>
Outputs costs_tables(const ScenarioConfig& c);     // table8, fig10a, fig10b
Outputs ledger_fuzz(const ScenarioConfig& c, FuzzReport* report = nullptr);  // fuzz_report

inline constexpr std::string_view kSubcommands[] = {
    "ledger-fuzz", "econ-tables", "market-table", "leverage-table",
    "cascade",     "popgen-tables", "costs-tables", "all"};

struct RunResult {
  Outputs outputs;
  std::optional<FuzzReport> fuzz;
};

// Computes a subcommand's outputs; throws UnknownOperation for bad names.
RunResult compute(std::string_view subcommand, const ScenarioConfig& c);

// compute() then writes every file plus the manifest into c.out. Throws
// Error(InvalidHistory) after writing if the fuzz run found a violation.
RunResult run(std::string_view subcommand, const ScenarioConfig& c);

}  // namespace counted::runner
