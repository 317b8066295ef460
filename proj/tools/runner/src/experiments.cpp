#include "counted/runner/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <initializer_list>

#include "counted/costs.hpp"
#include "counted/credit.hpp"
#include "counted/econ.hpp"
#include "counted/market.hpp"
#include "counted/popgen.hpp"
#include "counted/runner/csv.hpp"
#include "counted/runner/manifest.hpp"

namespace counted::runner {

namespace {

constexpr std::uint64_t kFuzzStream = 0x6675'7a7a;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return out;
}

market::WashScenario wash(const ScenarioConfig& c, std::uint64_t limit) {
  return {limit, c.market.base_value, c.market.inflation, c.market.trade_cost};
}

credit::LeverageScenario leverage(const ScenarioConfig& c, std::uint64_t limit) {
  return {limit, c.credit.ltv, c.credit.initial_value};
}

void merge(Outputs& into, Outputs&& from) {
  for (auto& [name, text] : from) into[name] = std::move(text);
}

}  // namespace

Outputs econ_tables(const ScenarioConfig& c) {
  Outputs out;
  const auto models = econ::reference_models();

  CsvWriter t4({"remaining", "ratio", "linear", "concave", "convex", "threshold"});
  for (const auto& row : econ::valuation_table(c.econ.base_value, c.econ.limit, models)) {
    t4.cell(row.remaining).cell(row.ratio, 2);
    for (double v : row.values) t4.cell(v, 2);
    t4.end_row();
  }
  out["table4.csv"] = t4.str();

  std::vector<std::string> header{"stage"};
  for (auto l : c.econ.limits) header.push_back("limit_" + std::to_string(l));
  CsvWriter t5(header);
  for (const auto& row : econ::marginal_cost_table(c.econ.base_value, c.econ.limits)) {
    t5.cell(econ::stage_name(row.stage));
    for (double p : row.percent) t5.cell(p, 1);
    t5.end_row();
  }
  out["table5.csv"] = t5.str();

  CsvWriter curves({"model", "limit", "remaining", "value"});
  auto curve = [&](const econ::PremiumModel& m, std::uint64_t limit) {
    for (std::uint64_t rem = limit + 1; rem-- > 0;) {
      curves.cell(econ::model_name(m)).cell(limit).cell(rem);
      curves.cell(econ::value(m, {c.econ.base_value, limit - rem, limit}), 4).end_row();
    }
  };
  for (const auto& m : models) curve(m, c.econ.limit);
  for (auto l : c.econ.limits) {
    if (l != c.econ.limit) curve(econ::Power{0.5}, l);
  }
  out["fig5.csv"] = curves.str();

  CsvWriter mc({"limit", "transfer", "remaining_before", "cost_pct"});
  for (auto l : c.econ.limits) {
    for (std::uint64_t k = 0; k < l; ++k) {
      const double cost = econ::marginal_cost(econ::Power{0.5}, k, l, c.econ.base_value);
      mc.cell(l).cell(k + 1).cell(l - k);
      mc.cell(c.econ.base_value > 0 ? 100.0 * cost / c.econ.base_value : 0.0, 3).end_row();
    }
  }
  out["marginal_cost.csv"] = mc.str();
  return out;
}

Outputs market_table(const ScenarioConfig& c) {
  Outputs out;
  struct Block {
    std::uint64_t limit;
    std::initializer_list<std::uint64_t> trades;
  };
  const Block blocks[] = {{5, {1, 3, 5}}, {10, {3, 5, 10}}, {20, {5, 9, 15}}};

  CsvWriter t6({"limit", "n", "nocap_profit", "fair_value", "max_sell", "cap_profit", "deterred"});
  for (const auto& b : blocks) {
    const auto s = wash(c, b.limit);
    for (auto n : b.trades) {
      const double cap = market::profit_cap(n, s);
      t6.cell(b.limit).cell(n).cell(market::profit_nocap(n, s), 2);
      t6.cell(market::fair_value_after(n, s), 2).cell(market::max_sell(n, s), 2);
      t6.cell(cap, 2).cell(cap <= 0.0 ? "Yes" : "No").end_row();
    }
  }
  out["table6.csv"] = t6.str();

  CsvWriter f6({"limit", "n", "profit_cap", "profit_nocap"});
  CsvWriter f7({"limit", "n", "fair_value", "max_sell", "profit_cap"});
  for (auto l : c.market.limits) {
    for (const auto& p : market::trajectory(wash(c, l))) {
      f6.cell(l).cell(p.trades).cell(p.profit_cap, 4).cell(p.profit_nocap, 4).end_row();
      f7.cell(l).cell(p.trades).cell(p.fair_value, 4).cell(p.max_sell, 4);
      f7.cell(p.profit_cap, 4).end_row();
    }
  }
  out["fig6.csv"] = f6.str();
  out["fig7.csv"] = f7.str();

  CsvWriter f6b({"limit", "break_even"});
  const std::uint64_t top =
      c.market.limits.empty() ? 50 : *std::max_element(c.market.limits.begin(), c.market.limits.end());
  for (std::uint64_t l = 1; l <= top; ++l) {
    const auto n = market::break_even(wash(c, l));
    f6b.cell(l).cell(n ? std::to_string(*n) : std::string("never")).end_row();
  }
  out["fig6b.csv"] = f6b.str();
  return out;
}

Outputs leverage_table(const ScenarioConfig& c) {
  Outputs out;
  CsvWriter t7({"limit", "max_depth", "max_exposure", "leverage", "reduction_pct"});
  for (auto l : c.credit.limits) {
    const auto s = leverage(c, l);
    const auto depth = credit::max_depth(l);
    const double lev = credit::max_leverage(s);
    t7.cell(l).cell(depth ? std::to_string(*depth) : std::string("unbounded"));
    t7.cell(c.credit.initial_value * lev, 2).cell(lev, 2);
    t7.cell(100.0 * credit::reduction_vs_unbounded(s), 1).end_row();
  }
  out["table7.csv"] = t7.str();

  CsvWriter curve({"depth", "leverage", "unbounded"});
  const double unbounded = credit::unbounded_leverage(c.credit.ltv);
  for (std::uint64_t d = 0; d <= 25; ++d) {
    curve.cell(d).cell(credit::max_leverage(leverage(c, 2 * d)), 4).cell(unbounded, 4).end_row();
  }
  out["leverage_curve.csv"] = curve.str();
  return out;
}

Outputs cascade_curves(const ScenarioConfig& c) {
  CsvWriter f9({"limit", "shock", "positions", "cascade_depth", "aggregate_loss"});
  for (auto l : c.credit.cascade_limits) {
    const auto chain = credit::build_chain(leverage(c, l));
    for (double p : c.credit.shocks) {
      const auto r = credit::cascade(chain, p, c.credit.penalty);
      f9.cell(l).cell(p, 2).cell(static_cast<std::uint64_t>(chain.positions.size()));
      f9.cell(static_cast<std::uint64_t>(r.cascade_depth)).cell(r.aggregate_loss, 4).end_row();
    }
  }
  return {{"fig9.csv", f9.str()}};
}

Outputs popgen_tables(const ScenarioConfig& c) {
  Outputs out;
  CsvWriter t2({"collection", "exponent", "mean", "median", "p90", "p95", "p99"});
  std::vector<std::string> header{"collection"};
  for (auto cap : c.popgen.caps) header.push_back("cap_" + std::to_string(cap));
  CsvWriter t3(header);

  std::uint64_t stream = 1;
  for (auto col : popgen::kCollections) {
    const auto fit = popgen::calibrate(popgen::reference_targets(col), c.popgen.max_count, col,
                                       c.popgen.n_tokens);
    const auto counts = popgen::sample(fit.profile, popgen::derive_seed(c.seed, stream++),
                                       static_cast<unsigned>(c.popgen.shards));
    const auto s = popgen::stats(counts);
    const std::string name(popgen::to_string(col));
    t2.cell(name).cell(fit.profile.exponent, 3).cell(s.mean, 2);
    t2.cell(s.median).cell(s.p90).cell(s.p95).cell(s.p99).end_row();

    t3.cell(name);
    for (double pct : popgen::exceed_fraction(counts, c.popgen.caps)) t3.cell(pct, 1);
    t3.end_row();

    CsvWriter hist({"count", "frequency"});
    for (const auto& [count, freq] : popgen::histogram(counts)) hist.cell(count).cell(freq, 6).end_row();
    out["fig3_" + lower(name) + ".csv"] = hist.str();
  }
  out["table2.csv"] = t2.str();
  out["table3.csv"] = t3.str();
  return out;
}

Outputs costs_tables(const ScenarioConfig& c) {
  Outputs out;
  const auto table = costs::default_gas_table();
  CsvWriter t8({"operation", "erc721", "erc7634", "overhead_pct"});
  for (auto op : costs::kGasOps) {
    const auto& e = table.at(op);
    t8.cell(costs::display_name(op));
    t8.cell(e.baseline ? std::to_string(*e.baseline) : std::string("--")).cell(e.counted);
    t8.cell(e.baseline ? fixed(costs::overhead(table, op), 1) : std::string("N/A")).end_row();
  }
  out["table8.csv"] = t8.str();

  const auto& p = c.costs.bypass;
  CsvWriter f10a({"transfers", "direct_gas", "wrapper_gas", "direct_usd", "wrapper_usd"});
  for (std::uint64_t n = 0; n <= c.costs.max_transfers; ++n) {
    const auto direct = costs::direct_cost(n, p);
    const auto bypass = costs::bypass_cost(n, p);
    f10a.cell(n).cell(direct).cell(bypass.gas);
    f10a.cell(costs::gas_to_eth(direct, p) * p.eth_price_usd, 2).cell(bypass.usd, 2).end_row();
  }
  out["fig10a.csv"] = f10a.str();

  CsvWriter f10b({"key", "name", "extra_gas", "resistance_pct", "composability_pct"});
  for (const auto& m : costs::mitigation_catalog()) {
    f10b.cell(m.key).cell(m.name).cell(m.extra_gas);
    f10b.cell(m.resistance_pct ? fixed(*m.resistance_pct, 0) : std::string());
    f10b.cell(m.composability_pct ? fixed(*m.composability_pct, 0) : std::string()).end_row();
  }
  out["fig10b.csv"] = f10b.str();
  return out;
}

Outputs ledger_fuzz(const ScenarioConfig& c, FuzzReport* report) {
  const FuzzOptions opts{c.fuzz.ops, c.fuzz.tokens, c.fuzz.max_limit,
                         popgen::derive_seed(c.seed, kFuzzStream)};
  const FuzzReport r = run_fuzz(opts);
  if (report) *report = r;
  return {{"fuzz_report.csv", to_csv(r)}};
}

RunResult compute(std::string_view sub, const ScenarioConfig& c) {
  validate(c);
  RunResult result;
  const bool all = sub == "all";
  bool known = all;
  auto want = [&](std::string_view name) {
    if (all || sub == name) {
      known = true;
      return true;
    }
    return false;
  };
  if (want("ledger-fuzz")) {
    FuzzReport r;
    merge(result.outputs, ledger_fuzz(c, &r));
    result.fuzz = r;
  }
  if (want("econ-tables")) merge(result.outputs, econ_tables(c));
  if (want("market-table")) merge(result.outputs, market_table(c));
  if (want("leverage-table")) merge(result.outputs, leverage_table(c));
  if (want("cascade")) merge(result.outputs, cascade_curves(c));
  if (want("popgen-tables")) merge(result.outputs, popgen_tables(c));
  if (want("costs-tables")) merge(result.outputs, costs_tables(c));
  if (!known) throw Error(Errc::UnknownOperation, "unknown subcommand " + std::string(sub));
  return result;
}

RunResult run(std::string_view sub, const ScenarioConfig& c) {
  RunResult result = compute(sub, c);
  std::filesystem::create_directories(c.out);
  for (const auto& [name, text] : result.outputs) {
    std::ofstream f(c.out / name, std::ios::binary | std::ios::trunc);
    f << text;
    if (!f) throw Error(Errc::DomainError, "cannot write " + (c.out / name).string());
  }
  write_manifest(c.out, sub, c, result.outputs);
  if (result.fuzz && !result.fuzz->ok()) {
    throw Error(Errc::InvalidHistory, "ledger fuzz found violations; see fuzz_report.csv");
  }
  return result;
}

}  // namespace counted::runner
