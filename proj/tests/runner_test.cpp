#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "counted/runner/config.hpp"
#include "counted/runner/csv.hpp"
#include "counted/runner/experiments.hpp"
#include "counted/runner/fuzz.hpp"
#include "counted/runner/manifest.hpp"
#include "counted/runner/verify.hpp"

namespace counted::runner {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::current_path() / ("runner_test_" + name);
  fs::remove_all(dir);
  return dir;
}

ScenarioConfig quick(const fs::path& out) {
  ScenarioConfig c;
  c.out = out;
  c.fuzz.ops = 5000;
  c.fuzz.tokens = 100;
  return c;
}

TEST(Config, DefaultsMatchReferenceSetup) {
  const auto c = parse_config("{}");
  EXPECT_EQ(c.seed, 42u);
  EXPECT_DOUBLE_EQ(c.econ.base_value, 10.0);
  EXPECT_DOUBLE_EQ(c.market.trade_cost, 0.005);
  EXPECT_DOUBLE_EQ(c.market.inflation, 0.3);
  EXPECT_DOUBLE_EQ(c.credit.ltv, 0.7);
  EXPECT_EQ(c.popgen.caps, (std::vector<std::uint64_t>{3, 5, 10, 20, 50, 100}));
  EXPECT_EQ(c.market.limits, (std::vector<std::uint64_t>{5, 10, 15, 20, 50}));
}

TEST(Config, OverridesNestedBlocks) {
  const auto c = parse_config(R"({"seed": 7, "out": "x", "credit": {"ltv": 0.5, "shocks": [0.2]},
                                  "costs": {"deploy_gas": 1000}})");
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.out, fs::path("x"));
  EXPECT_DOUBLE_EQ(c.credit.ltv, 0.5);
  EXPECT_EQ(c.credit.shocks, std::vector<double>{0.2});
  EXPECT_EQ(c.costs.bypass.deploy_gas, 1000u);
  EXPECT_EQ(c.costs.bypass.direct_transfer_gas, 54'283u);
}

TEST(Config, RejectsUnknownKeysWithPath) {
  try {
    parse_config(R"({"market": {"inflaton": 0.3}})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ParseError);
    EXPECT_NE(std::string(e.what()).find("market.inflaton"), std::string::npos);
  }
  EXPECT_THROW(parse_config(R"({"sed": 1})"), Error);
}

TEST(Config, RejectsBadValues) {
  EXPECT_THROW(parse_config(R"({"seed": -1})"), Error);
  EXPECT_THROW(parse_config(R"({"seed": "42"})"), Error);
  EXPECT_THROW(parse_config(R"({"credit": {"ltv": 1.5}})"), Error);
  EXPECT_THROW(parse_config(R"({"econ": []})"), Error);
  EXPECT_THROW(parse_config("{"), Error);
}

TEST(Config, EchoOmitsOutputPath) {
  ScenarioConfig a;
  ScenarioConfig b;
  b.out = "elsewhere";
  EXPECT_EQ(echo(a), echo(b));
  bool has_ltv = false;
  for (const auto& [k, v] : echo(a)) {
    EXPECT_NE(k, "out");
    if (k == "credit.ltv") has_ltv = v == "0.7";
  }
  EXPECT_TRUE(has_ltv);
}

TEST(Csv, FixedNeverPrintsNegativeZero) {
  EXPECT_EQ(fixed(-0.001, 2), "0.00");
  EXPECT_EQ(fixed(-0.0, 1), "0.0");
  EXPECT_EQ(fixed(-0.83, 2), "-0.83");
  EXPECT_EQ(fixed(2.5, 0), "3");
  EXPECT_EQ(fixed(0.625, 2), "0.63");
  EXPECT_EQ(fixed(2.985, 2), "2.98");  // 2.98499... in binary
}

TEST(Csv, RoundTrip) {
  CsvWriter w({"a", "b"});
  w.cell("x").cell(1.5, 1).end_row();
  const auto t = parse_csv(w.str());
  ASSERT_EQ(t.header, (std::vector<std::string>{"a", "b"}));
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0][1], "1.5");
  EXPECT_THROW(CsvWriter({"a"}).cell("has,comma"), Error);
}

TEST(Experiments, ValuationTableText) {
  const auto out = econ_tables(ScenarioConfig{});
  const std::string& t4 = out.at("table4.csv");
  EXPECT_EQ(t4.substr(0, t4.find('\n', t4.find('\n') + 1) + 1),
            "remaining,ratio,linear,concave,convex,threshold\n20,1.00,10.00,10.00,10.00,10.00\n");
  EXPECT_NE(t4.find("\n15,0.75,7.50,8.66,5.63,6.88\n"), std::string::npos);
  // (0.25 - 0.2) / 0.8 lands just under 0.0625 in binary, so threshold reads 0.62.
  EXPECT_NE(t4.find("\n5,0.25,2.50,5.00,0.63,0.62\n"), std::string::npos);
}

TEST(Experiments, WashTableText) {
  const auto t6 = market_table(ScenarioConfig{}).at("table6.csv");
  EXPECT_NE(t6.find("\n10,5,2.98,7.07,9.19,-0.83,Yes\n"), std::string::npos);
  EXPECT_NE(t6.find("\n5,1,3.00,8.94,11.63,1.62,No\n"), std::string::npos);
}

TEST(Experiments, GasTableText) {
  const auto t8 = costs_tables(ScenarioConfig{}).at("table8.csv");
  EXPECT_NE(t8.find("\nTransfer (first),48947,54283,10.9\n"), std::string::npos);
  EXPECT_NE(t8.find("\nMint + setLimit,--,74812,N/A\n"), std::string::npos);
}

TEST(Experiments, UnknownSubcommand) {
  try {
    compute("tables", ScenarioConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnknownOperation);
  }
}

TEST(Fuzz, SmallRunIsClean) {
  const auto r = run_fuzz({20'000, 200, 20, 9});
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.ops, 20'000u);
  EXPECT_GT(r.transfers, 1000u);
  EXPECT_GT(r.caps_hit, 50u);
  EXPECT_EQ(run_fuzz({20'000, 200, 20, 9}).events, r.events);
}

TEST(Manifest, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(EndToEnd, AllIsDeterministicAndVerifies) {
  const auto a = fresh_dir("a");
  const auto b = fresh_dir("b");
  run("all", quick(a));
  auto cb = quick(b);
  cb.popgen.shards = 1;  // shard count must not matter
  run("all", cb);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const auto name = entry.path().filename();
    if (name == kManifestName) continue;  // echoes the shard count
    ASSERT_TRUE(fs::exists(b / name)) << name;
    EXPECT_EQ(slurp(entry.path()), slurp(b / name)) << name;
    ++files;
  }
  EXPECT_GE(files, 20u);

  const auto paper = verify(a, ToleranceProfile::Paper);
  EXPECT_TRUE(paper.ok()) << (paper.failures.empty() ? "" : paper.failures.front());
  const auto strict = verify(a, ToleranceProfile::Strict);
  EXPECT_TRUE(strict.ok()) << (strict.failures.empty() ? "" : strict.failures.front());
}

TEST(EndToEnd, VerifyNamesTamperedCell) {
  const auto dir = fresh_dir("tamper");
  run("all", quick(dir));
  std::string t6 = slurp(dir / "table6.csv");
  const std::string from = "10,5,2.98,7.07,9.19,-0.83,Yes";
  t6.replace(t6.find(from), from.size(), "10,5,2.98,7.07,9.19,-0.93,Yes");
  spit(dir / "table6.csv", t6);
  const auto report = verify(dir, ToleranceProfile::Paper);
  ASSERT_FALSE(report.ok());
  const auto& msg = report.failures.front();
  EXPECT_NE(msg.find("table6.csv"), std::string::npos) << msg;
  EXPECT_NE(msg.find("cap_profit"), std::string::npos) << msg;
  EXPECT_NE(msg.find("-0.83"), std::string::npos) << msg;
  EXPECT_NE(msg.find("-0.93"), std::string::npos) << msg;
}

TEST(EndToEnd, VerifyNamesMissingFile) {
  const auto dir = fresh_dir("missing");
  run("all", quick(dir));
  fs::remove(dir / "table7.csv");
  const auto report = verify(dir, ToleranceProfile::Paper);
  ASSERT_FALSE(report.ok());
  EXPECT_EQ(report.failures.front(), "table7.csv: missing");
}

TEST(EndToEnd, StrictCatchesChecksumDrift) {
  const auto dir = fresh_dir("drift");
  run("all", quick(dir));
  // A harmless edit that keeps every published cell within tolerance.
  std::string f5 = slurp(dir / "fig5.csv");
  f5 += "linear,20,0,0.0000\n";
  spit(dir / "fig5.csv", f5);
  EXPECT_TRUE(verify(dir, ToleranceProfile::Paper).ok());
  const auto strict = verify(dir, ToleranceProfile::Strict);
  ASSERT_FALSE(strict.ok());
  EXPECT_NE(strict.failures.front().find("fig5.csv"), std::string::npos);
}

#ifdef COUNTED_SIM_EXE
int sim(const std::string& args, const fs::path& err) {
  const std::string cmd = std::string(COUNTED_SIM_EXE) + " " + args + " >/dev/null 2>" + err.string();
  return std::system(cmd.c_str());
}

TEST(Cli, SubcommandWritesTableAndManifest) {
  const auto dir = fresh_dir("cli");
  ASSERT_EQ(sim("market-table --out " + dir.string(), dir.string() + ".err"), 0);
  EXPECT_TRUE(fs::exists(dir / "table6.csv"));
  const auto manifest = read_manifest(dir / kManifestName);
  EXPECT_EQ(manifest.at("subcommand"), "market-table");
  EXPECT_EQ(manifest.at("sha256.table6.csv"), sha256_hex(slurp(dir / "table6.csv")));
}

TEST(Cli, ConfigErrorIsOneLine) {
  const auto dir = fresh_dir("cli_bad");
  fs::create_directories(dir);
  spit(dir / "bad.json", R"({"popgen": {"tokens": 5}})");
  const auto err = dir / "stderr.txt";
  EXPECT_NE(sim("costs-tables --config " + (dir / "bad.json").string(), err), 0);
  const std::string text = slurp(err);
  EXPECT_EQ(text.rfind("error code=ParseError message=", 0), 0u) << text;
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
}

TEST(Cli, VerifyFailsOnEmptyDirectory) {
  const auto dir = fresh_dir("cli_empty");
  fs::create_directories(dir);
  EXPECT_NE(sim("verify --out " + dir.string(), dir / "err.txt"), 0);
  EXPECT_NE(slurp(dir / "err.txt").find("table2.csv: missing"), std::string::npos);
}
#endif

}  // namespace
}  // namespace counted::runner
