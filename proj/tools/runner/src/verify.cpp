#include "counted/runner/verify.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "counted/popgen.hpp"
#include "counted/runner/csv.hpp"
#include "counted/runner/experiments.hpp"
#include "counted/runner/manifest.hpp"

namespace counted::runner {

namespace {

using Failure = std::optional<std::string>;

struct Cell {
  std::string column;
  std::string expected;  // published text; its decimals set the comparison precision
  double tolerance;
};

std::optional<double> number(const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return v;
}

int decimals(const std::string& text) {
  const auto dot = text.find('.');
  return dot == std::string::npos ? 0 : static_cast<int>(text.size() - dot - 1);
}

double round_to(double v, int places) {
  const double scale = std::pow(10.0, places);
  return std::round(v * scale) / scale;
}

class Table {
 public:
  Table(std::string file, const CsvTable& csv) : file_(std::move(file)), csv_(csv) {}

  // Row whose key columns hold exactly the given texts.
  const std::vector<std::string>* row(const std::vector<std::pair<std::string, std::string>>& key,
                                      Failure& fail) const {
    for (const auto& r : csv_.rows) {
      bool hit = true;
      for (const auto& [col, text] : key) {
        const auto i = csv_.column(col);
        if (!i || *i >= r.size() || r[*i] != text) {
          hit = false;
          break;
        }
      }
      if (hit) return &r;
    }
    if (!fail) fail = file_ + " " + describe(key) + ": row missing";
    return nullptr;
  }

  std::optional<std::string> text(const std::vector<std::string>& r, const std::string& col,
                                  const std::string& where, Failure& fail) const {
    const auto i = csv_.column(col);
    if (!i || *i >= r.size()) {
      if (!fail) fail = file_ + " " + where + ": column " + col + " missing";
      return std::nullopt;
    }
    return r[*i];
  }

  std::optional<double> value(const std::vector<std::string>& r, const std::string& col,
                              const std::string& where, Failure& fail) const {
    auto t = text(r, col, where, fail);
    if (!t) return std::nullopt;
    auto v = number(*t);
    if (!v && !fail) fail = file_ + " " + where + " " + col + ": not a number: " + *t;
    return v;
  }

  void expect(const std::vector<std::pair<std::string, std::string>>& key,
              const std::vector<Cell>& cells, Failure& fail) const {
    if (fail) return;
    const auto* r = row(key, fail);
    if (!r) return;
    const std::string where = describe(key);
    for (const auto& c : cells) {
      auto got = text(*r, c.column, where, fail);
      if (!got) return;
      const auto want = number(c.expected);
      if (!want) {
        if (*got != c.expected) {
          fail = file_ + " " + where + " " + c.column + ": expected " + c.expected + ", got " + *got;
          return;
        }
        continue;
      }
      const auto v = number(*got);
      if (!v || std::abs(round_to(*v, decimals(c.expected)) - *want) > c.tolerance + 1e-9) {
        fail = file_ + " " + where + " " + c.column + ": expected " + c.expected + ", got " + *got;
        return;
      }
    }
  }

  const CsvTable& csv() const { return csv_; }
  const std::string& file() const { return file_; }

  static std::string describe(const std::vector<std::pair<std::string, std::string>>& key) {
    std::string s;
    for (const auto& [col, text] : key) {
      if (!s.empty()) s += ',';
      s += col + "=" + text;
    }
    return s;
  }

 private:
  std::string file_;
  const CsvTable& csv_;
};

Failure check_table2(const Table& t) {
  struct Row {
    const char* collection;
    const char* median;
    double p90;
  };
  const Row rows[] = {{"PFP", "1", 9}, {"Art", "1", 4}, {"Gaming", "2", 17},
                      {"Memberships", "1", 3}, {"Metaverse", "1", 6}};
  Failure fail;
  for (const auto& r : rows) {
    t.expect({{"collection", r.collection}}, {{"median", r.median, 0.0}}, fail);
    if (fail) return fail;
    const auto* row = t.row({{"collection", r.collection}}, fail);
    if (!row) return fail;
    const auto p90 = t.value(*row, "p90", r.collection, fail);
    if (!p90) return fail;
    if (std::abs(*p90 - r.p90) > 0.3 * r.p90 + 1e-9) {
      return t.file() + " collection=" + r.collection + " p90: expected " + fixed(r.p90, 0) +
             " within 30%, got " + fixed(*p90, 0);
    }
  }
  return fail;
}

Failure check_table3(const Table& t) {
  const char* caps[] = {"cap_3", "cap_5", "cap_10", "cap_20", "cap_50", "cap_100"};
  const std::map<std::string, std::vector<const char*>> published{
      {"PFP", {"24.1", "16.0", "8.8", "4.4", "1.7", "0.9"}},
      {"Art", {"13.1", "7.0", "2.9", "1.2", "0.3", "0.1"}},
      {"Gaming", {"32.4", "23.3", "14.2", "8.5", "4.3", "2.5"}},
      {"Memberships", {"6.0", "2.6", "0.8", "0.2", "0.0", "0.0"}},
      {"Metaverse", {"18.8", "11.7", "5.5", "2.5", "1.0", "0.4"}}};
  Failure fail;
  for (const auto& [name, values] : published) {
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < values.size(); ++i) cells.push_back({caps[i], values[i], 5.0});
    t.expect({{"collection", name}}, cells, fail);
    if (fail) return fail;
  }
  const char* order[] = {"Gaming", "PFP", "Metaverse", "Art", "Memberships"};
  for (const char* cap : caps) {
    double prev = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
      const auto* row = t.row({{"collection", order[i]}}, fail);
      if (!row) return fail;
      const auto v = t.value(*row, cap, order[i], fail);
      if (!v) return fail;
      if (i > 0 && !(*v < prev || (*v == 0.0 && prev == 0.0))) {
        return t.file() + " " + cap + ": " + order[i - 1] + " must exceed " + order[i];
      }
      prev = *v;
    }
  }
  return fail;
}

Failure check_table4(const Table& t) {
  const std::vector<std::vector<const char*>> rows{
      {"20", "10.00", "10.00", "10.00", "10.00"}, {"18", "9.00", "9.49", "8.10", "8.75"},
      {"15", "7.50", "8.66", "5.63", "6.88"},     {"10", "5.00", "7.07", "2.50", "3.75"},
      {"5", "2.50", "5.00", "0.63", "0.63"},      {"2", "1.00", "3.16", "0.10", "0.50"},
      {"0", "0.00", "0.00", "0.00", "0.50"}};
  Failure fail;
  for (const auto& r : rows) {
    t.expect({{"remaining", r[0]}},
             {{"linear", r[1], 0.01}, {"concave", r[2], 0.01}, {"convex", r[3], 0.01},
              {"threshold", r[4], 0.01}},
             fail);
  }
  return fail;
}

Failure check_table5(const Table& t) {
  const std::vector<std::vector<const char*>> rows{
      {"First transfer", "10.6", "5.1", "2.5", "1.0"},
      {"Mid-point", "14.2", "10.1", "7.1", "4.5"},
      {"Last transfer", "44.7", "31.6", "22.4", "14.1"}};
  Failure fail;
  for (const auto& r : rows) {
    t.expect({{"stage", r[0]}},
             {{"limit_5", r[1], 0.1}, {"limit_10", r[2], 0.1}, {"limit_20", r[3], 0.1},
              {"limit_50", r[4], 0.1}},
             fail);
  }
  return fail;
}

Failure check_table6(const Table& t) {
  const std::vector<std::vector<const char*>> rows{
      {"5", "1", "3.00", "8.94", "11.63", "1.62", "No"},
      {"5", "3", "2.99", "6.33", "8.22", "-1.79", "Yes"},
      {"5", "5", "2.98", "0.00", "0.00", "-10.0", "Yes"},
      {"10", "3", "2.99", "8.37", "10.88", "0.86", "No"},
      {"10", "5", "2.98", "7.07", "9.19", "-0.83", "Yes"},
      {"10", "10", "2.95", "0.00", "0.00", "-10.1", "Yes"},
      {"20", "5", "2.98", "8.66", "11.26", "1.23", "No"},
      {"20", "9", "2.96", "7.42", "9.64", "-0.41", "Yes"},
      {"20", "15", "2.93", "5.00", "6.50", "-3.58", "Yes"}};
  Failure fail;
  for (const auto& r : rows) {
    t.expect({{"limit", r[0]}, {"n", r[1]}},
             {{"nocap_profit", r[2], 0.01}, {"fair_value", r[3], 0.01}, {"max_sell", r[4], 0.01},
              {"cap_profit", r[5], 0.01}, {"deterred", r[6], 0.0}},
             fail);
  }
  return fail;
}

Failure check_table7(const Table& t) {
  const std::vector<std::vector<const char*>> rows{{"4", "2", "21.90", "2.19", "34.2"},
                                                   {"6", "3", "25.33", "2.53", "24.0"},
                                                   {"10", "5", "29.41", "2.94", "11.7"},
                                                   {"20", "10", "32.67", "3.27", "1.9"},
                                                   {"50", "25", "33.33", "3.33", "0.0"}};
  Failure fail;
  for (const auto& r : rows) {
    t.expect({{"limit", r[0]}},
             {{"max_depth", r[1], 0.0}, {"max_exposure", r[2], 0.01}, {"leverage", r[3], 0.01},
              {"reduction_pct", r[4], 0.1}},
             fail);
  }
  return fail;
}

Failure check_table8(const Table& t) {
  const std::vector<std::vector<const char*>> rows{
      {"Mint", "51316", "51316", "0.0"},
      {"Mint + setLimit", "--", "74812", "N/A"},
      {"Transfer (first)", "48947", "54283", "10.9"},
      {"Transfer (near cap)", "48947", "54471", "11.3"},
      {"Approve + transfer", "73221", "78557", "7.3"},
      {"setTransferLimit", "--", "23496", "N/A"}};
  Failure fail;
  for (const auto& r : rows) {
    t.expect({{"operation", r[0]}},
             {{"erc721", r[1], 0.0}, {"erc7634", r[2], 0.0}, {"overhead_pct", r[3], 0.0}}, fail);
  }
  return fail;
}

Failure check_fig6b(const Table& t) {
  Failure fail;
  t.expect({{"limit", "5"}}, {{"break_even", "3", 0.0}}, fail);
  t.expect({{"limit", "10"}}, {{"break_even", "5", 0.0}}, fail);
  return fail;
}

Failure check_fig7(const Table& t) {
  Failure fail;
  t.expect({{"limit", "20"}, {"n", "9"}}, {{"profit_cap", "-0.41", 0.01}}, fail);
  if (fail) return fail;
  const auto* before = t.row({{"limit", "10"}, {"n", "4"}}, fail);
  const auto* after = t.row({{"limit", "10"}, {"n", "5"}}, fail);
  if (!before || !after) return fail;
  const auto p4 = t.value(*before, "profit_cap", "limit=10,n=4", fail);
  const auto p5 = t.value(*after, "profit_cap", "limit=10,n=5", fail);
  if (!p4 || !p5) return fail;
  if (!(*p4 > 0.0 && *p5 <= 0.0)) return t.file() + " limit=10: profit must change sign between n=4 and n=5";
  return fail;
}

Failure check_fig9(const Table& t) {
  Failure fail;
  auto at = [&](const char* limit, const char* shock, const char* col) -> std::optional<double> {
    const auto* r = t.row({{"limit", limit}, {"shock", shock}}, fail);
    if (!r) return std::nullopt;
    return t.value(*r, col, std::string("limit=") + limit + ",shock=" + shock, fail);
  };
  const auto loss10 = at("10", "0.30", "aggregate_loss");
  const auto loss50 = at("50", "0.30", "aggregate_loss");
  const auto depth10 = at("10", "0.30", "cascade_depth");
  const auto depth50 = at("50", "0.30", "cascade_depth");
  if (fail) return fail;
  if (!(*loss10 < *loss50)) return t.file() + " shock=0.30: loss at limit 10 must be below limit 50";
  if (!(*depth10 < *depth50)) return t.file() + " shock=0.30: depth at limit 10 must be below limit 50";
  for (const char* limit : {"10", "50"}) {
    double prev = -1.0;
    for (const char* shock : {"0.10", "0.20", "0.30", "0.40", "0.50"}) {
      const auto v = at(limit, shock, "aggregate_loss");
      if (!v) return fail;
      if (*v < prev) return t.file() + " limit=" + limit + ": loss decreases at shock " + shock;
      prev = *v;
    }
  }
  return fail;
}

Failure check_fig10a(const Table& t) {
  Failure fail;
  for (const auto& r : t.csv().rows) {
    const auto n = t.value(r, "transfers", "row", fail);
    const auto direct = t.value(r, "direct_gas", "row", fail);
    const auto wrapper = t.value(r, "wrapper_gas", "row", fail);
    if (fail) return fail;
    if (*wrapper <= *direct) {
      if (*n != 221.0) return t.file() + " break-even: expected 221, got " + fixed(*n, 0);
      return fail;
    }
  }
  return t.file() + " break-even: expected 221, never reached";
}

Failure check_fuzz(const Table& t) {
  Failure fail;
  t.expect({{"metric", "safety_violations"}}, {{"value", "0", 0.0}}, fail);
  t.expect({{"metric", "liveness_violations"}}, {{"value", "0", 0.0}}, fail);
  t.expect({{"metric", "model_mismatches"}}, {{"value", "0", 0.0}}, fail);
  t.expect({{"metric", "replay_matches"}}, {{"value", "1", 0.0}}, fail);
  t.expect({{"metric", "round_trip_matches"}}, {{"value", "1", 0.0}}, fail);
  return fail;
}

using Check = std::function<Failure(const Table&)>;

const std::vector<std::pair<std::string, Check>>& paper_checks() {
  static const std::vector<std::pair<std::string, Check>> checks{
      {"table2.csv", check_table2}, {"table3.csv", check_table3}, {"table4.csv", check_table4},
      {"table5.csv", check_table5}, {"table6.csv", check_table6}, {"table7.csv", check_table7},
      {"table8.csv", check_table8}, {"fig6.csv", nullptr},        {"fig6b.csv", check_fig6b},
      {"fig7.csv", check_fig7},     {"fig9.csv", check_fig9},     {"fig10a.csv", check_fig10a}};
  return checks;
}

std::optional<std::string> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void strict_checks(const std::filesystem::path& dir, VerifyReport& report) {
  const auto manifest_path = dir / kManifestName;
  if (!std::filesystem::exists(manifest_path)) {
    report.failures.push_back(std::string(kManifestName) + ": missing");
    return;
  }
  std::map<std::string, std::string> manifest;
  try {
    manifest = read_manifest(manifest_path);
  } catch (const Error& e) {
    report.failures.push_back(std::string(kManifestName) + ": " + e.what());
    return;
  }
  std::vector<std::string> listed;
  for (const auto& [key, digest] : manifest) {
    if (key.rfind("sha256.", 0) != 0) continue;
    const std::string name = key.substr(7);
    listed.push_back(name);
    const auto body = slurp(dir / name);
    if (!body) {
      report.failures.push_back(name + ": listed in manifest but missing");
    } else if (sha256_hex(*body) != digest) {
      report.failures.push_back(name + ": checksum differs from manifest");
    }
  }
  std::vector<std::string> needed = required_outputs();
  needed.push_back("fuzz_report.csv");
  for (auto c : popgen::kCollections) {
    std::string name(popgen::to_string(c));
    for (auto& ch : name) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    needed.push_back("fig3_" + name + ".csv");
  }
  for (const auto& name : needed) {
    if (std::find(listed.begin(), listed.end(), name) == listed.end()) {
      report.failures.push_back(name + ": not covered by manifest");
    }
  }
  if (auto csv = read_csv(dir / "fuzz_report.csv")) {
    if (auto f = check_fuzz(Table("fuzz_report.csv", *csv))) report.failures.push_back(*f);
  }
  if (report.failures.empty()) report.passed.push_back(std::string(kManifestName) + ": checksums match");
}

}  // namespace

std::optional<ToleranceProfile> profile_from_string(std::string_view name) noexcept {
  if (name == "paper") return ToleranceProfile::Paper;
  if (name == "strict") return ToleranceProfile::Strict;
  return std::nullopt;
}

std::string_view to_string(ToleranceProfile p) noexcept {
  return p == ToleranceProfile::Strict ? "strict" : "paper";
}

std::vector<std::string> required_outputs() {
  std::vector<std::string> names;
  for (const auto& [name, check] : paper_checks()) names.push_back(name);
  return names;
}

VerifyReport verify(const std::filesystem::path& dir, ToleranceProfile profile) {
  VerifyReport report;
  for (const auto& [name, check] : paper_checks()) {
    const auto csv = read_csv(dir / name);
    if (!csv) {
      report.failures.push_back(name + ": missing");
      continue;
    }
    if (csv->header.empty()) {
      report.failures.push_back(name + ": empty");
      continue;
    }
    if (check) {
      if (auto f = check(Table(name, *csv))) {
        report.failures.push_back(*f);
        continue;
      }
    }
    report.passed.push_back(name + ": ok");
  }
  if (profile == ToleranceProfile::Strict) strict_checks(dir, report);
  return report;
}

}  // namespace counted::runner
