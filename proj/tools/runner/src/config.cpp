#include "counted/runner/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"

namespace counted::runner {

namespace {

using nlohmann::json;

[[noreturn]] void parse_error(const std::string& path, const std::string& what) {
  throw Error(Errc::ParseError, "config " + path + ": " + what);
}

std::uint64_t as_u64(const json& v, const std::string& path) {
  if (!v.is_number_unsigned()) parse_error(path, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

double as_double(const json& v, const std::string& path) {
  if (!v.is_number()) parse_error(path, "expected a number");
  return v.get<double>();
}

std::vector<std::uint64_t> as_u64_list(const json& v, const std::string& path) {
  if (!v.is_array()) parse_error(path, "expected an array");
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(as_u64(v[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<double> as_double_list(const json& v, const std::string& path) {
  if (!v.is_array()) parse_error(path, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(as_double(v[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

using Setter = std::function<void(const json&, const std::string&)>;

void bind(const json& obj, const std::string& path, const std::map<std::string, Setter>& fields) {
  if (!obj.is_object()) parse_error(path.empty() ? "root" : path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    const std::string where = path.empty() ? key : path + "." + key;
    auto it = fields.find(key);
    if (it == fields.end()) parse_error(where, "unknown key");
    it->second(value, where);
  }
}

Setter u64(std::uint64_t& dst) {
  return [&dst](const json& v, const std::string& p) { dst = as_u64(v, p); };
}
Setter num(double& dst) {
  return [&dst](const json& v, const std::string& p) { dst = as_double(v, p); };
}
Setter u64s(std::vector<std::uint64_t>& dst) {
  return [&dst](const json& v, const std::string& p) { dst = as_u64_list(v, p); };
}
Setter nums(std::vector<double>& dst) {
  return [&dst](const json& v, const std::string& p) { dst = as_double_list(v, p); };
}

json to_json(const ScenarioConfig& c) {
  const auto& b = c.costs.bypass;
  return json{
      {"experiment", c.experiment},
      {"seed", c.seed},
      {"econ", {{"base_value", c.econ.base_value}, {"limit", c.econ.limit}, {"limits", c.econ.limits}}},
      {"market",
       {{"base_value", c.market.base_value},
        {"inflation", c.market.inflation},
        {"trade_cost", c.market.trade_cost},
        {"limits", c.market.limits}}},
      {"credit",
       {{"ltv", c.credit.ltv},
        {"initial_value", c.credit.initial_value},
        {"penalty", c.credit.penalty},
        {"limits", c.credit.limits},
        {"cascade_limits", c.credit.cascade_limits},
        {"shocks", c.credit.shocks}}},
      {"popgen",
       {{"n_tokens", c.popgen.n_tokens},
        {"max_count", c.popgen.max_count},
        {"caps", c.popgen.caps},
        {"shards", c.popgen.shards}}},
      {"costs",
       {{"deploy_gas", b.deploy_gas},
        {"deposit_gas", b.deposit_gas},
        {"wrapper_transfer_gas", b.wrapper_transfer_gas},
        {"direct_transfer_gas", b.direct_transfer_gas},
        {"gas_price_gwei", b.gas_price_gwei},
        {"eth_price_usd", b.eth_price_usd},
        {"max_transfers", c.costs.max_transfers}}},
      {"fuzz", {{"ops", c.fuzz.ops}, {"tokens", c.fuzz.tokens}, {"max_limit", c.fuzz.max_limit}}},
  };
}

}  // namespace

ScenarioConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::ParseError, std::string("config is not valid JSON: ") + e.what());
  }

  ScenarioConfig c;
  auto& b = c.costs.bypass;
  bind(root, "",
       {
           {"experiment",
            [&](const json& v, const std::string& p) {
              if (!v.is_string()) parse_error(p, "expected a string");
              c.experiment = v.get<std::string>();
            }},
           {"seed", u64(c.seed)},
           {"out",
            [&](const json& v, const std::string& p) {
              if (!v.is_string()) parse_error(p, "expected a string");
              c.out = v.get<std::string>();
            }},
           {"econ",
            [&](const json& v, const std::string& p) {
              bind(v, p, {{"base_value", num(c.econ.base_value)},
                          {"limit", u64(c.econ.limit)},
                          {"limits", u64s(c.econ.limits)}});
            }},
           {"market",
            [&](const json& v, const std::string& p) {
              bind(v, p, {{"base_value", num(c.market.base_value)},
                          {"inflation", num(c.market.inflation)},
                          {"trade_cost", num(c.market.trade_cost)},
                          {"limits", u64s(c.market.limits)}});
            }},
           {"credit",
            [&](const json& v, const std::string& p) {
              bind(v, p, {{"ltv", num(c.credit.ltv)},
                          {"initial_value", num(c.credit.initial_value)},
                          {"penalty", num(c.credit.penalty)},
                          {"limits", u64s(c.credit.limits)},
                          {"cascade_limits", u64s(c.credit.cascade_limits)},
                          {"shocks", nums(c.credit.shocks)}});
            }},
           {"popgen",
            [&](const json& v, const std::string& p) {
              bind(v, p, {{"n_tokens", u64(c.popgen.n_tokens)},
                          {"max_count", u64(c.popgen.max_count)},
                          {"caps", u64s(c.popgen.caps)},
                          {"shards", u64(c.popgen.shards)}});
            }},
           {"costs",
            [&](const json& v, const std::string& p) {
              bind(v, p, {{"deploy_gas", u64(b.deploy_gas)},
                          {"deposit_gas", u64(b.deposit_gas)},
                          {"wrapper_transfer_gas", u64(b.wrapper_transfer_gas)},
                          {"direct_transfer_gas", u64(b.direct_transfer_gas)},
                          {"gas_price_gwei", num(b.gas_price_gwei)},
                          {"eth_price_usd", num(b.eth_price_usd)},
                          {"max_transfers", u64(c.costs.max_transfers)}});
            }},
           {"fuzz",
            [&](const json& v, const std::string& p) {
              bind(v, p, {{"ops", u64(c.fuzz.ops)},
                          {"tokens", u64(c.fuzz.tokens)},
                          {"max_limit", u64(c.fuzz.max_limit)}});
            }},
       });
  validate(c);
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

void validate(const ScenarioConfig& c) {
  auto check = [](bool ok, const char* what) {
    if (!ok) throw Error(Errc::DomainError, std::string("config: ") + what);
  };
  check(c.econ.base_value >= 0.0, "econ.base_value must be non-negative");
  check(c.econ.limit >= 1, "econ.limit must be positive");
  check(!c.econ.limits.empty(), "econ.limits must not be empty");
  for (auto l : c.econ.limits) check(l >= 3, "econ.limits entries must be at least 3");
  check(c.market.base_value >= 0.0, "market.base_value must be non-negative");
  check(c.market.inflation >= 0.0, "market.inflation must be non-negative");
  check(c.market.trade_cost >= 0.0, "market.trade_cost must be non-negative");
  for (auto l : c.market.limits) check(l >= 1, "market.limits entries must be positive");
  check(c.credit.ltv > 0.0 && c.credit.ltv < 1.0, "credit.ltv must lie in (0, 1)");
  check(c.credit.initial_value > 0.0, "credit.initial_value must be positive");
  check(c.credit.penalty >= 0.0 && c.credit.penalty < 1.0, "credit.penalty must lie in [0, 1)");
  for (double p : c.credit.shocks) check(p >= 0.0 && p < 1.0, "credit.shocks must lie in [0, 1)");
  check(c.popgen.n_tokens >= 1, "popgen.n_tokens must be positive");
  check(c.popgen.max_count >= 1, "popgen.max_count must be positive");
  check(c.popgen.shards >= 1 && c.popgen.shards <= 256, "popgen.shards must lie in [1, 256]");
  check(c.fuzz.tokens >= 1, "fuzz.tokens must be positive");
  check(c.fuzz.max_limit >= 1, "fuzz.max_limit must be positive");
  costs::validate(c.costs.bypass);
}

std::vector<std::pair<std::string, std::string>> echo(const ScenarioConfig& config) {
  std::vector<std::pair<std::string, std::string>> out;
  const json tree = to_json(config);
  for (const auto& [key, value] : tree.items()) {
    if (value.is_object()) {
      for (const auto& [sub, leaf] : value.items()) out.emplace_back(key + "." + sub, leaf.dump());
    } else {
      out.emplace_back(key, value.dump());
    }
  }
  return out;
}

}  // namespace counted::runner
