#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "counted/runner/config.hpp"
#include "counted/runner/experiments.hpp"
#include "counted/runner/verify.hpp"

namespace {

using namespace counted;
using namespace counted::runner;

// Single machine-parsable line on stderr.
int fail(std::string_view code, std::string_view message) {
  std::string flat(message);
  for (auto& ch : flat) {
    if (ch == '\n') ch = ' ';
    if (ch == '"') ch = '\'';
  }
  std::fprintf(stderr, "error code=%.*s message=\"%s\"\n", static_cast<int>(code.size()), code.data(),
               flat.c_str());
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"counted-sim: counted-transfer experiment runner"};
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::string profile_name = "paper";
  std::optional<std::uint64_t> ops;
  std::optional<std::uint64_t> tokens;

  app.add_option("--config", config_path, "JSON scenario config");
  app.add_option("--seed", seed, "RNG seed (overrides config)");
  app.add_option("--out", out_dir, "output directory (overrides config)");
  app.add_option("--tolerance-profile", profile_name, "verify tolerance profile")
      ->check(CLI::IsMember({"paper", "strict"}));

  for (std::string_view name : kSubcommands) {
    auto* sub = app.add_subcommand(std::string(name), "write " + std::string(name) + " outputs");
    sub->fallthrough();
    if (name == "ledger-fuzz") {
      sub->add_option("--ops", ops, "operation count");
      sub->add_option("--tokens", tokens, "token count");
    }
  }
  auto* verify_cmd = app.add_subcommand("verify", "check outputs against the published tables");
  verify_cmd->fallthrough();
  verify_cmd->add_option("dir", out_dir, "output directory to check");

  CLI11_PARSE(app, argc, argv);

  ScenarioConfig config;
  try {
    if (config_path) config = load_config(*config_path);
    if (seed) config.seed = *seed;
    if (out_dir) config.out = *out_dir;
    if (ops) config.fuzz.ops = *ops;
    if (tokens) config.fuzz.tokens = *tokens;
    validate(config);
  } catch (const Error& e) {
    return fail(to_string(e.code()), e.what());
  }

  const auto* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();

  if (name == "verify") {
    const auto profile = *profile_from_string(profile_name);
    const auto report = verify(config.out, profile);
    for (const auto& line : report.passed) std::printf("ok   %s\n", line.c_str());
    for (const auto& line : report.failures) std::printf("FAIL %s\n", line.c_str());
    if (!report.ok()) return fail("VerifyFailed", report.failures.front());
    std::printf("verify (%s): %zu checks passed\n", std::string(to_string(profile)).c_str(),
                report.passed.size());
    return 0;
  }

  try {
    const auto result = run(name, config);
    for (const auto& [file, text] : result.outputs) {
      std::printf("wrote %s\n", (config.out / file).string().c_str());
    }
    if (result.fuzz) {
      std::printf("ledger-fuzz: %llu ops, %llu transfers, %llu safety, %llu liveness, %llu model\n",
                  static_cast<unsigned long long>(result.fuzz->ops),
                  static_cast<unsigned long long>(result.fuzz->transfers),
                  static_cast<unsigned long long>(result.fuzz->safety_violations),
                  static_cast<unsigned long long>(result.fuzz->liveness_violations),
                  static_cast<unsigned long long>(result.fuzz->model_mismatches));
    }
  } catch (const Error& e) {
    return fail(to_string(e.code()), e.what());
  } catch (const std::exception& e) {
    return fail("Internal", e.what());
  }
  return 0;
}
