#include "counted/runner/manifest.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>

#include "counted/popgen.hpp"
#include "counted/runner/csv.hpp"
#include "counted/runner/experiments.hpp"

#ifndef COUNTED_VERSION
#define COUNTED_VERSION "0.0.0"
#endif

namespace counted::runner {

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(Errc::DomainError, "sha256 failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string manifest_text(std::string_view subcommand, const ScenarioConfig& config,
                          const std::map<std::string, std::string>& outputs) {
  std::string text;
  auto line = [&](std::string_view key, std::string_view value) {
    text.append(key).append("=").append(value).append("\n");
  };
  line("format", "counted-manifest/1");
  line("version", COUNTED_VERSION);
  line("subcommand", subcommand);
  line("seed", std::to_string(config.seed));
  line("generator", popgen::kGeneratorName);
  line("eth_price_usd", fixed(config.costs.bypass.eth_price_usd, 6));
  for (const auto& [key, value] : echo(config)) line("config." + key, value);
  for (const auto& [name, body] : outputs) line("sha256." + name, sha256_hex(body));
  return text;
}

void write_manifest(const std::filesystem::path& dir, std::string_view subcommand,
                    const ScenarioConfig& config, const std::map<std::string, std::string>& outputs) {
  std::ofstream f(dir / kManifestName, std::ios::binary | std::ios::trunc);
  f << manifest_text(subcommand, config, outputs);
  if (!f) throw Error(Errc::DomainError, "cannot write manifest in " + dir.string());
}

std::map<std::string, std::string> read_manifest(const std::filesystem::path& path) {
  std::map<std::string, std::string> out;
  std::ifstream in(path);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(Errc::ParseError, path.string() + ":" + std::to_string(number) + ": expected key=value");
    }
    out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

}  // namespace counted::runner
