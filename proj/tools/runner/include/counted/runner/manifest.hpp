#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "counted/runner/config.hpp"

namespace counted::runner {

std::string sha256_hex(std::string_view bytes);

// Line-oriented key=value text: run metadata, the config echo under
// "config.", and one "sha256.<file>" line per output.
std::string manifest_text(std::string_view subcommand, const ScenarioConfig& config,
                          const std::map<std::string, std::string>& outputs);

void write_manifest(const std::filesystem::path& dir, std::string_view subcommand,
                    const ScenarioConfig& config, const std::map<std::string, std::string>& outputs);

// Throws ParseError on malformed lines; empty map when the file is missing.
std::map<std::string, std::string> read_manifest(const std::filesystem::path& path);

}  // namespace counted::runner
