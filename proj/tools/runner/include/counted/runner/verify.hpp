#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace counted::runner {

// paper: every published cell within its table tolerance.
// strict: paper, plus manifest checksums, histograms and the fuzz report.
enum class ToleranceProfile { Paper, Strict };

std::optional<ToleranceProfile> profile_from_string(std::string_view name) noexcept;
std::string_view to_string(ToleranceProfile p) noexcept;

struct VerifyReport {
  std::vector<std::string> passed;    // one line per file that checked out
  std::vector<std::string> failures;  // first mismatch per failing file

  bool ok() const noexcept { return failures.empty(); }
};

// Compares the CSVs in `dir` against the embedded published values.
VerifyReport verify(const std::filesystem::path& dir, ToleranceProfile profile);

// Required outputs for a paper check, in report order.
std::vector<std::string> required_outputs();

}  // namespace counted::runner
