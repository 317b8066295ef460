#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace counted::runner {

// Fixed-point text with `decimals` places; never prints "-0.00".
std::string fixed(double value, int decimals);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  CsvWriter& cell(std::string_view text);
  CsvWriter& cell(double value, int decimals) { return cell(fixed(value, decimals)); }
  CsvWriter& cell(std::uint64_t value) { return cell(std::to_string(value)); }
  void end_row();

  const std::string& str() const noexcept { return text_; }

 private:
  std::size_t columns_;
  std::size_t pending_ = 0;
  std::string text_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(std::string_view name) const;
};

CsvTable parse_csv(std::string_view text);
std::optional<CsvTable> read_csv(const std::filesystem::path& path);

}  // namespace counted::runner
