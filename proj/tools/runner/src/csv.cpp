#include "counted/runner/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

#include "counted/error.hpp"

namespace counted::runner {

std::string fixed(double value, int decimals) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string s(buf);
  // printf breaks exact binary ties (0.625) to even; tables round them away from zero.
  char exact[512];
  std::snprintf(exact, sizeof exact, "%.*f", decimals + 60, value);
  const std::string_view tail = std::string_view(exact).substr(std::string_view(exact).size() - 60);
  if (tail.front() == '5' && tail.find_first_not_of('0', 1) == std::string_view::npos) {
    const double step = std::pow(10.0, -decimals);
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value + std::copysign(step / 2, value));
    s = buf;
  }
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  for (auto& h : header) cell(h);
  end_row();
}

CsvWriter& CsvWriter::cell(std::string_view text) {
  if (text.find_first_of(",\n\"") != std::string_view::npos) {
    throw Error(Errc::DomainError, "csv cell needs quoting: " + std::string(text));
  }
  if (pending_ > 0) text_ += ',';
  text_ += text;
  ++pending_;
  return *this;
}

void CsvWriter::end_row() {
  if (pending_ != columns_) {
    throw Error(Errc::DomainError, "csv row has " + std::to_string(pending_) + " cells, expected " +
                                       std::to_string(columns_));
  }
  text_ += '\n';
  pending_ = 0;
}

std::optional<std::size_t> CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::size_t pos = 0;
  bool first = true;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      cells.emplace_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      table.rows.push_back(std::move(cells));
    }
  }
  return table;
}

std::optional<CsvTable> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str());
}

}  // namespace counted::runner
