#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "counted/ledger.hpp"

// Line-oriented event log: one flat JSON object per line with the fields
// {seq, kind, token_id, ...}. Addresses are written as unsigned integers.
namespace counted::ledger {

std::string to_line(const LedgerEvent& event);

// Throws Error(ParseError) on malformed input or unknown fields.
LedgerEvent parse_line(std::string_view line);

void write_log(std::ostream& out, std::span<const LedgerEvent> events);

// Blank lines are skipped.
std::vector<LedgerEvent> read_log(std::istream& in);

}  // namespace counted::ledger
