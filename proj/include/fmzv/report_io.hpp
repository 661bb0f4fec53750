#pragma once

// JSON and CSV forms of CongruenceReport.
//
// JSON: {id, range:{lo,hi}, passed, failed:[{p,lhs,rhs}], skipped:[{p,reason}],
//        elapsed_ms, tool_version, spec_hash[, columns, rows]}
// CSV:  the row table when the report has columns; otherwise one line per
//       prime of the range: p,status,lhs,rhs,reason.

#include "fmzv/report.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <string>

namespace fmzv {

nlohmann::json report_to_json(const CongruenceReport& r);
CongruenceReport report_from_json(const nlohmann::json& j);

std::string emit_json(const CongruenceReport& r);
CongruenceReport parse_json(const std::string& text);

void emit_csv(const CongruenceReport& r, std::ostream& out);
std::string emit_csv(const CongruenceReport& r);

/// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(const std::string& data);

/// Writes `contents` to `path` through a temporary file and rename.
void write_atomically(const std::string& path, const std::string& contents);

} // namespace fmzv
