#pragma once

#include <string>

#include "json.hpp"

namespace ucc {

inline constexpr const char* kVersion = "1.0.0";

// FNV-1a 64-bit, lowercase hex.
std::string fnv1a_hex(const std::string& bytes);

// {command, scenario_hash, outcome, tables, version}
nlohmann::ordered_json make_report(const std::string& command, const std::string& raw_scenario,
                                   nlohmann::ordered_json outcome,
                                   nlohmann::ordered_json tables);

// Stable serialized form (2-space indent, trailing newline).
std::string report_dump(const nlohmann::ordered_json& j);

// tables: {name: {"columns": [...], "rows": [[...], ...]}} flattened to CSV
// sections separated by blank lines.
std::string csv_from_tables(const nlohmann::ordered_json& tables);

void write_file(const std::string& path, const std::string& content);

}  // namespace ucc
