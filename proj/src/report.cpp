#include "ucc/report.hpp"

#include <cstdint>
#include <fstream>

#include "ucc/error.hpp"

namespace ucc {

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::ordered_json make_report(const std::string& command, const std::string& raw_scenario,
                                   nlohmann::ordered_json outcome,
                                   nlohmann::ordered_json tables) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["scenario_hash"] = fnv1a_hex(raw_scenario);
  j["outcome"] = std::move(outcome);
  j["tables"] = std::move(tables);
  j["version"] = kVersion;
  return j;
}

std::string report_dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string cell_str(const nlohmann::ordered_json& c) {
  if (c.is_string()) return c.get<std::string>();
  return c.dump();
}

}  // namespace

std::string csv_from_tables(const nlohmann::ordered_json& tables) {
  std::string out;
  for (auto it = tables.begin(); it != tables.end(); ++it) {
    if (!out.empty()) out += "\n";
    out += "# " + it.key() + "\n";
    const auto& t = it.value();
    std::string line;
    for (const auto& c : t.at("columns")) {
      if (!line.empty()) line += ",";
      line += csv_escape(cell_str(c));
    }
    out += line + "\n";
    for (const auto& row : t.at("rows")) {
      line.clear();
      for (const auto& c : row) {
        if (!line.empty()) line += ",";
        line += csv_escape(cell_str(c));
      }
      out += line + "\n";
    }
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write file: " + path);
  out << content;
  if (!out) throw ArgumentError("write failed: " + path);
}

}  // namespace ucc
