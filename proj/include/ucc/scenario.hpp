#pragma once

#include "json.hpp"
#include "ucc/plaction.hpp"

namespace ucc {

// Arithmetic over rationals with the free variable k: integers, k, + - * /,
// unary minus, parentheses.
Rat eval_expr(const std::string& s, long k);

// Substitutes each {expr} in a template with its (integer) value.
std::string expand_name(const std::string& t, long k);

struct RunSpec {
  int level = 8;
  int radius = 3;
  std::optional<std::pair<std::string, Rat>> base;  // (arc name, chart coord)
  std::string end;                                   // ray end for classify-ray
  std::pair<std::string, std::string> line;          // (neg end, pos end)
  long seed = 0;
  int folner_max = 10;
};

struct Scenario {
  std::string name;
  Model model;
  GroupAction action;
  RunSpec run;
  std::string raw;  // original file bytes, hashed into reports
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

// Normalized (template-expanded) form; parse_scenario(dump) rebuilds the
// same model, action and run block.
nlohmann::ordered_json scenario_to_json(const Scenario& sc);

// Resolved base point (defaults to coordinate 0 of the first arc).
TowerCoord run_base(const Scenario& sc);

}  // namespace ucc
