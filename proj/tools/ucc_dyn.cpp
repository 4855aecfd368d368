#include <chrono>
#include <iostream>

#include "CLI11.hpp"
#include "ucc/pipeline.hpp"
#include "ucc/render.hpp"
#include "ucc/report.hpp"
#include "ucc/scenario.hpp"

using nlohmann::ordered_json;
using namespace ucc;

namespace {

struct Opts {
  std::string scenario;
  int level = -1;
  int radius = -1;
  long seed = -1;
  std::string out, csv, svg;
};

ordered_json coord_json(const Scenario& sc, const TowerCoord& c) {
  return ordered_json::array({sc.model.tower.arcs[c.arc].name, rat_str(c.t)});
}

ordered_json threshold_table(const Scenario& sc, const std::vector<TailThreshold>& ths) {
  ordered_json t;
  t["columns"] = ordered_json::array({"generator", "found", "c_deep", "c_shallow"});
  ordered_json rows = ordered_json::array();
  for (const TailThreshold& th : ths)
    rows.push_back(ordered_json::array({sc.action.generators[th.gen].name,
                                        th.found ? "yes" : "no", th.c_deep, th.c_shallow}));
  t["rows"] = rows;
  return t;
}

int run_validate(const Scenario& sc, const Opts& o, ordered_json& outcome,
                 ordered_json& tables) {
  auto violations = validate_tower(sc.model.tower);
  ordered_json vrows = ordered_json::array();
  for (const TowerViolation& v : violations)
    vrows.push_back(ordered_json::array({v.level, v.code, v.message}));
  std::vector<std::string> rel_problems, acc_problems;
  int level = o.level > 0 ? o.level : sc.run.level;
  bool level_clean = true;
  for (const TowerViolation& v : violations) level_clean = level_clean && v.level > level;
  if (level_clean && level <= sc.model.tower.size()) {
    try {
      LevelTree lt(sc.model.tower, level);
      if (!sc.action.generators.empty()) {
        ActionOnLevel act(sc.action, lt);
        rel_problems = act.check_relations();
      }
    } catch (const Error& e) {
      rel_problems.push_back(e.what());
    }
  }
  acc_problems = validate_accumulation(sc.model, sc.model.tower.size());
  bool ok = violations.empty() && rel_problems.empty() && acc_problems.empty();
  outcome["valid"] = ok;
  outcome["tower_violations"] = vrows;
  outcome["relation_problems"] = rel_problems;
  outcome["accumulation_problems"] = acc_problems;
  ordered_json vt;
  vt["columns"] = ordered_json::array({"level", "code", "message"});
  vt["rows"] = vrows;
  tables["violations"] = vt;
  return ok ? 0 : 2;
}

int run_dendrite(const Scenario& sc, const Opts& o, ordered_json& outcome,
                 ordered_json& tables) {
  int level = o.level > 0 ? o.level : sc.run.level;
  DendriteCheck dc = dendrite_check(sc.model, level, sc.model.tower.size());
  outcome["ok"] = dc.ok;
  outcome["level"] = dc.level;
  outcome["prefix"] = dc.prefix;
  outcome["max_tail_distance"] = rat_str(dc.max_tail_distance);
  outcome["tail_bound"] = rat_str(dc.tail_bound);
  outcome["max_fiber_diameter"] = rat_str(dc.max_fiber_diameter);
  outcome["fiber_bound"] = rat_str(dc.fiber_bound);
  outcome["cover_cells"] = dc.cover_cells;
  outcome["max_cover_diameter"] = rat_str(dc.max_cover_diameter);
  outcome["cover_bound"] = rat_str(dc.cover_bound);
  ordered_json t;
  t["columns"] = ordered_json::array({"quantity", "value", "bound"});
  t["rows"] = ordered_json::array(
      {ordered_json::array({"tail_distance", rat_str(dc.max_tail_distance),
                            rat_str(dc.tail_bound)}),
       ordered_json::array({"fiber_diameter", rat_str(dc.max_fiber_diameter),
                            rat_str(dc.fiber_bound)}),
       ordered_json::array({"cover_diameter", rat_str(dc.max_cover_diameter),
                            rat_str(dc.cover_bound)})});
  tables["bounds"] = t;
  return dc.ok ? 0 : 2;
}

int run_find_periodic(const Scenario& sc, const Opts& o, ordered_json& outcome,
                      ordered_json& tables) {
  int level = o.level > 0 ? o.level : sc.run.level;
  int radius = o.radius > 0 ? o.radius : sc.run.radius;
  PipelineResult res = find_periodic_pipeline(sc.model, sc.action, level, radius,
                                              run_base(sc), sc.run.folner_max);
  outcome["result"] = res.outcome;
  outcome["stage"] = res.stage;
  outcome["detail"] = res.detail;
  if (res.coord) outcome["point"] = coord_json(sc, *res.coord);
  if (res.partner_coord) outcome["partner"] = coord_json(sc, *res.partner_coord);
  if (!res.end_name.empty()) outcome["end"] = res.end_name;
  if (!res.partner_end.empty()) outcome["partner_end"] = res.partner_end;
  outcome["hull_stabilized"] = res.hull_stabilized;
  outcome["hull_radius"] = res.hull_radius;
  outcome["hull_escaped"] = res.hull_escaped;
  if (!res.escape_result.empty()) outcome["escape"] = res.escape_result;
  outcome["notes"] = res.notes;
  if (!res.thresholds.empty()) tables["thresholds"] = threshold_table(sc, res.thresholds);
  if (!res.escape_masses.empty()) {
    ordered_json t;
    t["columns"] = ordered_json::array({"i", "mass"});
    ordered_json rows = ordered_json::array();
    for (const MassRow& r : res.escape_masses)
      rows.push_back(ordered_json::array({r.i, rat_str(r.mass)}));
    t["rows"] = rows;
    tables["cell_mass"] = t;
  }
  if (!res.fixing_words.empty() || !res.swapping_words.empty()) {
    ordered_json t;
    t["columns"] = ordered_json::array({"word", "action_on_ends"});
    ordered_json rows = ordered_json::array();
    for (const std::string& w : res.fixing_words)
      rows.push_back(ordered_json::array({w, "fixes"}));
    for (const std::string& w : res.swapping_words)
      rows.push_back(ordered_json::array({w, "swaps"}));
    t["rows"] = rows;
    tables["end_stabilizer"] = t;
  }
  return res.outcome == "undetermined" ? 2 : 0;
}

int run_classify_ray(const Scenario& sc, const Opts& o, ordered_json& outcome,
                     ordered_json& tables) {
  if (sc.run.end.empty()) throw ArgumentError("scenario run block declares no end");
  int level = o.level > 0 ? o.level : sc.run.level;
  LevelTree lt(sc.model.tower, level);
  ActionOnLevel act(sc.action, lt);
  RayClass rc = classify_ray(sc.model, lt, act, sc.model.end(sc.run.end),
                             lt.point_at(run_base(sc)), 64);
  outcome["end"] = sc.run.end;
  outcome["kind"] = rc.kind;
  if (!rc.sidedness.empty()) outcome["sidedness"] = rc.sidedness;
  outcome["certified"] = rc.certified;
  outcome["stagnated"] = rc.stagnated;
  tables["thresholds"] = threshold_table(sc, rc.thresholds);
  ordered_json t;
  t["columns"] = ordered_json::array({"c", "tail_length"});
  ordered_json rows = ordered_json::array();
  for (size_t i = 0; i < rc.arc_lengths.size(); ++i)
    rows.push_back(ordered_json::array({i, rat_str(rc.arc_lengths[i])}));
  t["rows"] = rows;
  tables["tail_lengths"] = t;
  return rc.certified ? 0 : 2;
}

int run_measure(const Scenario& sc, const Opts& o, ordered_json& outcome,
                ordered_json& tables) {
  int level = o.level > 0 ? o.level : sc.run.level;
  auto rule = make_group_rule(sc.action.group_rule,
                              static_cast<int>(sc.action.generators.size()));
  ordered_json dt;
  ordered_json cols = ordered_json::array({"i"});
  for (const PLMap& g : sc.action.generators) cols.push_back("defect_" + g.name);
  dt["columns"] = cols;
  ordered_json drows = ordered_json::array();
  Rat last_max = 0;
  for (int i = 1; i <= sc.run.folner_max; ++i) {
    ordered_json row = ordered_json::array({i});
    Rat mx = 0;
    for (int g = 1; g <= static_cast<int>(sc.action.generators.size()); ++g) {
      Rat d = folner_defect(*rule, i, g);
      mx = std::max(mx, d);
      row.push_back(rat_str(d));
    }
    last_max = mx;
    drows.push_back(row);
  }
  dt["rows"] = drows;
  tables["folner_defect"] = dt;
  outcome["group_rule"] = rule->name();
  outcome["final_max_defect"] = rat_str(last_max);

  if (!sc.run.line.first.empty()) {
    LevelTree lt(sc.model.tower, level);
    ActionOnLevel act(sc.action, lt);
    TreePoint p0 = lt.point_at(run_base(sc));
    Line line = build_line(sc.model, lt, sc.model.end(sc.run.line.first),
                           sc.model.end(sc.run.line.second), p0);
    LineField lf = make_line_field(lt, line);
    long n0 = line_cell_index(lt, lf, p0);
    ordered_json mt;
    mt["columns"] = ordered_json::array({"i", "mass"});
    ordered_json mrows = ordered_json::array();
    std::vector<Rat> masses;
    for (int i = 1; i <= sc.run.folner_max; ++i) {
      EmpiricalMeasure mu = empirical_measure(act, rule->folner_set(i), p0);
      Rat mass = cell_mass(lt, lf, mu, n0);
      masses.push_back(mass);
      mrows.push_back(ordered_json::array({i, rat_str(mass)}));
    }
    mt["rows"] = mrows;
    tables["cell_mass"] = mt;
    outcome["cell"] = n0;
    outcome["escape"] = escape_verdict(masses);
  }
  return 0;
}

int run_render(const Scenario& sc, const Opts& o, ordered_json& outcome, ordered_json&) {
  int level = o.level > 0 ? o.level : sc.run.level;
  std::string svg = render_svg(sc.model, level);
  std::string path = o.svg.empty() ? sc.name + ".svg" : o.svg;
  write_file(path, svg);
  outcome["svg"] = path;
  outcome["bytes"] = svg.size();
  outcome["level"] = level;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dynamics on tree-approximated continua"};
  app.require_subcommand(1);
  Opts o;
  const std::vector<std::string> commands = {"validate",     "dendrite-check", "find-periodic",
                                             "classify-ray", "measure",        "render"};
  for (const std::string& c : commands) {
    CLI::App* sub = app.add_subcommand(c);
    sub->add_option("scenario", o.scenario)->required();
    sub->add_option("--level", o.level);
    sub->add_option("--radius", o.radius);
    sub->add_option("--seed", o.seed);
    sub->add_option("--out", o.out);
    sub->add_option("--csv", o.csv);
    sub->add_option("--svg", o.svg);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  std::string command = app.get_subcommands().front()->get_name();
  auto t0 = std::chrono::steady_clock::now();
  int code = 1;
  try {
    Scenario sc = load_scenario(o.scenario);
    if (o.seed >= 0) sc.run.seed = o.seed;
    ordered_json outcome, tables(ordered_json::object());
    outcome["scenario"] = sc.name;
    outcome["seed"] = sc.run.seed;
    if (command == "validate")
      code = run_validate(sc, o, outcome, tables);
    else if (command == "dendrite-check")
      code = run_dendrite(sc, o, outcome, tables);
    else if (command == "find-periodic")
      code = run_find_periodic(sc, o, outcome, tables);
    else if (command == "classify-ray")
      code = run_classify_ray(sc, o, outcome, tables);
    else if (command == "measure")
      code = run_measure(sc, o, outcome, tables);
    else if (command == "render")
      code = run_render(sc, o, outcome, tables);
    ordered_json report = make_report(command, sc.raw, outcome, tables);
    std::string dump = report_dump(report);
    if (o.out.empty())
      std::cout << dump;
    else
      write_file(o.out, dump);
    if (!o.csv.empty()) write_file(o.csv, csv_from_tables(tables));
    if (!o.svg.empty() && command != "render")
      write_file(o.svg, render_svg(sc.model, o.level > 0 ? o.level : sc.run.level));
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();
  std::cerr << command << " finished in " << ms << " ms\n";
  return code;
}
