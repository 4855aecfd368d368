#include "doctest.h"
#include "helpers.h"
#include "ucc/measure.hpp"
#include "ucc/render.hpp"
#include "ucc/report.hpp"

using namespace ucc;
using namespace ucc_test;
using nlohmann::ordered_json;

TEST_CASE("expression evaluator: precedence, parens, the variable k") {
  CHECK(eval_expr("3", 0) == Rat(3));
  CHECK(eval_expr("k", 7) == Rat(7));
  CHECK(eval_expr("k+1", 7) == Rat(8));
  CHECK(eval_expr("2*k+1", 3) == Rat(7));
  CHECK(eval_expr("1+2*3", 0) == Rat(7));
  CHECK(eval_expr("(1+2)*3", 0) == Rat(9));
  CHECK(eval_expr("-k", 4) == Rat(-4));
  CHECK(eval_expr("1/2", 0) == Rat(1, 2));
  CHECK(eval_expr("k/(k+1)", 3) == Rat(3, 4));
  CHECK(eval_expr("2 * (k - 1)", 5) == Rat(8));
  CHECK_THROWS(eval_expr("1/0", 0));
  CHECK_THROWS(eval_expr("k+", 1));
  CHECK_THROWS(eval_expr("(1", 0));
  CHECK_THROWS(eval_expr("x", 0));
}

TEST_CASE("name templates substitute integer expressions") {
  CHECK(expand_name("A{k}", 3) == "A3");
  CHECK(expand_name("v{k+1}", 3) == "v4");
  CHECK(expand_name("plain", 9) == "plain");
  CHECK(expand_name("e{2*k}x{k}", 2) == "e4x2");
  CHECK_THROWS(expand_name("A{1/2}", 0));  // non-integer index
}

TEST_CASE("periodic template blocks expand to the right arc count") {
  Scenario sc = load_fixture("warsaw");
  CHECK(sc.model.tower.size() == 44);
  Scenario zr = load_fixture("z_ray");
  // 2 seed arcs plus 16 periods of 2 arcs
  CHECK(zr.model.tower.size() == 34);
  CHECK(zr.model.tower.arc_index("A16") >= 0);
  CHECK(zr.model.tower.arc_index("B16") >= 0);
  CHECK(zr.model.tower.arc_index("A17") < 0);
  // generator pieces expanded too
  CHECK(zr.action.generators[0].pieces.size() == 1 + 16 + 16);
}

TEST_CASE("scenario to json round trips") {
  for (const char* name : {"z_ray", "dihedral_arc", "warsaw", "fixed_vertex"}) {
    Scenario sc = load_fixture(name);
    std::string dumped = scenario_to_json(sc).dump(2);
    Scenario back = parse_scenario(dumped);
    CHECK(back.name == sc.name);
    CHECK(back.model.tower.size() == sc.model.tower.size());
    CHECK(back.model.ends.size() == sc.model.ends.size());
    CHECK(back.action.generators.size() == sc.action.generators.size());
    for (size_t g = 0; g < sc.action.generators.size(); ++g)
      CHECK(back.action.generators[g].pieces.size() == sc.action.generators[g].pieces.size());
    CHECK(back.run.level == sc.run.level);
    CHECK(back.run.radius == sc.run.radius);
    CHECK(scenario_to_json(back) == scenario_to_json(sc));
  }
}

TEST_CASE("run base defaults to the start of the first arc") {
  Scenario sc = load_fixture("z_ray");
  CHECK(run_base(sc) == TowerCoord{0, Rat(0)});
  Scenario fv = load_fixture("fixed_vertex");
  CHECK(run_base(fv) == TowerCoord{0, Rat(1)});  // declared base T1@1
  Scenario def = parse_scenario(R"({
    "name": "d",
    "tower": {"arcs": [{"name": "A", "nodes": ["x", "y"], "coords": ["0", "1"]}]},
    "ends": [], "action": {"group_rule": "cyclic:1",
      "generators": [{"name": "g", "pieces": [["A","0","1","A","0","1","+"]]}]}
  })");
  CHECK(run_base(def) == TowerCoord{0, Rat(0)});
}

TEST_CASE("scenario parser rejects malformed input") {
  CHECK_THROWS(parse_scenario("{not json"));
  CHECK_THROWS(parse_scenario(R"({"name": "x"})"));  // no tower
  // bad rational in coords
  CHECK_THROWS(parse_scenario(R"({
    "name": "x",
    "tower": {"arcs": [{"name": "A", "nodes": ["u","v"], "coords": ["0", "1.5"]}]},
    "ends": [], "action": {"group_rule": "cyclic:1",
      "generators": [{"name": "g", "pieces": [["A","0","1","A","0","1","+"]]}]}
  })"));
  // unknown end kind
  CHECK_THROWS(parse_scenario(R"({
    "name": "x",
    "tower": {"arcs": [{"name": "A", "nodes": ["u","v"], "coords": ["0", "1"]}]},
    "ends": [{"name": "e", "kind": "mystery"}],
    "action": {"group_rule": "cyclic:1",
      "generators": [{"name": "g", "pieces": [["A","0","1","A","0","1","+"]]}]}
  })"));
  // limit referencing an unknown end
  CHECK_THROWS(parse_scenario(R"({
    "name": "x",
    "tower": {"arcs": [{"name": "A", "nodes": ["u","v"], "coords": ["0", "1"]}]},
    "ends": [], "limits": {"ghost": {"kind": "ideal"}},
    "action": {"group_rule": "cyclic:1",
      "generators": [{"name": "g", "pieces": [["A","0","1","A","0","1","+"]]}]}
  })"));
}

TEST_CASE("fnv1a matches known vectors") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("report envelope has the pinned key set and stable dump") {
  ordered_json tables;
  tables["t"] = {{"columns", {"x", "y"}}, {"rows", {{1, 2}, {3, 4}}}};
  ordered_json rep = make_report("validate", "rawbytes", ordered_json{{"ok", true}}, tables);
  std::vector<std::string> keys;
  for (auto it = rep.begin(); it != rep.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"command", "scenario_hash", "outcome", "tables",
                                         "version"});
  CHECK(rep["command"] == "validate");
  CHECK(rep["scenario_hash"] == fnv1a_hex("rawbytes"));
  CHECK(rep["version"] == kVersion);
  std::string s = report_dump(rep);
  CHECK(s.back() == '\n');
  CHECK(s == report_dump(rep));
  CHECK(s.find("  \"command\": \"validate\"") != std::string::npos);
}

TEST_CASE("csv flattening") {
  ordered_json tables;
  tables["alpha"] = {{"columns", {"i", "mass"}}, {"rows", {{1, "1/3"}, {2, "1/5"}}}};
  tables["beta"] = {{"columns", {"word"}}, {"rows", {{"a b"}}}};
  std::string csv = csv_from_tables(tables);
  CHECK(csv.find("alpha\n") != std::string::npos);
  CHECK(csv.find("i,mass\n") != std::string::npos);
  CHECK(csv.find("1,1/3\n") != std::string::npos);
  CHECK(csv.find("2,1/5\n") != std::string::npos);
  CHECK(csv.find("beta\n") != std::string::npos);
  CHECK(csv.find("a b\n") != std::string::npos);
  CHECK(csv == csv_from_tables(tables));
}

TEST_CASE("svg rendering is deterministic and shows markers") {
  Scenario sc = load_fixture("warsaw");
  std::string svg = render_svg(sc.model, 8);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg == render_svg(sc.model, 8));
  std::string with = render_svg(sc.model, 8, {{"pt", TowerCoord{0, Rat(1, 2)}}});
  CHECK(with != svg);
  CHECK(with.find("pt") != std::string::npos);
  CHECK(with.find("<circle") != std::string::npos);
  // auto layout path: a fixture without planar coordinates
  Scenario fv = load_fixture("fixed_vertex");
  std::string auto_svg = render_svg(fv.model, 3);
  CHECK(auto_svg.find("</svg>") != std::string::npos);
  CHECK(auto_svg == render_svg(fv.model, 3));
}

TEST_CASE("unknown group rule surfaces as a model error") {
  Scenario sc = load_fixture("z_ray");
  std::string dumped = scenario_to_json(sc).dump(2);
  auto j = nlohmann::ordered_json::parse(dumped);
  j["action"]["group_rule"] = "sporadic";
  Scenario bad = parse_scenario(j.dump(2));
  CHECK_THROWS(make_group_rule(bad.action.group_rule,
                               static_cast<int>(bad.action.generators.size())));
}
