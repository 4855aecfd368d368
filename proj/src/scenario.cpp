#include "ucc/scenario.hpp"

#include <fstream>
#include <sstream>

namespace ucc {

using ordered_json = nlohmann::ordered_json;

// ---- k-expressions ----------------------------------------------------------

namespace {

struct ExprParser {
  const std::string& s;
  size_t i = 0;
  long k;

  void skip() {
    while (i < s.size() && s[i] == ' ') ++i;
  }
  bool eat(char c) {
    skip();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  Rat expr() {
    Rat v = term();
    for (;;) {
      if (eat('+'))
        v += term();
      else if (eat('-'))
        v -= term();
      else
        return v;
    }
  }
  Rat term() {
    Rat v = factor();
    for (;;) {
      if (eat('*'))
        v *= factor();
      else if (eat('/')) {
        Rat d = factor();
        if (d == 0) throw ArgumentError("division by zero in expression: " + s);
        v /= d;
      } else
        return v;
    }
  }
  Rat factor() {
    skip();
    if (eat('-')) return -factor();
    if (eat('(')) {
      Rat v = expr();
      if (!eat(')')) throw ArgumentError("unbalanced parentheses in expression: " + s);
      return v;
    }
    if (i < s.size() && s[i] == 'k') {
      ++i;
      return Rat(k);
    }
    size_t start = i;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
    if (i == start) throw ArgumentError("bad expression: " + s);
    return Rat(Int(s.substr(start, i - start)));
  }
};

}  // namespace

Rat eval_expr(const std::string& s, long k) {
  ExprParser p{s, 0, k};
  Rat v = p.expr();
  p.skip();
  if (p.i != s.size()) throw ArgumentError("trailing junk in expression: " + s);
  return v;
}

std::string expand_name(const std::string& t, long k) {
  std::string out;
  size_t i = 0;
  while (i < t.size()) {
    if (t[i] != '{') {
      out += t[i++];
      continue;
    }
    size_t close = t.find('}', i);
    if (close == std::string::npos) throw ArgumentError("unbalanced brace in name: " + t);
    Rat v = eval_expr(t.substr(i + 1, close - i - 1), k);
    if (denominator(v) != 1)
      throw ArgumentError("non-integer index in name template: " + t);
    out += numerator(v).str();
    i = close + 1;
  }
  return out;
}

// ---- JSON helpers -------------------------------------------------------------

namespace {

Rat json_rat(const ordered_json& j, long k) {
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (j.is_string()) return eval_expr(j.get<std::string>(), k);
  throw ArgumentError("expected a rational (string or integer)");
}

int need_arc(const Tower& tw, const std::string& name) {
  int i = tw.arc_index(name);
  if (i < 0) throw ArgumentError("unknown arc: " + name);
  return i;
}

TowerArc parse_arc(const Tower& tw, const ordered_json& j, long k) {
  TowerArc a;
  a.name = expand_name(j.at("name").get<std::string>(), k);
  if (tw.arc_index(a.name) >= 0) throw ArgumentError("duplicate arc name: " + a.name);
  for (const auto& n : j.at("nodes")) a.nodes.push_back(expand_name(n.get<std::string>(), k));
  for (const auto& c : j.at("coords")) a.coords.push_back(json_rat(c, k));
  return a;
}

PLPiece parse_piece(const Tower& tw, const ordered_json& j, long k) {
  if (!j.is_array() || j.size() != 7) throw ArgumentError("a piece needs 7 entries");
  PLPiece p;
  p.src_arc = need_arc(tw, expand_name(j[0].get<std::string>(), k));
  p.s_lo = json_rat(j[1], k);
  p.s_hi = json_rat(j[2], k);
  p.dst_arc = need_arc(tw, expand_name(j[3].get<std::string>(), k));
  p.d_lo = json_rat(j[4], k);
  p.d_hi = json_rat(j[5], k);
  std::string o = j[6].get<std::string>();
  if (o != "+" && o != "-") throw ArgumentError("piece orientation must be + or -");
  p.orient = o == "+" ? 1 : -1;
  if (!(0 <= p.s_lo && p.s_lo < p.s_hi && p.s_hi <= 1) ||
      !(0 <= p.d_lo && p.d_lo < p.d_hi && p.d_hi <= 1))
    throw ArgumentError("piece intervals must be nondegenerate inside [0,1]");
  return p;
}

Word parse_word(const GroupAction& action, const ordered_json& j) {
  Word w;
  for (const auto& tok : j) {
    std::string t = tok.get<std::string>();
    bool inv = false;
    if (t.size() > 3 && t.substr(t.size() - 3) == "^-1") {
      inv = true;
      t = t.substr(0, t.size() - 3);
    }
    int g = action.gen_index(t);
    if (g < 0) throw ArgumentError("unknown generator in word: " + t);
    w.push_back(inv ? -(g + 1) : g + 1);
  }
  return w;
}

void parse_planar_block(Tower& tw, const ordered_json& nodes, long k) {
  for (auto it = nodes.begin(); it != nodes.end(); ++it) {
    std::string name = expand_name(it.key(), k);
    const auto& xy = it.value();
    if (!xy.is_array() || xy.size() != 2) throw ArgumentError("planar entry needs [x, y]");
    tw.planar[name] = {json_rat(xy[0], k), json_rat(xy[1], k)};
  }
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw ArgumentError(std::string("scenario is not valid JSON: ") + e.what());
  }
  Scenario sc;
  sc.raw = text;
  sc.name = j.value("name", std::string("scenario"));

  const auto& tj = j.at("tower");
  for (const auto& aj : tj.at("arcs"))
    sc.model.tower.arcs.push_back(parse_arc(sc.model.tower, aj, 0));
  if (tj.contains("periodic"))
    for (const auto& blk : tj.at("periodic")) {
      long from = blk.at("from").get<long>(), to = blk.at("to").get<long>();
      for (long k = from; k <= to; ++k)
        for (const auto& aj : blk.at("arcs"))
          sc.model.tower.arcs.push_back(parse_arc(sc.model.tower, aj, k));
    }
  if (tj.contains("planar")) parse_planar_block(sc.model.tower, tj.at("planar"), 0);
  if (tj.contains("periodic_planar"))
    for (const auto& blk : tj.at("periodic_planar")) {
      long from = blk.at("from").get<long>(), to = blk.at("to").get<long>();
      for (long k = from; k <= to; ++k) parse_planar_block(sc.model.tower, blk.at("nodes"), k);
    }

  if (j.contains("ends"))
    for (const auto& ej : j.at("ends")) {
      EndScheme e;
      e.name = ej.at("name").get<std::string>();
      std::string kind = ej.value("kind", std::string("chain"));
      if (kind == "chain") {
        e.kind = EndScheme::Kind::chain;
        e.start = ej.at("start").get<int>();
        e.period = ej.value("period", 1);
        if (e.period < 1) throw ArgumentError("end period must be >= 1");
        e.offsets.clear();
        if (ej.contains("offsets"))
          for (const auto& o : ej.at("offsets")) e.offsets.push_back(o.get<int>());
        else
          e.offsets.push_back(0);
      } else if (kind == "anchored") {
        e.kind = EndScheme::Kind::anchored;
        e.anchor_node = ej.at("node").get<std::string>();
      } else {
        throw ArgumentError("unknown end kind: " + kind);
      }
      sc.model.ends.push_back(e);
    }

  if (j.contains("limits"))
    for (auto it = j.at("limits").begin(); it != j.at("limits").end(); ++it) {
      if (sc.model.end_index(it.key()) < 0)
        throw ArgumentError("limit declared for unknown end: " + it.key());
      const auto& lj = it.value();
      LimitDecl d;
      std::string kind = lj.at("kind").get<std::string>();
      if (kind == "ideal") {
        d.kind = LimitDecl::Kind::ideal;
      } else if (kind == "point") {
        d.kind = LimitDecl::Kind::point;
        const auto& at = lj.at("at");
        d.point = TowerCoord{need_arc(sc.model.tower, at.at(0).get<std::string>()),
                             json_rat(at.at(1), 0)};
      } else if (kind == "segments") {
        d.kind = LimitDecl::Kind::segments;
        for (const auto& s : lj.at("segs"))
          d.segs.push_back({need_arc(sc.model.tower, s.at(0).get<std::string>()),
                            json_rat(s.at(1), 0), json_rat(s.at(2), 0)});
      } else {
        throw ArgumentError("unknown limit kind: " + kind);
      }
      sc.model.limits[it.key()] = d;
    }

  if (j.contains("action")) {
    const auto& aj = j.at("action");
    sc.action.group_rule = aj.value("group_rule", std::string("free_abelian"));
    for (const auto& gj : aj.at("generators")) {
      PLMap g;
      g.name = gj.at("name").get<std::string>();
      if (gj.contains("pieces"))
        for (const auto& pj : gj.at("pieces"))
          g.pieces.push_back(parse_piece(sc.model.tower, pj, 0));
      if (gj.contains("periodic_pieces"))
        for (const auto& blk : gj.at("periodic_pieces")) {
          long from = blk.at("from").get<long>(), to = blk.at("to").get<long>();
          for (long k = from; k <= to; ++k)
            for (const auto& pj : blk.at("pieces"))
              g.pieces.push_back(parse_piece(sc.model.tower, pj, k));
        }
      sc.action.generators.push_back(std::move(g));
    }
    if (aj.contains("relations"))
      for (const auto& rj : aj.at("relations"))
        sc.action.relations.push_back(parse_word(sc.action, rj));
  }

  if (j.contains("run")) {
    const auto& rj = j.at("run");
    sc.run.level = rj.value("level", sc.run.level);
    sc.run.radius = rj.value("radius", sc.run.radius);
    sc.run.seed = rj.value("seed", sc.run.seed);
    sc.run.folner_max = rj.value("folner_max", sc.run.folner_max);
    sc.run.end = rj.value("end", std::string());
    if (rj.contains("base")) {
      const auto& b = rj.at("base");
      sc.run.base = {b.at(0).get<std::string>(), json_rat(b.at(1), 0)};
      need_arc(sc.model.tower, sc.run.base->first);
    }
    if (rj.contains("line")) {
      const auto& l = rj.at("line");
      sc.run.line = {l.at(0).get<std::string>(), l.at(1).get<std::string>()};
    }
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open scenario file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

nlohmann::ordered_json scenario_to_json(const Scenario& sc) {
  ordered_json j;
  j["name"] = sc.name;
  ordered_json arcs = ordered_json::array();
  for (const TowerArc& a : sc.model.tower.arcs) {
    ordered_json aj;
    aj["name"] = a.name;
    aj["nodes"] = a.nodes;
    ordered_json cs = ordered_json::array();
    for (const Rat& c : a.coords) cs.push_back(rat_str(c));
    aj["coords"] = cs;
    arcs.push_back(aj);
  }
  j["tower"]["arcs"] = arcs;
  if (!sc.model.tower.planar.empty()) {
    ordered_json pj = ordered_json::object();
    for (auto& [n, xy] : sc.model.tower.planar)
      pj[n] = ordered_json::array({rat_str(xy.first), rat_str(xy.second)});
    j["tower"]["planar"] = pj;
  }
  ordered_json ends = ordered_json::array();
  for (const EndScheme& e : sc.model.ends) {
    ordered_json ej;
    ej["name"] = e.name;
    if (e.kind == EndScheme::Kind::chain) {
      ej["kind"] = "chain";
      ej["start"] = e.start;
      ej["period"] = e.period;
      ej["offsets"] = e.offsets;
    } else {
      ej["kind"] = "anchored";
      ej["node"] = e.anchor_node;
    }
    ends.push_back(ej);
  }
  j["ends"] = ends;
  ordered_json limits = ordered_json::object();
  for (auto& [name, d] : sc.model.limits) {
    ordered_json lj;
    if (d.kind == LimitDecl::Kind::ideal) {
      lj["kind"] = "ideal";
    } else if (d.kind == LimitDecl::Kind::point) {
      lj["kind"] = "point";
      lj["at"] = ordered_json::array(
          {sc.model.tower.arcs[d.point.arc].name, rat_str(d.point.t)});
    } else {
      lj["kind"] = "segments";
      ordered_json segs = ordered_json::array();
      for (auto& [arc, lo, hi] : d.segs)
        segs.push_back(ordered_json::array(
            {sc.model.tower.arcs[arc].name, rat_str(lo), rat_str(hi)}));
      lj["segs"] = segs;
    }
    limits[name] = lj;
  }
  if (!limits.empty()) j["limits"] = limits;
  if (!sc.action.generators.empty()) {
    ordered_json aj;
    aj["group_rule"] = sc.action.group_rule;
    ordered_json gens = ordered_json::array();
    for (const PLMap& g : sc.action.generators) {
      ordered_json gj;
      gj["name"] = g.name;
      ordered_json ps = ordered_json::array();
      for (const PLPiece& p : g.pieces)
        ps.push_back(ordered_json::array(
            {sc.model.tower.arcs[p.src_arc].name, rat_str(p.s_lo), rat_str(p.s_hi),
             sc.model.tower.arcs[p.dst_arc].name, rat_str(p.d_lo), rat_str(p.d_hi),
             p.orient > 0 ? "+" : "-"}));
      gj["pieces"] = ps;
      gens.push_back(gj);
    }
    aj["generators"] = gens;
    ordered_json rels = ordered_json::array();
    for (const Word& r : sc.action.relations) {
      ordered_json rj = ordered_json::array();
      for (int l : r) {
        std::string t = sc.action.generators[(l > 0 ? l : -l) - 1].name;
        if (l < 0) t += "^-1";
        rj.push_back(t);
      }
      rels.push_back(rj);
    }
    if (!rels.empty()) aj["relations"] = rels;
    j["action"] = aj;
  }
  ordered_json rj;
  rj["level"] = sc.run.level;
  rj["radius"] = sc.run.radius;
  rj["seed"] = sc.run.seed;
  rj["folner_max"] = sc.run.folner_max;
  if (sc.run.base)
    rj["base"] = ordered_json::array({sc.run.base->first, rat_str(sc.run.base->second)});
  if (!sc.run.end.empty()) rj["end"] = sc.run.end;
  if (!sc.run.line.first.empty())
    rj["line"] = ordered_json::array({sc.run.line.first, sc.run.line.second});
  j["run"] = rj;
  return j;
}

TowerCoord run_base(const Scenario& sc) {
  if (!sc.run.base) return TowerCoord{0, Rat(0)};
  return TowerCoord{sc.model.tower.arc_index(sc.run.base->first), sc.run.base->second};
}

}  // namespace ucc
