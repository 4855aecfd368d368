#include "ucc/pipeline.hpp"

#include <algorithm>

namespace ucc {

TailThreshold tail_thresholds(const LevelTree& lt, const ActionOnLevel& act, int gen,
                              const Ray& probe, const Ray& full) {
  TailThreshold out;
  out.gen = gen;
  const MTree& tree = lt.tree();
  long top = static_cast<long>(rat_floor(probe.total));
  for (long cd = 1; cd <= top; ++cd) {
    SegmentSet deep = ray_tail(lt, probe, Rat(cd));
    if (deep.empty()) break;
    if (!act.gen(gen).domain().contains_set(tree, deep)) continue;
    if (!act.gen_inv(gen).domain().contains_set(tree, deep)) continue;
    SegmentSet img = act.gen(gen).image_of(deep);
    SegmentSet inv = act.gen_inv(gen).image_of(deep);
    for (long cs = cd - 1; cs >= 0; --cs) {
      SegmentSet shallow = ray_tail(lt, full, Rat(cs));
      if (shallow.contains_set(tree, img) && shallow.contains_set(tree, inv)) {
        out.found = true;
        out.c_deep = cd;
        out.c_shallow = cs;
        return out;
      }
    }
  }
  return out;
}

RayClass classify_ray(const Model& m, const LevelTree& lt, const ActionOnLevel& act,
                      const EndScheme& end, const TreePoint& base, int max_iters) {
  RayClass rc;
  auto lim = m.limits.find(end.name);
  bool oscillatory =
      lim != m.limits.end() && lim->second.kind == LimitDecl::Kind::segments;
  rc.kind = oscillatory ? "oscillatory" : "nonoscillatory";
  if (oscillatory)
    rc.sidedness = lim->second.segs.size() >= 2 ? "bi_sided" : "one_sided";

  Ray full = build_ray(m, lt, end, base);
  Ray probe = build_ray(m, lt, end, base, std::max(1, lt.level() - 2));
  rc.certified = true;
  for (int g = 0; g < act.num_gens(); ++g) {
    rc.thresholds.push_back(tail_thresholds(lt, act, g, probe, full));
    rc.certified = rc.certified && rc.thresholds.back().found;
  }
  // nested invariant tails toward the end; d-lengths must shrink
  long top = std::min(static_cast<long>(rat_floor(full.total)), static_cast<long>(max_iters));
  for (long c = 0; c <= top; ++c)
    rc.arc_lengths.push_back(ray_tail(lt, full, Rat(c)).total_length(lt.tree()));
  for (size_t i = 0; i + 1 < rc.arc_lengths.size(); ++i)
    if (rc.arc_lengths[i + 1] >= rc.arc_lengths[i]) rc.stagnated = true;
  return rc;
}

OneSidedAnalysis one_sided_analysis(const LevelTree& lt, const Ray& ray, const Rat& c_shallow,
                                    const Rat& c_deep) {
  if (!(0 <= c_shallow && c_shallow < c_deep && c_deep <= ray.total))
    throw ArgumentError("bad window parameters");
  const MTree& tree = lt.tree();
  OneSidedAnalysis out;
  out.w = ray_point(lt, ray, c_shallow);
  TreePoint deep = ray_point(lt, ray, c_deep);
  Arc window = arc_between(tree, out.w, deep);
  out.a = arc_point_at_length(tree, window, window.length(tree) / 2);
  auto t = ray_param(lt, ray, out.a);
  if (!t) throw PreconditionError("window midpoint fell off the ray");
  out.t = *t;
  SegmentSet spine = ray_segment(lt, ray, Rat(0), ray.total);
  out.P = retract_fiber(tree, spine, ray_tail(lt, ray, out.t));
  out.Q = retract_fiber(tree, spine, ray_segment(lt, ray, Rat(0), out.t));
  return out;
}

namespace {

std::vector<std::string> gen_names(const GroupAction& action) {
  std::vector<std::string> names;
  for (const PLMap& g : action.generators) names.push_back(g.name);
  return names;
}

}  // namespace

PipelineResult find_periodic_pipeline(const Model& m, const GroupAction& action, int level,
                                      int radius, const TowerCoord& base, int folner_max) {
  PipelineResult res;
  res.stage = "none";
  res.outcome = "undetermined";
  LevelTree lt(m.tower, level);
  ActionOnLevel act(action, lt);
  TreePoint p0 = lt.point_at(base);

  OrbitHull oh = orbit_hull(act, {p0}, radius);
  res.hull_stabilized = oh.stabilized;
  res.hull_radius = oh.radius;
  res.hull_escaped = oh.escaped;
  if (oh.stabilized)
    res.notes.push_back("orbit hull stabilized at radius " + std::to_string(oh.radius));
  else if (oh.escaped)
    res.notes.push_back("orbit left the level tree, no compact invariant hull here");

  if (auto hit = periodic_search_tree(act)) {
    res.stage = "tree_search";
    res.outcome = hit->period == 1 ? "fixed_point" : "two_periodic";
    res.point = hit->x;
    res.coord = lt.coord_of(hit->x);
    if (hit->y) {
      res.partner = *hit->y;
      res.partner_coord = lt.coord_of(*hit->y);
    }
    res.detail = hit->period == 1 ? "common fixed point on the level tree"
                                  : "two-cycle on the level tree";
    return res;
  }
  res.notes.push_back("no finite orbit of size 1 or 2 on the level tree");

  // end permutation under each generator
  int ne = static_cast<int>(m.ends.size());
  if (ne == 0) return res;
  int shallow = std::max(1, level / 2);
  std::vector<std::vector<int>> perms;
  for (int g = 1; g <= act.num_gens(); ++g)
    for (int l : {g, -g}) perms.push_back(end_permutation(act, m, Word{l}, shallow));

  std::vector<int> fixed_ends;
  for (int i = 0; i < ne; ++i) {
    bool fixed = true;
    for (auto& p : perms) fixed = fixed && p[i] == i;
    if (fixed) fixed_ends.push_back(i);
  }

  if (!fixed_ends.empty()) {
    int i = fixed_ends.front();
    const EndScheme& end = m.ends[i];
    res.end_name = end.name;
    RayClass rc = classify_ray(m, lt, act, end, p0, 64);
    res.thresholds = rc.thresholds;
    if (rc.kind == "nonoscillatory") {
      res.stage = "ray_case1";
      if (!rc.certified) {
        res.notes.push_back("tail invariance not certified at this level");
        return res;
      }
      res.outcome = "fixed_point";
      auto lim = m.limits.find(end.name);
      if (lim != m.limits.end() && lim->second.kind == LimitDecl::Kind::point &&
          lim->second.point.arc < level) {
        res.coord = lim->second.point;
        res.point = lt.point_at(lim->second.point);
        res.detail = "fixed limit point of the invariant ray";
      } else {
        res.point = build_ray(m, lt, end, p0).arc.b;
        res.coord = lt.coord_of(*res.point);
        res.detail = "ideal fixed limit of end " + end.name + ", level representative shown";
      }
      return res;
    }
    // oscillatory
    res.stage = "ray_case2";
    if (!rc.certified) {
      res.notes.push_back("tail containment thresholds missing at this level and radius");
      return res;
    }
    if (rc.sidedness == "one_sided") {
      const TailThreshold& th = rc.thresholds.front();
      Ray ray = build_ray(m, lt, end, p0);
      OneSidedAnalysis osa = one_sided_analysis(lt, ray, Rat(th.c_shallow), Rat(th.c_deep));
      res.outcome = "ideal_endpoint";
      res.detail = "one-sided oscillation, window midpoint at parameter " + rat_str(osa.t);
      res.point = osa.a;
      res.coord = lt.coord_of(osa.a);
      return res;
    }
    // bi-sided: need a second all-fixed chain end to span a line
    int j = -1;
    for (int k : fixed_ends)
      if (k != i && m.ends[k].kind == EndScheme::Kind::chain) {
        j = k;
        break;
      }
    if (j < 0) {
      res.notes.push_back("no second invariant end to span a line");
      return res;
    }
    res.partner_end = m.ends[j].name;
    try {
      Line line = build_line(m, lt, m.ends[j], end, p0);
      LineField lf = make_line_field(lt, line);
      auto rule = make_group_rule(action.group_rule, act.num_gens());
      long n0 = line_cell_index(lt, lf, p0);
      for (int fi = 1; fi <= folner_max; ++fi) {
        EmpiricalMeasure mu = empirical_measure(act, rule->folner_set(fi), p0);
        res.escape_masses.push_back({fi, cell_mass(lt, lf, mu, n0)});
      }
      std::vector<Rat> masses;
      for (auto& r : res.escape_masses) masses.push_back(r.mass);
      res.escape_result = escape_verdict(masses);
      res.outcome = "ideal_endpoint";
      res.detail = "bi-sided oscillation along the invariant line: " + res.escape_result;
    } catch (const EscapeError& e) {
      res.notes.push_back(std::string("escape during measure sampling: ") + e.what());
    }
    return res;
  }

  // invariant end pairs
  for (int i = 0; i < ne; ++i)
    for (int j = i + 1; j < ne; ++j) {
      bool pair_ok = true, swaps = false;
      for (auto& p : perms) {
        bool fixes = p[i] == i && p[j] == j;
        bool sw = p[i] == j && p[j] == i;
        if (!fixes && !sw) pair_ok = false;
        swaps = swaps || sw;
      }
      if (!pair_ok || !swaps) continue;
      res.stage = "end_pair";
      res.outcome = "two_periodic";
      res.end_name = m.ends[i].name;
      res.partner_end = m.ends[j].name;
      res.detail = "the end pair {" + res.end_name + ", " + res.partner_end +
                   "} is invariant and swapped";
      Index2Result idx = stabilizer_index2(act, m, i, j, radius, shallow);
      std::vector<std::string> names = gen_names(action);
      for (const Word& w : idx.fixing) res.fixing_words.push_back(word_str(w, names));
      for (const Word& w : idx.swapping) res.swapping_words.push_back(word_str(w, names));
      for (const std::string& p : idx.problems) res.notes.push_back(p);
      res.point = lt.tree().vertex_point(lt.vertex_of_node(end_node_at(m, m.ends[i], level)));
      res.partner =
          lt.tree().vertex_point(lt.vertex_of_node(end_node_at(m, m.ends[j], level)));
      res.coord = lt.coord_of(*res.point);
      res.partner_coord = lt.coord_of(*res.partner);
      return res;
    }

  return res;
}

}  // namespace ucc
