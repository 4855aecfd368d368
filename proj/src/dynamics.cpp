#include "ucc/dynamics.hpp"

#include <algorithm>

namespace ucc {

TreePoint arc_point_at_length(const MTree& tree, const Arc& arc, const Rat& len) {
  if (len <= 0) return arc.a;
  Rat cum = 0;
  for (const ArcSeg& s : arc.segs) {
    Rat slen = s.span() * tree.edge(s.edge).length;
    if (cum + slen >= len) {
      Rat frac = (len - cum) / slen;
      Rat t = s.forward ? Rat(s.lo + frac * s.span()) : Rat(s.hi - frac * s.span());
      return tree.canonical(TreePoint{s.edge, t});
    }
    cum += slen;
  }
  return arc.b;
}

TreePoint median(const MTree& tree, const TreePoint& a, const TreePoint& b,
                 const TreePoint& c) {
  Rat l = (distance(tree, a, b) + distance(tree, a, c) - distance(tree, b, c)) / 2;
  return arc_point_at_length(tree, arc_between(tree, a, b), l);
}

SegmentSet common_fixed_set(const ActionOnLevel& act) {
  const MTree& tree = act.level_tree().tree();
  SegmentSet s = act.num_gens() ? act.gen(0).fixed_set() : SegmentSet::whole(tree);
  for (int i = 1; i < act.num_gens(); ++i) s = s.intersect(tree, act.gen(i).fixed_set());
  return s;
}

std::optional<TreePoint> pick_moved_point(const MTree& tree, const SegmentSet& C,
                                          const TreeMap& f) {
  SegmentSet fix = f.fixed_set();
  auto moved = [&](const TreePoint& p) -> bool {
    auto q = f.apply(p);
    return q && *q != tree.canonical(p);
  };
  for (auto& [e, list] : C.intervals())
    for (auto& iv : list) {
      std::vector<Rat> cuts{iv.first, iv.second};
      auto it = fix.intervals().find(e);
      if (it != fix.intervals().end())
        for (auto& fiv : it->second)
          for (const Rat& c : {fiv.first, fiv.second})
            if (iv.first < c && c < iv.second) cuts.push_back(c);
      std::sort(cuts.begin(), cuts.end());
      cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
      for (const Rat& c : cuts) {
        TreePoint p = tree.canonical(TreePoint{e, c});
        if (moved(p)) return p;
      }
      for (size_t k = 0; k + 1 < cuts.size(); ++k) {
        TreePoint p{e, (cuts[k] + cuts[k + 1]) / 2};
        if (moved(p)) return p;
      }
    }
  for (int v : C.isolated_vertices()) {
    TreePoint p = tree.vertex_point(v);
    if (moved(p)) return p;
  }
  return std::nullopt;
}

std::optional<PeriodicHit> periodic_search_tree(const ActionOnLevel& act) {
  const MTree& tree = act.level_tree().tree();
  SegmentSet common = common_fixed_set(act);
  if (!common.empty()) {
    PeriodicHit hit;
    hit.period = 1;
    hit.x = common.any_point(tree);
    return hit;
  }
  int k = act.num_gens();
  if (k == 0 || k > 20) return std::nullopt;
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    int g0 = -1;
    for (int i = 0; i < k; ++i)
      if (mask & (1u << i)) {
        g0 = i;
        break;
      }
    SegmentSet C = SegmentSet::whole(tree);
    for (int i = 0; i < k && !C.empty(); ++i) {
      if (mask & (1u << i)) {
        // swap generator: g0^-1(g_i(x)) = x and g_i(g0(x)) = x
        C = C.intersect(tree, act.gen_inv(g0).compose(act.gen(i)).fixed_set());
        C = C.intersect(tree, act.gen(i).compose(act.gen(g0)).fixed_set());
      } else {
        // fixing generator: fixes x and fixes g0(x)
        C = C.intersect(tree, act.gen(i).fixed_set());
        C = C.intersect(tree, act.gen(g0).preimage_of(act.gen(i).fixed_set()));
      }
    }
    if (C.empty()) continue;
    auto x = pick_moved_point(tree, C, act.gen(g0));
    if (!x) continue;
    PeriodicHit hit;
    hit.period = 2;
    hit.x = *x;
    hit.y = act.gen(g0)(*x);
    hit.pattern.assign(k, 0);
    for (int i = 0; i < k; ++i) hit.pattern[i] = (mask >> i) & 1;
    return hit;
  }
  return std::nullopt;
}

InvariantArc invariant_arc_at_endpoint(const MTree& tree, const TreeMap& f,
                                       const TreePoint& e, const TreePoint& v) {
  TreePoint fe = f(e);
  if (tree.canonical(fe) != tree.canonical(e))
    throw PreconditionError("endpoint is not fixed by the map");
  TreePoint fv = f(v);
  TreePoint u;
  if (tree.canonical(fv) == tree.canonical(v)) {
    u = tree.canonical(v);
  } else {
    TreePoint w = median(tree, e, v, fv);
    SegmentSet pre = f.preimage_of(SegmentSet::point(tree, w));
    if (pre.empty()) throw PreconditionError("meet point has no preimage");
    u = pre.any_point(tree);
  }
  SegmentSet A = SegmentSet::from_arc(tree, arc_between(tree, e, u));
  SegmentSet fA = f.image_of(A);
  InvariantArc out;
  out.u = u;
  if (A.contains_set(tree, fA))
    out.image_inside = true;
  else if (fA.contains_set(tree, A))
    out.image_inside = false;
  else
    throw PreconditionError("no invariant arc at the endpoint");
  return out;
}

CommonArc common_invariant_arc(const MTree& tree, const std::vector<const TreeMap*>& fs,
                               const TreePoint& e, const TreePoint& v0) {
  if (fs.empty()) throw ArgumentError("need at least one map");
  TreePoint u = invariant_arc_at_endpoint(tree, *fs[0], e, v0).u;
  for (size_t i = 1; i < fs.size(); ++i) {
    TreePoint ui = invariant_arc_at_endpoint(tree, *fs[i], e, v0).u;
    u = median(tree, e, u, ui);
  }
  if (tree.canonical(u) == tree.canonical(e))
    throw PreconditionError("common arc degenerates to the endpoint");
  SegmentSet A = SegmentSet::from_arc(tree, arc_between(tree, e, u));
  SegmentSet V = A;
  for (const TreeMap* f : fs) {
    V = V.intersect(tree, f->image_of(A));
    V = V.intersect(tree, f->preimage_of(A));
  }
  TreePoint ec = tree.canonical(e);
  SegmentSet comp;
  bool found = false;
  for (const SegmentSet& c : V.components(tree))
    if (c.contains(tree, ec)) {
      comp = c;
      found = true;
      break;
    }
  if (!found) throw PreconditionError("endpoint fell out of the common set");
  TreePoint v = ec;
  Rat best = 0;
  for (const TreePoint& b : comp.boundary_points(tree)) {
    Rat d = distance(tree, ec, b);
    if (d > best) {
      best = d;
      v = b;
    }
  }
  if (v == ec) throw PreconditionError("common arc degenerates to the endpoint");
  return CommonArc{u, v};
}

NestedArcs nested_invariant_arcs(const MTree& tree, const TreeMap& f, const TreePoint& e,
                                 const TreePoint& u0, int max_iters) {
  NestedArcs out;
  TreePoint u = tree.canonical(u0);
  out.points.push_back(u);
  out.lengths.push_back(distance(tree, e, u));
  for (int k = 0; k < max_iters; ++k) {
    auto next = f.apply(u);
    if (!next) throw EscapeError("iterate left the domain of the map");
    Rat len = distance(tree, e, *next);
    out.points.push_back(*next);
    out.lengths.push_back(len);
    u = *next;
    if (len == 0) break;
    if (len >= out.lengths[out.lengths.size() - 2]) {
      out.stagnated = true;
      break;
    }
  }
  return out;
}

// ---- rays -------------------------------------------------------------------

Ray build_ray(const Model& m, const LevelTree& lt, const EndScheme& end,
              const TreePoint& base, int target_level) {
  Ray r;
  r.base = lt.tree().canonical(base);
  int target = target_level < 0 ? lt.level() : target_level;
  int v = lt.vertex_of_node(end_node_at(m, end, target));
  if (v < 0) throw ModelError("ray representative missing from the level tree");
  r.arc = arc_between(lt.tree(), r.base, lt.tree().vertex_point(v));
  r.cum.push_back(0);
  for (const ArcSeg& s : r.arc.segs) {
    const auto& meta = lt.meta(s.edge);
    r.cum.push_back(r.cum.back() + s.span() * (meta.hi - meta.lo));
  }
  r.total = r.cum.back();
  return r;
}

TreePoint ray_point(const LevelTree& lt, const Ray& r, const Rat& s) {
  if (s <= 0) return r.arc.a;
  if (s >= r.total) return r.arc.b;
  for (size_t i = 0; i < r.arc.segs.size(); ++i) {
    if (s > r.cum[i + 1]) continue;
    const ArcSeg& seg = r.arc.segs[i];
    Rat frac = (s - r.cum[i]) / (r.cum[i + 1] - r.cum[i]);
    Rat t = seg.forward ? Rat(seg.lo + frac * seg.span()) : Rat(seg.hi - frac * seg.span());
    return lt.tree().canonical(TreePoint{seg.edge, t});
  }
  return r.arc.b;
}

std::optional<Rat> ray_param(const LevelTree& lt, const Ray& r, const TreePoint& p) {
  TreePoint c = lt.tree().canonical(p);
  for (const TreePoint& alias : lt.tree().aliases(c))
    for (size_t i = 0; i < r.arc.segs.size(); ++i) {
      const ArcSeg& seg = r.arc.segs[i];
      if (alias.edge != seg.edge || alias.t < seg.lo || alias.t > seg.hi) continue;
      Rat frac = seg.forward ? Rat((alias.t - seg.lo) / seg.span())
                             : Rat((seg.hi - alias.t) / seg.span());
      return r.cum[i] + frac * (r.cum[i + 1] - r.cum[i]);
    }
  if (c == r.arc.a) return Rat(0);
  if (c == r.arc.b) return r.total;
  return std::nullopt;
}

SegmentSet ray_segment(const LevelTree& lt, const Ray& r, const Rat& a, const Rat& b) {
  Rat lo = std::max(Rat(0), a), hi = std::min(r.total, b);
  SegmentSet out;
  if (lo > hi) return out;
  if (lo == hi) {
    out.add_point(lt.tree(), ray_point(lt, r, lo));
    return out;
  }
  for (size_t i = 0; i < r.arc.segs.size(); ++i) {
    Rat c = std::max(lo, r.cum[i]), d = std::min(hi, r.cum[i + 1]);
    if (c > d) continue;
    const ArcSeg& seg = r.arc.segs[i];
    auto local = [&](const Rat& s) {
      Rat frac = (s - r.cum[i]) / (r.cum[i + 1] - r.cum[i]);
      return seg.forward ? Rat(seg.lo + frac * seg.span()) : Rat(seg.hi - frac * seg.span());
    };
    Rat t1 = local(c), t2 = local(d);
    if (t1 > t2) std::swap(t1, t2);
    if (t1 == t2)
      out.add_point(lt.tree(), lt.tree().canonical(TreePoint{seg.edge, t1}));
    else
      out.add_interval(lt.tree(), seg.edge, t1, t2);
  }
  return out;
}

SegmentSet ray_tail(const LevelTree& lt, const Ray& r, const Rat& c) {
  return ray_segment(lt, r, c, r.total);
}

int ray_order(const LevelTree& lt, const Ray& r, const TreePoint& p, const TreePoint& q) {
  auto sp = ray_param(lt, r, p), sq = ray_param(lt, r, q);
  if (!sp || !sq) throw ArgumentError("point is not on the ray");
  return *sp < *sq ? -1 : *sp > *sq ? 1 : 0;
}

Line build_line(const Model& m, const LevelTree& lt, const EndScheme& neg,
                const EndScheme& pos, const TreePoint& origin) {
  return Line{build_ray(m, lt, neg, origin), build_ray(m, lt, pos, origin)};
}

TreePoint line_point(const LevelTree& lt, const Line& l, const Rat& s) {
  return s < 0 ? ray_point(lt, l.neg, -s) : ray_point(lt, l.pos, s);
}

std::optional<Rat> line_param(const LevelTree& lt, const Line& l, const TreePoint& p) {
  if (auto s = ray_param(lt, l.pos, p)) return s;
  if (auto s = ray_param(lt, l.neg, p)) return Rat(-*s);
  return std::nullopt;
}

SegmentSet line_segment(const LevelTree& lt, const Line& l, const Rat& a, const Rat& b) {
  if (a > b) throw ArgumentError("bad line segment parameters");
  if (b <= 0) return ray_segment(lt, l.neg, -b, -a);
  if (a >= 0) return ray_segment(lt, l.pos, a, b);
  return ray_segment(lt, l.neg, Rat(0), -a).unite(lt.tree(), ray_segment(lt, l.pos, Rat(0), b));
}

// ---- ends under the action ----------------------------------------------------

std::string end_node_at(const Model& m, const EndScheme& e, int level) {
  if (e.kind == EndScheme::Kind::anchored) return e.anchor_node;
  int j = chain_next(e, level);
  if (j < 0 || j >= m.tower.size())
    throw LevelError("end " + e.name + " not defined past level " + std::to_string(level));
  return attach_node(m.tower, j);
}

std::vector<int> end_permutation(const ActionOnLevel& act, const Model& m, const Word& w,
                                 int shallow) {
  const LevelTree& lt = act.level_tree();
  const MTree& tree = lt.tree();
  int n = static_cast<int>(m.ends.size());
  int len = static_cast<int>(w.size());
  std::vector<SegmentSet> tails(n);
  std::vector<TreePoint> reps(n);
  for (int j = 0; j < n; ++j) {
    const EndScheme& e = m.ends[j];
    if (e.kind == EndScheme::Kind::anchored) {
      int v = lt.vertex_of_node(e.anchor_node);
      if (v < 0) throw ModelError("end node missing from the level tree");
      reps[j] = tree.vertex_point(v);
      tails[j] = SegmentSet::point(tree, reps[j]);
      continue;
    }
    // walk the chain's attach nodes as long as they land in the level tree;
    // the representative sits len+1 rungs up so a word of length len can
    // push it either way without leaving the ladder
    std::vector<int> rungs;
    int a = chain_next(e, 0);
    while (a >= 0 && a < m.tower.size()) {
      std::string node = a == 0 ? m.tower.arcs[0].nodes.front() : attach_node(m.tower, a);
      int v = lt.vertex_of_node(node);
      if (v < 0) break;
      rungs.push_back(v);
      a = chain_next(e, a + 1);
    }
    int top = static_cast<int>(rungs.size()) - 1;
    if (top < 2) throw ModelError("end " + e.name + " has too few chain arcs at this level");
    int r = std::max(1, std::min(len + 1, top - len));
    int s = std::max(1, std::min(shallow, r - len));
    reps[j] = tree.vertex_point(rungs[r]);
    tails[j] = SegmentSet::from_arc(
        tree, arc_between(tree, tree.vertex_point(rungs[s]), tree.vertex_point(rungs[top])));
  }
  std::vector<int> out(n, -1);
  for (int i = 0; i < n; ++i) {
    auto q = act.apply_word(w, reps[i]);
    if (!q) continue;
    int hit = -1;
    bool unique = true;
    for (int j = 0; j < n; ++j)
      if (tails[j].contains(tree, *q)) {
        if (hit >= 0) unique = false;
        hit = j;
      }
    if (hit >= 0 && unique) out[i] = hit;
  }
  return out;
}

Index2Result stabilizer_index2(const ActionOnLevel& act, const Model& m, int end_a,
                               int end_b, int radius, int shallow) {
  Index2Result out;
  std::vector<std::string> names;
  for (const PLMap& g : act.action().generators) names.push_back(g.name);
  for (const Word& w : all_words(act.num_gens(), radius)) {
    if (w.empty()) continue;
    std::vector<int> p = end_permutation(act, m, w, shallow);
    int pa = p[end_a], pb = p[end_b];
    if (pa == end_a && pb == end_b)
      out.fixing.push_back(w);
    else if (pa == end_b && pb == end_a)
      out.swapping.push_back(w);
    else
      out.problems.push_back("word does not preserve the end pair: " + word_str(w, names));
  }
  out.ok = out.problems.empty() && !out.swapping.empty();
  return out;
}

}  // namespace ucc
