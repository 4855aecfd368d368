#include "ucc/tower.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace ucc {

int Tower::arc_index(const std::string& name) const {
  for (int i = 0; i < size(); ++i)
    if (arcs[i].name == name) return i;
  return -1;
}

namespace {

std::optional<std::string> arc_shape_problem(const TowerArc& a) {
  if (a.nodes.size() < 2) return "arc needs at least two nodes";
  if (a.nodes.size() != a.coords.size()) return "node/coordinate count mismatch";
  if (a.coords.front() != 0 || a.coords.back() != 1)
    return "chart coordinates must start at 0 and end at 1";
  for (size_t k = 0; k + 1 < a.coords.size(); ++k)
    if (!(a.coords[k] < a.coords[k + 1])) return "chart coordinates must be strictly increasing";
  std::set<std::string> seen(a.nodes.begin(), a.nodes.end());
  if (seen.size() != a.nodes.size()) return "arc revisits a node";
  return std::nullopt;
}

}  // namespace

std::vector<TowerViolation> validate_tower(const Tower& tw) {
  std::vector<TowerViolation> out;
  std::set<std::string> nodes_so_far;
  std::set<std::pair<std::string, std::string>> segs_so_far;
  for (int i = 0; i < tw.size(); ++i) {
    const TowerArc& a = tw.arcs[i];
    if (auto p = arc_shape_problem(a)) {
      out.push_back({i + 1, "bad_arc", a.name + ": " + *p});
      continue;
    }
    int shared = 0;
    for (const auto& n : a.nodes) shared += nodes_so_far.count(n) ? 1 : 0;
    int shared_segs = 0, new_segs = 0;
    for (size_t k = 0; k + 1 < a.nodes.size(); ++k) {
      auto key = std::minmax(a.nodes[k], a.nodes[k + 1]);
      if (segs_so_far.count({key.first, key.second}))
        ++shared_segs;
      else
        ++new_segs;
    }
    if (i > 0) {
      if (new_segs == 0)
        out.push_back({i + 1, "not_strict",
                       a.name + ": arc adds no new points, T_" + std::to_string(i + 1) +
                           " = T_" + std::to_string(i)});
      else if (shared_segs > 0)
        out.push_back({i + 1, "bad_intersection",
                       a.name + ": arc meets the earlier tower in a sub-arc"});
      else if (shared == 0)
        out.push_back({i + 1, "non_tree", a.name + ": arc is disconnected from T_" +
                                              std::to_string(i)});
      else if (shared > 1)
        out.push_back({i + 1, "non_tree",
                       a.name + ": arc meets T_" + std::to_string(i) +
                           " in several points, creating a cycle"});
    }
    for (const auto& n : a.nodes) nodes_so_far.insert(n);
    for (size_t k = 0; k + 1 < a.nodes.size(); ++k) {
      auto key = std::minmax(a.nodes[k], a.nodes[k + 1]);
      segs_so_far.insert({key.first, key.second});
    }
  }
  return out;
}

std::string attach_node(const Tower& tw, int arc) {
  if (arc <= 0 || arc >= tw.size()) return {};
  std::set<std::string> earlier;
  for (int i = 0; i < arc; ++i)
    for (const auto& n : tw.arcs[i].nodes) earlier.insert(n);
  for (const auto& n : tw.arcs[arc].nodes)
    if (earlier.count(n)) return n;
  return {};
}

LevelTree::LevelTree(const Tower& tw, int level) : tower_(&tw), level_(level) {
  if (level < 1 || level > tw.size())
    throw LevelError("level " + std::to_string(level) + " outside loaded tower prefix");
  for (const TowerViolation& v : validate_tower(tw))
    if (v.level <= level)
      throw ModelError("tower invalid at level " + std::to_string(v.level) + ": " + v.message);

  std::vector<Edge> edges;
  std::vector<EdgeMeta> meta;
  arc_edges_.assign(level, {});
  auto vertex_id = [&](const std::string& n) {
    auto it = node_vertex_.find(n);
    if (it != node_vertex_.end()) return it->second;
    int id = static_cast<int>(vertex_node_.size());
    node_vertex_[n] = id;
    vertex_node_.push_back(n);
    return id;
  };
  for (int i = 0; i < level; ++i) {
    const TowerArc& a = tw.arcs[i];
    Rat weight = pow2_neg(i + 1);
    for (size_t k = 0; k + 1 < a.nodes.size(); ++k) {
      int u = vertex_id(a.nodes[k]);
      int v = vertex_id(a.nodes[k + 1]);
      Rat span = a.coords[k + 1] - a.coords[k];
      arc_edges_[i].push_back({a.coords[k], static_cast<int>(edges.size())});
      edges.push_back(Edge{u, v, weight * span});
      meta.push_back(EdgeMeta{i, a.coords[k], a.coords[k + 1]});
    }
  }
  meta_ = std::move(meta);
  tree_ = MTree(static_cast<int>(vertex_node_.size()), std::move(edges));
}

int LevelTree::vertex_of_node(const std::string& node) const {
  auto it = node_vertex_.find(node);
  return it == node_vertex_.end() ? -1 : it->second;
}

TreePoint LevelTree::point_at(const TowerCoord& c) const {
  if (c.arc < 0 || c.arc >= level_)
    throw LevelError("point on arc " + std::to_string(c.arc + 1) + " is outside T_" +
                     std::to_string(level_));
  if (c.t < 0 || c.t > 1) throw InvalidPointError("chart coordinate outside [0,1]");
  for (auto& [lo, e] : arc_edges_[c.arc]) {
    const EdgeMeta& m = meta_[e];
    if (m.lo <= c.t && c.t <= m.hi)
      return tree_.canonical(TreePoint{e, (c.t - m.lo) / (m.hi - m.lo)});
  }
  throw InvalidPointError("chart coordinate not covered");  // unreachable
}

TowerCoord LevelTree::coord_of(const TreePoint& p) const {
  TreePoint c = tree_.canonical(p);
  std::optional<TowerCoord> best;
  for (const TreePoint& alias : tree_.aliases(c)) {
    const EdgeMeta& m = meta_[alias.edge];
    TowerCoord tc{m.arc, m.lo + alias.t * (m.hi - m.lo)};
    if (!best || tc < *best) best = tc;
  }
  return *best;
}

Rat LevelTree::chart_length(const SegmentSet& s) const {
  Rat total = 0;
  for (auto& [e, list] : s.intervals()) {
    const EdgeMeta& m = meta_[e];
    for (auto& iv : list) total += (iv.second - iv.first) * (m.hi - m.lo);
  }
  return total;
}

SegmentSet LevelTree::arc_interval(int arc, const Rat& lo, const Rat& hi) const {
  if (arc < 0 || arc >= level_) throw LevelError("arc outside level");
  SegmentSet out;
  if (lo == hi) {
    out.add_point(tree_, point_at(TowerCoord{arc, lo}));
    return out;
  }
  for (auto& [elo, e] : arc_edges_[arc]) {
    const EdgeMeta& m = meta_[e];
    Rat a = std::max(lo, m.lo), b = std::min(hi, m.hi);
    if (a < b)
      out.add_interval(tree_, e, (a - m.lo) / (m.hi - m.lo), (b - m.lo) / (m.hi - m.lo));
    else if (a == b)
      out.add_point(tree_, tree_.canonical(TreePoint{e, (a - m.lo) / (m.hi - m.lo)}));
  }
  return out;
}

SegmentSet LevelTree::sublevel_set(int m) const {
  if (m < 1 || m > level_) throw LevelError("sublevel outside range");
  SegmentSet out;
  for (int e = 0; e < tree_.edge_count(); ++e)
    if (meta_[e].arc < m) out.add_interval(tree_, e, Rat(0), Rat(1));
  return out;
}

Rat d_metric(const LevelTree& lt, const TowerCoord& x, const TowerCoord& y) {
  return distance(lt.tree(), lt.point_at(x), lt.point_at(y));
}

bool chain_contains(const EndScheme& e, int arc) {
  if (e.kind != EndScheme::Kind::chain) return false;
  if (arc < e.start) return false;
  int r = (arc - e.start) % e.period;
  return std::find(e.offsets.begin(), e.offsets.end(), r) != e.offsets.end();
}

int chain_next(const EndScheme& e, int n) {
  for (int j = std::max(n, e.start); j < std::max(n, e.start) + e.period + 1; ++j)
    if (chain_contains(e, j)) return j;
  return -1;
}

int Model::end_index(const std::string& name) const {
  for (int i = 0; i < static_cast<int>(ends.size()); ++i)
    if (ends[i].name == name) return i;
  return -1;
}

const EndScheme& Model::end(const std::string& name) const {
  int i = end_index(name);
  if (i < 0) throw ModelError("unknown end: " + name);
  return ends[i];
}

TreePoint end_representative(const Model& m, const LevelTree& lt, const EndScheme& e) {
  if (e.kind == EndScheme::Kind::anchored) {
    int v = lt.vertex_of_node(e.anchor_node);
    if (v < 0) throw LevelError("anchored end node not in level tree: " + e.anchor_node);
    return lt.tree().vertex_point(v);
  }
  int j = chain_next(e, lt.level());
  if (j < 0 || j >= m.tower.size())
    throw LevelError("end " + e.name + " not defined past level " +
                     std::to_string(lt.level()));
  std::string node = attach_node(m.tower, j);
  int v = lt.vertex_of_node(node);
  if (v < 0)
    throw ModelError("end " + e.name + ": chain arc " + std::to_string(j + 1) +
                     " does not attach inside T_" + std::to_string(lt.level()));
  return lt.tree().vertex_point(v);
}

EndMatrix ideal_end_coordinates(const Model& m, const LevelTree& lt) {
  EndMatrix em;
  for (const EndScheme& e : m.ends) {
    em.names.push_back(e.name);
    em.representatives.push_back(end_representative(m, lt, e));
  }
  size_t n = em.representatives.size();
  em.dist.assign(n, std::vector<Rat>(n, Rat(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      em.dist[i][j] = em.dist[j][i] =
          distance(lt.tree(), em.representatives[i], em.representatives[j]);
  return em;
}

namespace {

// squared Euclidean distance from p to segment [a,b], exact
Rat sqdist_point_segment(const std::pair<Rat, Rat>& p, const std::pair<Rat, Rat>& a,
                         const std::pair<Rat, Rat>& b) {
  Rat dx = b.first - a.first, dy = b.second - a.second;
  Rat px = p.first - a.first, py = p.second - a.second;
  Rat den = dx * dx + dy * dy;
  Rat t = den == 0 ? Rat(0) : (px * dx + py * dy) / den;
  if (t < 0) t = 0;
  if (t > 1) t = 1;
  Rat rx = px - t * dx, ry = py - t * dy;
  return rx * rx + ry * ry;
}

std::optional<std::pair<Rat, Rat>> planar_of_coord(const Tower& tw, const TowerCoord& c) {
  const TowerArc& a = tw.arcs[c.arc];
  for (size_t k = 0; k + 1 < a.nodes.size(); ++k) {
    if (!(a.coords[k] <= c.t && c.t <= a.coords[k + 1])) continue;
    auto pu = tw.planar.find(a.nodes[k]);
    auto pv = tw.planar.find(a.nodes[k + 1]);
    if (pu == tw.planar.end() || pv == tw.planar.end()) return std::nullopt;
    Rat s = (c.t - a.coords[k]) / (a.coords[k + 1] - a.coords[k]);
    return std::make_pair(pu->second.first + s * (pv->second.first - pu->second.first),
                          pu->second.second + s * (pv->second.second - pu->second.second));
  }
  return std::nullopt;
}

}  // namespace

std::vector<std::string> validate_accumulation(const Model& m, int cutoff) {
  std::vector<std::string> problems;
  if (m.tower.planar.empty()) return problems;
  for (const EndScheme& e : m.ends) {
    if (e.kind != EndScheme::Kind::chain) continue;
    auto lim = m.limits.find(e.name);
    if (lim == m.limits.end() || lim->second.kind == LimitDecl::Kind::ideal) continue;

    // geometry of the declared limit set
    std::vector<std::array<std::pair<Rat, Rat>, 2>> limit_segs;
    auto add_seg = [&](const TowerCoord& a, const TowerCoord& b) -> bool {
      auto pa = planar_of_coord(m.tower, a);
      auto pb = planar_of_coord(m.tower, b);
      if (!pa || !pb) return false;
      limit_segs.push_back({*pa, *pb});
      return true;
    };
    bool ok = true;
    if (lim->second.kind == LimitDecl::Kind::point) {
      ok = add_seg(lim->second.point, lim->second.point);
    } else {
      for (auto& [arc, lo, hi] : lim->second.segs) {
        const TowerArc& ta = m.tower.arcs[arc];
        // split at the arc's own nodes so each planar piece is straight
        std::vector<Rat> cuts{lo, hi};
        for (const Rat& c : ta.coords)
          if (lo < c && c < hi) cuts.push_back(c);
        std::sort(cuts.begin(), cuts.end());
        for (size_t k = 0; k + 1 < cuts.size(); ++k)
          ok = ok && add_seg(TowerCoord{arc, cuts[k]}, TowerCoord{arc, cuts[k + 1]});
      }
    }
    if (!ok || limit_segs.empty()) continue;  // not checkable without coordinates

    // squared distance of each chain attach node to the limit set
    std::vector<Rat> dists;
    for (int j = std::max(e.start, 1); j < std::min(m.tower.size(), cutoff); ++j) {
      if (!chain_contains(e, j)) continue;
      std::string node = attach_node(m.tower, j);
      auto p = m.tower.planar.find(node);
      if (p == m.tower.planar.end()) continue;
      Rat best = sqdist_point_segment(p->second, limit_segs[0][0], limit_segs[0][1]);
      for (auto& s : limit_segs) best = std::min(best, sqdist_point_segment(p->second, s[0], s[1]));
      dists.push_back(best);
    }
    for (size_t k = 0; k + 1 < dists.size(); ++k)
      if (dists[k + 1] > dists[k]) {
        problems.push_back("end " + e.name +
                           ": chain drifts away from the declared limit set");
        break;
      }
    if (dists.size() >= 2 && !(dists.back() < dists.front()))
      problems.push_back("end " + e.name + ": chain does not approach the declared limit set");
  }
  return problems;
}

DendriteCheck dendrite_check(const Model& m, int level, int prefix) {
  DendriteCheck out;
  out.level = level;
  out.prefix = prefix;
  out.tail_bound = pow2_neg(level);
  out.fiber_bound = 2 * pow2_neg(level);
  LevelTree lt(m.tower, prefix);
  SegmentSet tn = lt.sublevel_set(level);

  // tail bound: samples at all vertices and edge midpoints
  Rat max_tail = 0;
  for (int v = 0; v < lt.tree().vertex_count(); ++v) {
    TreePoint p = lt.tree().vertex_point(v);
    max_tail = std::max(max_tail, distance(lt.tree(), p, quasi_retract(lt.tree(), tn, p, false)));
  }
  for (int e = 0; e < lt.tree().edge_count(); ++e) {
    TreePoint p{e, Rat(1, 2)};
    max_tail = std::max(max_tail, distance(lt.tree(), p, quasi_retract(lt.tree(), tn, p, false)));
  }
  out.max_tail_distance = max_tail;

  // fiber diameters: one fiber per attach point of the tail arcs
  std::set<TreePoint> attach_points;
  for (int j = level; j < prefix; ++j) {
    std::string node = attach_node(m.tower, j);
    int v = lt.vertex_of_node(node);
    if (v < 0) continue;
    TreePoint p = lt.tree().vertex_point(v);
    attach_points.insert(quasi_retract(lt.tree(), tn, p, false));
  }
  Rat max_fiber = 0;
  for (const TreePoint& y : attach_points) {
    SegmentSet fiber = retract_fiber(lt.tree(), tn, SegmentSet::point(lt.tree(), y));
    max_fiber = std::max(max_fiber, set_diameter(lt.tree(), fiber));
  }
  out.max_fiber_diameter = max_fiber;

  // small-mesh cover at a coarse scale (kept small; the bound is what matters)
  int nc = std::min(level, 6);
  SegmentSet tnc = lt.sublevel_set(nc);
  Rat eps = 4 * pow2_neg(nc);
  Rat cell = eps / 3;
  out.cover_bound = eps;
  Rat max_cover = 0;
  int cells = 0;
  for (auto& [e, list] : tnc.intervals()) {
    Rat dlen = lt.tree().edge(e).length;
    for (auto& iv : list) {
      Rat span = iv.second - iv.first;
      Int pieces_i = rat_floor(span * dlen / cell) + 1;
      int pieces = static_cast<int>(pieces_i);
      for (int k = 0; k < pieces; ++k) {
        Rat a = iv.first + span * k / pieces;
        Rat b = iv.first + span * (k + 1) / pieces;
        SegmentSet piece;
        piece.add_interval(lt.tree(), e, a, b);
        SegmentSet di = retract_fiber(lt.tree(), tnc, piece);
        max_cover = std::max(max_cover, set_diameter(lt.tree(), di));
        ++cells;
      }
    }
  }
  out.cover_cells = cells;
  out.max_cover_diameter = max_cover;
  out.ok = max_tail <= out.tail_bound && max_fiber <= out.fiber_bound &&
           max_cover <= out.cover_bound;
  return out;
}

}  // namespace ucc
