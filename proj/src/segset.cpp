#include "ucc/segset.hpp"

#include <algorithm>
#include <functional>

namespace ucc {

SegmentSet SegmentSet::point(const MTree& tree, const TreePoint& p) {
  SegmentSet s;
  s.add_point(tree, p);
  return s;
}

SegmentSet SegmentSet::whole(const MTree& tree) {
  SegmentSet s;
  for (int e = 0; e < tree.edge_count(); ++e)
    s.ivs_[e].push_back({Rat(0), Rat(1)});
  s.normalize(tree);
  return s;
}

SegmentSet SegmentSet::from_arc(const MTree& tree, const Arc& arc) {
  SegmentSet s;
  s.add_arc(tree, arc);
  return s;
}

void SegmentSet::add_interval(const MTree& tree, int edge, Rat lo, Rat hi) {
  if (lo > hi) std::swap(lo, hi);
  if (lo < 0 || hi > 1) throw ArgumentError("interval outside chart range");
  ivs_[edge].push_back({std::move(lo), std::move(hi)});
  normalize(tree);
}

void SegmentSet::add_point(const MTree& tree, const TreePoint& p) {
  TreePoint c = tree.canonical(p);
  auto v = tree.vertex_of(c);
  if (v)
    vertices_.insert(*v);
  else
    ivs_[c.edge].push_back({c.t, c.t});
  normalize(tree);
}

void SegmentSet::add_arc(const MTree& tree, const Arc& arc) {
  if (arc.degenerate()) {
    add_point(tree, arc.a);
    return;
  }
  for (const ArcSeg& s : arc.segs) ivs_[s.edge].push_back({s.lo, s.hi});
  normalize(tree);
}

void SegmentSet::normalize(const MTree& tree) {
  std::map<int, std::vector<std::pair<Rat, Rat>>> out;
  for (auto& [e, list] : ivs_) {
    std::vector<std::pair<Rat, Rat>> keep;
    for (auto& iv : list) {
      if (iv.first == iv.second) {
        if (iv.first == 0) {
          vertices_.insert(tree.edge(e).u);
          continue;
        }
        if (iv.first == 1) {
          vertices_.insert(tree.edge(e).v);
          continue;
        }
      }
      keep.push_back(iv);
    }
    if (keep.empty()) continue;
    std::sort(keep.begin(), keep.end());
    std::vector<std::pair<Rat, Rat>> merged;
    for (auto& iv : keep) {
      if (!merged.empty() && iv.first <= merged.back().second)
        merged.back().second = std::max(merged.back().second, iv.second);
      else
        merged.push_back(iv);
    }
    out[e] = std::move(merged);
  }
  ivs_ = std::move(out);
  // drop vertices already covered by an interval on an incident edge
  for (auto it = vertices_.begin(); it != vertices_.end();) {
    bool covered = false;
    for (int e : tree.incident(*it)) {
      Rat c = tree.edge(e).u == *it ? Rat(0) : Rat(1);
      auto f = ivs_.find(e);
      if (f == ivs_.end()) continue;
      for (auto& iv : f->second)
        if (iv.first <= c && c <= iv.second) {
          covered = true;
          break;
        }
      if (covered) break;
    }
    it = covered ? vertices_.erase(it) : std::next(it);
  }
}

bool SegmentSet::contains(const MTree& tree, const TreePoint& p) const {
  TreePoint c = tree.canonical(p);
  auto v = tree.vertex_of(c);
  if (v) {
    if (vertices_.count(*v)) return true;
    for (int e : tree.incident(*v)) {
      Rat coord = tree.edge(e).u == *v ? Rat(0) : Rat(1);
      auto f = ivs_.find(e);
      if (f == ivs_.end()) continue;
      for (auto& iv : f->second)
        if (iv.first <= coord && coord <= iv.second) return true;
    }
    return false;
  }
  auto f = ivs_.find(c.edge);
  if (f == ivs_.end()) return false;
  for (auto& iv : f->second)
    if (iv.first <= c.t && c.t <= iv.second) return true;
  return false;
}

bool SegmentSet::contains_set(const MTree& tree, const SegmentSet& other) const {
  for (auto& [e, list] : other.ivs_) {
    auto f = ivs_.find(e);
    for (auto& iv : list) {
      bool inside = false;
      if (f != ivs_.end())
        for (auto& mine : f->second)
          if (mine.first <= iv.first && iv.second <= mine.second) {
            inside = true;
            break;
          }
      if (!inside) {
        if (iv.first == iv.second &&
            contains(tree, TreePoint{e, iv.first}))
          continue;
        return false;
      }
    }
  }
  for (int v : other.vertices_)
    if (!contains(tree, tree.vertex_point(v))) return false;
  return true;
}

SegmentSet SegmentSet::unite(const MTree& tree, const SegmentSet& other) const {
  SegmentSet s = *this;
  for (auto& [e, list] : other.ivs_)
    for (auto& iv : list) s.ivs_[e].push_back(iv);
  for (int v : other.vertices_) s.vertices_.insert(v);
  s.normalize(tree);
  return s;
}

SegmentSet SegmentSet::intersect(const MTree& tree, const SegmentSet& other) const {
  SegmentSet s;
  for (auto& [e, list] : ivs_) {
    auto f = other.ivs_.find(e);
    if (f == other.ivs_.end()) continue;
    for (auto& a : list)
      for (auto& b : f->second) {
        Rat lo = std::max(a.first, b.first);
        Rat hi = std::min(a.second, b.second);
        if (lo <= hi) s.ivs_[e].push_back({lo, hi});
      }
  }
  for (int v = 0; v < tree.vertex_count(); ++v) {
    if (tree.degree(v) == 0) continue;
    TreePoint p = tree.vertex_point(v);
    if (contains(tree, p) && other.contains(tree, p)) s.vertices_.insert(v);
  }
  s.normalize(tree);
  return s;
}

Rat SegmentSet::total_length(const MTree& tree) const {
  Rat total = 0;
  for (auto& [e, list] : ivs_)
    for (auto& iv : list) total += (iv.second - iv.first) * tree.edge(e).length;
  return total;
}

TreePoint SegmentSet::any_point(const MTree& tree) const {
  if (!ivs_.empty()) {
    auto& [e, list] = *ivs_.begin();
    return tree.canonical(TreePoint{e, list.front().first});
  }
  if (!vertices_.empty()) return tree.vertex_point(*vertices_.begin());
  throw ArgumentError("empty set has no points");
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void join(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

std::vector<SegmentSet> SegmentSet::components(const MTree& tree) const {
  // atoms: one per interval, one per isolated vertex; joined at shared vertices
  struct Atom {
    int edge;       // -1 for isolated vertex
    int idx;        // interval index or vertex id
  };
  std::vector<Atom> atoms;
  std::map<std::pair<int, int>, int> interval_atom;
  for (auto& [e, list] : ivs_)
    for (int i = 0; i < static_cast<int>(list.size()); ++i) {
      interval_atom[{e, i}] = static_cast<int>(atoms.size());
      atoms.push_back({e, i});
    }
  std::map<int, int> vertex_atom;
  for (int v : vertices_) {
    vertex_atom[v] = static_cast<int>(atoms.size());
    atoms.push_back({-1, v});
  }
  UnionFind uf(static_cast<int>(atoms.size()));
  for (int v = 0; v < tree.vertex_count(); ++v) {
    int first = -1;
    auto meet = [&](int atom) {
      if (first == -1)
        first = atom;
      else
        uf.join(first, atom);
    };
    if (vertex_atom.count(v)) meet(vertex_atom[v]);
    for (int e : tree.incident(v)) {
      auto f = ivs_.find(e);
      if (f == ivs_.end()) continue;
      Rat c = tree.edge(e).u == v ? Rat(0) : Rat(1);
      for (int i = 0; i < static_cast<int>(f->second.size()); ++i)
        if (f->second[i].first <= c && c <= f->second[i].second)
          meet(interval_atom[{e, i}]);
    }
  }
  std::map<int, SegmentSet> groups;
  for (int a = 0; a < static_cast<int>(atoms.size()); ++a) {
    SegmentSet& g = groups[uf.find(a)];
    if (atoms[a].edge >= 0)
      g.ivs_[atoms[a].edge].push_back(ivs_.at(atoms[a].edge)[atoms[a].idx]);
    else
      g.vertices_.insert(atoms[a].idx);
  }
  std::vector<SegmentSet> out;
  for (auto& [root, g] : groups) {
    g.normalize(tree);
    out.push_back(std::move(g));
  }
  return out;
}

bool SegmentSet::is_connected(const MTree& tree) const {
  if (empty()) return false;
  return components(tree).size() == 1;
}

std::vector<TreePoint> SegmentSet::boundary_points(const MTree& tree) const {
  std::set<TreePoint> pts;
  for (auto& [e, list] : ivs_)
    for (auto& iv : list) {
      pts.insert(tree.canonical(TreePoint{e, iv.first}));
      pts.insert(tree.canonical(TreePoint{e, iv.second}));
    }
  for (int v : vertices_) pts.insert(tree.vertex_point(v));
  return {pts.begin(), pts.end()};
}

SegmentSet convex_hull(const MTree& tree, const std::vector<TreePoint>& points) {
  if (points.empty()) throw ArgumentError("convex hull of empty set");
  SegmentSet hull = SegmentSet::point(tree, points.front());
  for (size_t i = 1; i < points.size(); ++i)
    hull.add_arc(tree, arc_between(tree, points.front(), points[i]));
  return hull;
}

TreePoint quasi_retract(const MTree& tree, const SegmentSet& Y, const TreePoint& x,
                        bool validate) {
  if (Y.empty()) throw ArgumentError("retraction onto empty set");
  if (validate && !Y.is_connected(tree))
    throw ArgumentError("retraction target is not a subtree");
  TreePoint p = tree.canonical(x);
  if (Y.contains(tree, p)) return p;
  TreePoint anchor = Y.any_point(tree);
  Arc arc = arc_between(tree, p, anchor);
  for (const ArcSeg& seg : arc.segs) {
    // enter point first (vertices may belong to Y via another edge)
    TreePoint enter = tree.canonical(TreePoint{seg.edge, seg.enter_coord()});
    if (Y.contains(tree, enter)) return enter;
    auto f = Y.intervals().find(seg.edge);
    if (f == Y.intervals().end()) continue;
    bool found = false;
    Rat best;
    for (auto& iv : f->second) {
      Rat lo = std::max(iv.first, seg.lo);
      Rat hi = std::min(iv.second, seg.hi);
      if (lo > hi) continue;
      Rat hit = seg.forward ? lo : hi;
      if (!found || (seg.forward ? hit < best : hit > best)) {
        best = hit;
        found = true;
      }
    }
    if (found) return tree.canonical(TreePoint{seg.edge, best});
  }
  return anchor;
}

SegmentSet retract_fiber(const MTree& tree, const SegmentSet& Y, const SegmentSet& Z) {
  if (!Y.is_connected(tree)) throw ArgumentError("Y is not a subtree");
  if (!Y.contains_set(tree, Z)) throw ArgumentError("Z is not contained in Y");
  auto retract_of = [&](const TreePoint& p) {
    return Y.contains(tree, p) ? tree.canonical(p) : quasi_retract(tree, Y, p, false);
  };
  SegmentSet fiber;
  for (int e = 0; e < tree.edge_count(); ++e) {
    std::set<Rat> cuts{Rat(0), Rat(1)};
    for (const SegmentSet* s : {&Y, &Z}) {
      auto f = s->intervals().find(e);
      if (f == s->intervals().end()) continue;
      for (auto& iv : f->second) {
        cuts.insert(iv.first);
        cuts.insert(iv.second);
      }
    }
    std::vector<Rat> bp(cuts.begin(), cuts.end());
    for (size_t i = 0; i + 1 < bp.size(); ++i) {
      TreePoint mid{e, (bp[i] + bp[i + 1]) / 2};
      if (Z.contains(tree, retract_of(mid)))
        fiber.add_interval(tree, e, bp[i], bp[i + 1]);
    }
    for (const Rat& c : bp) {
      TreePoint p{e, c};
      if (Z.contains(tree, retract_of(p))) fiber.add_point(tree, p);
    }
  }
  return fiber;
}

Rat distance_to_set(const MTree& tree, const TreePoint& x, const SegmentSet& S) {
  if (S.contains(tree, x)) return Rat(0);
  bool found = false;
  Rat best;
  auto consider = [&](const TreePoint& p) {
    Rat d = distance(tree, x, p);
    if (!found || d < best) {
      best = d;
      found = true;
    }
  };
  for (const TreePoint& p : S.boundary_points(tree)) consider(p);
  if (!found) throw ArgumentError("distance to empty set");
  return best;
}

MTree extract_tree(const MTree& tree, const SegmentSet& S, std::vector<TreePoint>* where) {
  std::map<TreePoint, int> node_id;
  std::vector<TreePoint> nodes;
  auto id_of = [&](const TreePoint& raw) {
    TreePoint p = tree.canonical(raw);
    auto it = node_id.find(p);
    if (it != node_id.end()) return it->second;
    int id = static_cast<int>(nodes.size());
    node_id[p] = id;
    nodes.push_back(p);
    return id;
  };
  std::vector<Edge> edges;
  for (auto& [e, list] : S.intervals())
    for (auto& iv : list) {
      if (iv.first == iv.second) {
        id_of(TreePoint{e, iv.first});
        continue;
      }
      int a = id_of(TreePoint{e, iv.first});
      int b = id_of(TreePoint{e, iv.second});
      edges.push_back(Edge{a, b, (iv.second - iv.first) * tree.edge(e).length});
    }
  for (int v : S.isolated_vertices()) id_of(tree.vertex_point(v));
  if (nodes.empty()) throw ArgumentError("cannot extract empty set");
  if (where) *where = nodes;
  return MTree(static_cast<int>(nodes.size()), std::move(edges));
}

Rat set_diameter(const MTree& tree, const SegmentSet& S) {
  if (S.empty()) throw ArgumentError("diameter of empty set");
  std::vector<TreePoint> nodes;
  MTree sub = extract_tree(tree, S, &nodes);
  if (sub.vertex_count() <= 1) return Rat(0);
  auto farthest = [&](int start) {
    std::vector<char> seen(sub.vertex_count(), 0);
    std::vector<std::pair<int, Rat>> stack{{start, Rat(0)}};
    seen[start] = 1;
    std::pair<int, Rat> best{start, Rat(0)};
    while (!stack.empty()) {
      auto [v, d] = stack.back();
      stack.pop_back();
      if (d > best.second) best = {v, d};
      for (int e : sub.incident(v)) {
        int w = sub.edge(e).u == v ? sub.edge(e).v : sub.edge(e).u;
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back({w, d + sub.edge(e).length});
        }
      }
    }
    return best;
  };
  auto a = farthest(0);
  auto b = farthest(a.first);
  return b.second;
}

}  // namespace ucc
