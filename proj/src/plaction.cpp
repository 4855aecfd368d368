#include "ucc/plaction.hpp"

#include <algorithm>
#include <set>

namespace ucc {

namespace {

Rat pl_piece_map(const PLPiece& p, const Rat& t) {
  Rat k = (p.d_hi - p.d_lo) / (p.s_hi - p.s_lo);
  return p.orient > 0 ? Rat(p.d_lo + (t - p.s_lo) * k) : Rat(p.d_hi - (t - p.s_lo) * k);
}

}  // namespace

std::optional<TowerCoord> PLMap::apply(const TowerCoord& c) const {
  const PLPiece* best = nullptr;
  for (const PLPiece& p : pieces) {
    if (p.src_arc != c.arc || c.t < p.s_lo || c.t > p.s_hi) continue;
    if (!best || std::make_pair(p.src_arc, p.s_lo) < std::make_pair(best->src_arc, best->s_lo))
      best = &p;
  }
  if (!best) return std::nullopt;
  return TowerCoord{best->dst_arc, pl_piece_map(*best, c.t)};
}

int PLMap::depth() const {
  int d = 0;
  for (const PLPiece& p : pieces) d = std::max({d, p.src_arc + 1, p.dst_arc + 1});
  return d;
}

TreeMap induced_map(const LevelTree& lt, const PLMap& f, bool* complete) {
  if (complete) *complete = true;
  std::vector<MapPiece> out;
  // chart boundaries of each arc's edges in the level tree
  std::vector<std::vector<std::pair<Rat, int>>> arc_edges(lt.level());
  for (int e = 0; e < lt.tree().edge_count(); ++e)
    arc_edges[lt.meta(e).arc].push_back({lt.meta(e).lo, e});
  for (auto& v : arc_edges) std::sort(v.begin(), v.end());

  for (const PLPiece& p : f.pieces) {
    if (p.src_arc >= lt.level()) continue;
    if (p.dst_arc >= lt.level()) {
      if (complete) *complete = false;
      continue;
    }
    std::vector<Rat> cuts{p.s_lo, p.s_hi};
    for (auto& [lo, e] : arc_edges[p.src_arc]) {
      for (const Rat& c : {lt.meta(e).lo, lt.meta(e).hi})
        if (p.s_lo < c && c < p.s_hi) cuts.push_back(c);
    }
    Rat dspan = p.d_hi - p.d_lo, sspan = p.s_hi - p.s_lo;
    for (auto& [lo, e] : arc_edges[p.dst_arc])
      for (const Rat& c : {lt.meta(e).lo, lt.meta(e).hi})
        if (p.d_lo < c && c < p.d_hi) {
          Rat t = p.orient > 0 ? Rat(p.s_lo + (c - p.d_lo) / dspan * sspan)
                               : Rat(p.s_lo + (p.d_hi - c) / dspan * sspan);
          cuts.push_back(t);
        }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (size_t k = 0; k + 1 < cuts.size(); ++k) {
      Rat a = cuts[k], b = cuts[k + 1];
      Rat fa = pl_piece_map(p, a), fb = pl_piece_map(p, b);
      Rat mlo = std::min(fa, fb), mhi = std::max(fa, fb);
      int se = -1, de = -1;
      for (auto& [lo, e] : arc_edges[p.src_arc])
        if (lt.meta(e).lo <= a && b <= lt.meta(e).hi) se = e;
      for (auto& [lo, e] : arc_edges[p.dst_arc])
        if (lt.meta(e).lo <= mlo && mhi <= lt.meta(e).hi) de = e;
      if (se < 0 || de < 0) throw ModelError("map piece outside the tower charts");
      const auto& sm = lt.meta(se);
      const auto& dm = lt.meta(de);
      out.push_back(MapPiece{se, (a - sm.lo) / (sm.hi - sm.lo), (b - sm.lo) / (sm.hi - sm.lo),
                             de, (mlo - dm.lo) / (dm.hi - dm.lo),
                             (mhi - dm.lo) / (dm.hi - dm.lo), p.orient});
    }
  }
  return TreeMap(lt.tree(), std::move(out));
}

std::string word_str(const Word& w, const std::vector<std::string>& names) {
  if (w.empty()) return "e";
  std::string s;
  for (int l : w) {
    if (!s.empty()) s += " ";
    s += l > 0 ? names[l - 1] : names[-l - 1] + "^-1";
  }
  return s;
}

std::vector<Word> all_words(int num_gens, int radius) {
  std::vector<Word> out{{}};
  size_t level_begin = 0;
  for (int len = 1; len <= radius; ++len) {
    size_t level_end = out.size();
    for (size_t i = level_begin; i < level_end; ++i)
      for (int g = 1; g <= num_gens; ++g)
        for (int l : {g, -g}) {
          if (!out[i].empty() && out[i].back() == -l) continue;
          Word w = out[i];
          w.push_back(l);
          out.push_back(std::move(w));
        }
    level_begin = level_end;
  }
  return out;
}

int GroupAction::gen_index(const std::string& name) const {
  for (int i = 0; i < static_cast<int>(generators.size()); ++i)
    if (generators[i].name == name) return i;
  return -1;
}

namespace {

TreeMap identity_map(const MTree& tree) {
  std::vector<MapPiece> pieces;
  for (int e = 0; e < tree.edge_count(); ++e)
    pieces.push_back(MapPiece{e, Rat(0), Rat(1), e, Rat(0), Rat(1), 1});
  return TreeMap(tree, std::move(pieces));
}

}  // namespace

ActionOnLevel::ActionOnLevel(const GroupAction& action, const LevelTree& lt)
    : action_(&action), lt_(&lt) {
  for (const PLMap& g : action.generators) {
    bool ok = true;
    TreeMap m = induced_map(lt, g, &ok);
    if (!m.injective())
      throw ModelError("generator " + g.name + " is not injective on the level tree");
    invs_.push_back(m.inverse());
    gens_.push_back(std::move(m));
    complete_.push_back(ok);
  }
}

TreeMap ActionOnLevel::word_map(const Word& w) const {
  TreeMap m = identity_map(lt_->tree());
  for (int l : w) m = m.compose(letter(l));
  return m;
}

std::optional<TreePoint> ActionOnLevel::apply_word(const Word& w, const TreePoint& p) const {
  std::optional<TreePoint> q = lt_->tree().canonical(p);
  for (auto it = w.rbegin(); it != w.rend() && q; ++it) q = letter(*it).apply(*q);
  return q;
}

std::vector<std::string> ActionOnLevel::check_relations() const {
  std::vector<std::string> problems;
  bool all_total = true;
  for (size_t i = 0; i < gens_.size(); ++i) all_total = all_total && gens_[i].total();
  std::vector<std::string> names;
  for (const PLMap& g : action_->generators) names.push_back(g.name);
  for (const Word& r : action_->relations) {
    TreeMap m = word_map(r);
    bool id_pieces = true;
    for (const MapPiece& p : m.pieces())
      if (p.src_edge != p.dst_edge || p.orient != 1 || p.s_lo != p.d_lo || p.s_hi != p.d_hi)
        id_pieces = false;
    if (!id_pieces || (all_total && !m.total()))
      problems.push_back("relation does not act as the identity: " + word_str(r, names));
  }
  return problems;
}

OrbitHull orbit_hull(const ActionOnLevel& act, const std::vector<TreePoint>& seeds,
                     int max_radius) {
  OrbitHull out;
  const MTree& tree = act.level_tree().tree();
  std::set<TreePoint> pts;
  std::vector<TreePoint> frontier;
  for (const TreePoint& s : seeds) {
    TreePoint c = tree.canonical(s);
    if (pts.insert(c).second) frontier.push_back(c);
  }
  if (pts.empty()) throw ArgumentError("orbit hull needs at least one seed");
  auto rebuild = [&] {
    out.hull = convex_hull(tree, std::vector<TreePoint>(pts.begin(), pts.end()));
  };
  auto invariant = [&] {
    for (int i = 0; i < act.num_gens(); ++i) {
      if (!out.hull.contains_set(tree, act.gen(i).image_of(out.hull))) return false;
      if (!out.hull.contains_set(tree, act.gen_inv(i).image_of(out.hull))) return false;
    }
    return true;
  };
  rebuild();
  for (int r = 1; r <= max_radius; ++r) {
    if (invariant()) {
      out.stabilized = true;
      return out;
    }
    std::vector<TreePoint> next;
    for (const TreePoint& p : frontier)
      for (int i = 0; i < act.num_gens(); ++i)
        for (const TreeMap* m : {&act.gen(i), &act.gen_inv(i)}) {
          auto q = m->apply(p);
          if (!q) {
            out.escaped = true;
            return out;
          }
          if (pts.insert(*q).second) next.push_back(*q);
        }
    frontier = std::move(next);
    out.radius = r;
    rebuild();
    if (frontier.empty()) break;
  }
  out.stabilized = invariant();
  return out;
}

}  // namespace ucc
