#include "ucc/treemap.hpp"

#include <algorithm>
#include <map>

namespace ucc {

namespace {

// image coordinate of t under the piece's affine chart map
Rat piece_map(const MapPiece& p, const Rat& t) {
  Rat k = (p.d_hi - p.d_lo) / (p.s_hi - p.s_lo);
  return p.orient > 0 ? Rat(p.d_lo + (t - p.s_lo) * k) : Rat(p.d_hi - (t - p.s_lo) * k);
}

Rat piece_unmap(const MapPiece& p, const Rat& d) {
  Rat k = (p.s_hi - p.s_lo) / (p.d_hi - p.d_lo);
  return p.orient > 0 ? Rat(p.s_lo + (d - p.d_lo) * k) : Rat(p.s_lo + (p.d_hi - d) * k);
}

}  // namespace

TreeMap::TreeMap(const MTree& tree, std::vector<MapPiece> pieces)
    : tree_(&tree), pieces_(std::move(pieces)) {
  for (const MapPiece& p : pieces_) {
    if (p.src_edge < 0 || p.src_edge >= tree.edge_count() || p.dst_edge < 0 ||
        p.dst_edge >= tree.edge_count())
      throw ModelError("map piece on missing edge");
    if (!(0 <= p.s_lo && p.s_lo < p.s_hi && p.s_hi <= 1) ||
        !(0 <= p.d_lo && p.d_lo < p.d_hi && p.d_hi <= 1))
      throw ModelError("map piece with degenerate or out-of-range interval");
    if (p.orient != 1 && p.orient != -1) throw ModelError("map piece orientation must be +-1");
  }
  std::sort(pieces_.begin(), pieces_.end(), [](const MapPiece& a, const MapPiece& b) {
    if (a.src_edge != b.src_edge) return a.src_edge < b.src_edge;
    if (a.s_lo != b.s_lo) return a.s_lo < b.s_lo;
    return a.s_hi < b.s_hi;
  });
  // disjoint interiors and continuity along each edge
  for (size_t i = 0; i + 1 < pieces_.size(); ++i) {
    const MapPiece& a = pieces_[i];
    const MapPiece& b = pieces_[i + 1];
    if (a.src_edge != b.src_edge) continue;
    if (b.s_lo < a.s_hi) throw ModelError("map pieces overlap on an edge");
    if (b.s_lo == a.s_hi) {
      TreePoint ia = tree.canonical(TreePoint{a.dst_edge, piece_map(a, a.s_hi)});
      TreePoint ib = tree.canonical(TreePoint{b.dst_edge, piece_map(b, b.s_lo)});
      if (ia != ib) throw ModelError("map discontinuous at a breakpoint");
    }
  }
  // continuity at vertices: every covered alias of a vertex maps to one point
  for (int v = 0; v < tree.vertex_count(); ++v) {
    std::optional<TreePoint> img;
    for (int e : tree.incident(v)) {
      Rat t = tree.edge(e).u == v ? Rat(0) : Rat(1);
      for (const MapPiece& p : pieces_) {
        if (p.src_edge != e || t < p.s_lo || t > p.s_hi) continue;
        TreePoint q = tree.canonical(TreePoint{p.dst_edge, piece_map(p, t)});
        if (!img)
          img = q;
        else if (*img != q)
          throw ModelError("map discontinuous at a vertex");
      }
    }
  }
  // totality: each edge exactly tiled
  total_ = true;
  for (int e = 0; e < tree.edge_count() && total_; ++e) {
    Rat at = 0;
    for (const MapPiece& p : pieces_) {
      if (p.src_edge != e) continue;
      if (p.s_lo > at) break;
      at = std::max(at, p.s_hi);
    }
    if (at != 1) total_ = false;
  }
}

SegmentSet TreeMap::domain() const {
  SegmentSet s;
  for (const MapPiece& p : pieces_) s.add_interval(*tree_, p.src_edge, p.s_lo, p.s_hi);
  return s;
}

SegmentSet TreeMap::image() const {
  SegmentSet s;
  for (const MapPiece& p : pieces_) s.add_interval(*tree_, p.dst_edge, p.d_lo, p.d_hi);
  return s;
}

std::optional<TreePoint> TreeMap::apply(const TreePoint& x) const {
  TreePoint c = tree_->canonical(x);
  for (const TreePoint& alias : tree_->aliases(c))
    for (const MapPiece& p : pieces_) {
      if (p.src_edge != alias.edge || alias.t < p.s_lo || alias.t > p.s_hi) continue;
      return tree_->canonical(TreePoint{p.dst_edge, piece_map(p, alias.t)});
    }
  return std::nullopt;
}

TreePoint TreeMap::operator()(const TreePoint& x) const {
  auto y = apply(x);
  if (!y) throw EscapeError("point outside the domain of the partial map");
  return *y;
}

TreeMap TreeMap::compose(const TreeMap& g) const {
  std::vector<MapPiece> out;
  for (const MapPiece& G : g.pieces_)
    for (const MapPiece& F : pieces_) {
      if (F.src_edge != G.dst_edge) continue;
      Rat c = std::max(G.d_lo, F.s_lo), d = std::min(G.d_hi, F.s_hi);
      if (!(c < d)) continue;
      Rat a = piece_unmap(G, c), b = piece_unmap(G, d);
      if (a > b) std::swap(a, b);
      Rat fc = piece_map(F, c), fd = piece_map(F, d);
      out.push_back(MapPiece{G.src_edge, a, b, F.dst_edge, std::min(fc, fd),
                             std::max(fc, fd), F.orient * G.orient});
    }
  return TreeMap(*tree_, std::move(out));
}

bool TreeMap::injective() const {
  // open image intervals per edge must be pairwise disjoint
  std::vector<std::pair<std::pair<int, Rat>, Rat>> ivs;
  for (const MapPiece& p : pieces_) ivs.push_back({{p.dst_edge, p.d_lo}, p.d_hi});
  std::sort(ivs.begin(), ivs.end());
  for (size_t i = 0; i + 1 < ivs.size(); ++i)
    if (ivs[i].first.first == ivs[i + 1].first.first && ivs[i + 1].first.second < ivs[i].second)
      return false;
  // endpoint identifications: one source per attained boundary image
  std::map<TreePoint, TreePoint> src_of;
  for (const MapPiece& p : pieces_)
    for (const Rat& s : {p.s_lo, p.s_hi}) {
      TreePoint from = tree_->canonical(TreePoint{p.src_edge, s});
      TreePoint to = tree_->canonical(TreePoint{p.dst_edge, piece_map(p, s)});
      auto [it, fresh] = src_of.emplace(to, from);
      if (!fresh && it->second != from) return false;
    }
  return true;
}

TreeMap TreeMap::inverse() const {
  if (!injective()) throw ModelError("map is not injective, no inverse");
  std::vector<MapPiece> out;
  for (const MapPiece& p : pieces_)
    out.push_back(MapPiece{p.dst_edge, p.d_lo, p.d_hi, p.src_edge, p.s_lo, p.s_hi, p.orient});
  return TreeMap(*tree_, std::move(out));
}

bool TreeMap::is_identity() const {
  if (!total_) return false;
  for (const MapPiece& p : pieces_)
    if (p.src_edge != p.dst_edge || p.orient != 1 || p.s_lo != p.d_lo || p.s_hi != p.d_hi)
      return false;
  return true;
}

SegmentSet TreeMap::fixed_set() const {
  SegmentSet out;
  for (const MapPiece& p : pieces_) {
    if (p.src_edge == p.dst_edge) {
      // m(t) = c + beta t on [s_lo, s_hi]
      Rat k = (p.d_hi - p.d_lo) / (p.s_hi - p.s_lo);
      Rat beta = p.orient > 0 ? k : Rat(-k);
      Rat c = p.orient > 0 ? Rat(p.d_lo - p.s_lo * k) : Rat(p.d_hi + p.s_lo * k);
      if (beta == 1) {
        if (c == 0) out.add_interval(*tree_, p.src_edge, p.s_lo, p.s_hi);
      } else {
        Rat t = c / (1 - beta);
        if (p.s_lo <= t && t <= p.s_hi)
          out.add_point(*tree_, tree_->canonical(TreePoint{p.src_edge, t}));
      }
    }
    // endpoints identified across edges (vertex fixed points)
    for (const Rat& s : {p.s_lo, p.s_hi}) {
      TreePoint from = tree_->canonical(TreePoint{p.src_edge, s});
      TreePoint to = tree_->canonical(TreePoint{p.dst_edge, piece_map(p, s)});
      if (from == to) out.add_point(*tree_, from);
    }
  }
  return out;
}

SegmentSet TreeMap::image_of(const SegmentSet& s) const {
  SegmentSet out;
  for (const MapPiece& p : pieces_) {
    auto it = s.intervals().find(p.src_edge);
    if (it == s.intervals().end()) continue;
    for (auto& iv : it->second) {
      Rat c = std::max(iv.first, p.s_lo), d = std::min(iv.second, p.s_hi);
      if (c > d) continue;
      Rat fc = piece_map(p, c), fd = piece_map(p, d);
      if (fc > fd) std::swap(fc, fd);
      if (fc == fd)
        out.add_point(*tree_, tree_->canonical(TreePoint{p.dst_edge, fc}));
      else
        out.add_interval(*tree_, p.dst_edge, fc, fd);
    }
  }
  for (int v : s.isolated_vertices())
    if (auto q = apply(tree_->vertex_point(v))) out.add_point(*tree_, *q);
  return out;
}

SegmentSet TreeMap::preimage_of(const SegmentSet& s) const {
  SegmentSet out;
  auto pull = [&](const MapPiece& p, Rat c, Rat d) {
    Rat a = piece_unmap(p, c), b = piece_unmap(p, d);
    if (a > b) std::swap(a, b);
    if (a == b)
      out.add_point(*tree_, tree_->canonical(TreePoint{p.src_edge, a}));
    else
      out.add_interval(*tree_, p.src_edge, a, b);
  };
  for (const MapPiece& p : pieces_) {
    auto it = s.intervals().find(p.dst_edge);
    if (it != s.intervals().end())
      for (auto& iv : it->second) {
        Rat c = std::max(iv.first, p.d_lo), d = std::min(iv.second, p.d_hi);
        if (c <= d) pull(p, c, d);
      }
    for (int v : s.isolated_vertices()) {
      auto t = tree_->coord_on_edge(tree_->vertex_point(v), p.dst_edge);
      if (t && p.d_lo <= *t && *t <= p.d_hi) pull(p, *t, *t);
    }
  }
  return out;
}

Rat TreeMap::max_expansion() const {
  Rat best = 0;
  for (const MapPiece& p : pieces_) {
    Rat r = (p.d_hi - p.d_lo) * tree_->edge(p.dst_edge).length /
            ((p.s_hi - p.s_lo) * tree_->edge(p.src_edge).length);
    best = std::max(best, r);
  }
  return best;
}

Rat continuity_modulus(const TreeMap& f, const Rat& eps) {
  if (eps <= 0) throw ArgumentError("eps must be positive");
  Rat l = f.max_expansion();
  return l <= 1 ? eps : Rat(eps / (3 * l));
}

}  // namespace ucc
