#pragma once

#include <optional>
#include <vector>

#include "ucc/segset.hpp"

namespace ucc {

// One affine piece of a PL map between edges of the same tree: the chart
// interval [s_lo, s_hi] of src_edge maps onto [d_lo, d_hi] of dst_edge,
// increasing when orient > 0, decreasing otherwise. Intervals nondegenerate.
struct MapPiece {
  int src_edge;
  Rat s_lo, s_hi;
  int dst_edge;
  Rat d_lo, d_hi;
  int orient = 1;
};

// A piecewise-linear map from a closed subset of a finite metric tree into
// the same tree. Total maps cover every edge. Continuity across piece
// boundaries and at vertices is validated on construction.
class TreeMap {
 public:
  TreeMap(const MTree& tree, std::vector<MapPiece> pieces);

  const MTree& tree() const { return *tree_; }
  const std::vector<MapPiece>& pieces() const { return pieces_; }

  bool total() const { return total_; }
  SegmentSet domain() const;
  SegmentSet image() const;

  // Image of a point, or nullopt when no piece covers it (any alias counts).
  std::optional<TreePoint> apply(const TreePoint& p) const;
  // Throwing variant.
  TreePoint operator()(const TreePoint& p) const;

  // this after g, i.e. x -> this(g(x)), defined where both legs are.
  TreeMap compose(const TreeMap& g) const;
  TreeMap inverse() const;  // requires injective()

  // Pairwise disjoint open image intervals (a certificate of injectivity
  // for a continuous map of a tree).
  bool injective() const;

  bool is_identity() const;

  SegmentSet fixed_set() const;
  SegmentSet image_of(const SegmentSet& s) const;
  SegmentSet preimage_of(const SegmentSet& s) const;

  // Largest per-piece metric expansion factor (d-lengths).
  Rat max_expansion() const;

 private:
  const MTree* tree_;
  std::vector<MapPiece> pieces_;  // sorted by (src_edge, s_lo)
  bool total_ = false;
};

// delta such that d(x, y) < delta implies d(f(x), f(y)) < eps, from the
// global Lipschitz constant of the map.
Rat continuity_modulus(const TreeMap& f, const Rat& eps);

}  // namespace ucc
