#pragma once

#include <map>
#include <set>
#include <vector>

#include "ucc/mtree.hpp"

namespace ucc {

// A closed subset of a tree: a union of closed chart intervals per edge plus
// isolated vertex points. Normalized so that set equality is structural:
// intervals per edge are sorted, disjoint and merged; vertex-coincident
// degenerate intervals live in the vertex list; vertices already covered by
// an interval are dropped.
class SegmentSet {
 public:
  SegmentSet() = default;

  static SegmentSet point(const MTree& tree, const TreePoint& p);
  static SegmentSet whole(const MTree& tree);
  static SegmentSet from_arc(const MTree& tree, const Arc& arc);

  void add_interval(const MTree& tree, int edge, Rat lo, Rat hi);
  void add_point(const MTree& tree, const TreePoint& p);
  void add_arc(const MTree& tree, const Arc& arc);

  bool empty() const { return ivs_.empty() && vertices_.empty(); }
  bool contains(const MTree& tree, const TreePoint& p) const;
  bool contains_set(const MTree& tree, const SegmentSet& other) const;

  SegmentSet unite(const MTree& tree, const SegmentSet& other) const;
  SegmentSet intersect(const MTree& tree, const SegmentSet& other) const;

  bool operator==(const SegmentSet& o) const {
    return ivs_ == o.ivs_ && vertices_ == o.vertices_;
  }
  bool operator!=(const SegmentSet& o) const { return !(*this == o); }

  const std::map<int, std::vector<std::pair<Rat, Rat>>>& intervals() const { return ivs_; }
  const std::set<int>& isolated_vertices() const { return vertices_; }

  // Sum of covered length (interval span times edge length).
  Rat total_length(const MTree& tree) const;

  // Some point of the set (throws ArgumentError when empty).
  TreePoint any_point(const MTree& tree) const;

  bool is_connected(const MTree& tree) const;
  std::vector<SegmentSet> components(const MTree& tree) const;

  // All interval endpoints and isolated vertices, canonicalized, deduplicated.
  std::vector<TreePoint> boundary_points(const MTree& tree) const;

 private:
  void normalize(const MTree& tree);

  std::map<int, std::vector<std::pair<Rat, Rat>>> ivs_;
  std::set<int> vertices_;
};

// Minimal subtree containing all points of S (Steiner hull). S nonempty.
SegmentSet convex_hull(const MTree& tree, const std::vector<TreePoint>& points);

// The unique y in Y with [x,y] meeting Y only at y. Y must be a nonempty
// connected set; pass validate = false when the caller has already checked.
TreePoint quasi_retract(const MTree& tree, const SegmentSet& Y, const TreePoint& x,
                        bool validate = true);

// r_Y^{-1}(Z) for a connected Z inside Y; connected, contains Z.
SegmentSet retract_fiber(const MTree& tree, const SegmentSet& Y, const SegmentSet& Z);

// Path distance from x to the (nonempty) set S.
Rat distance_to_set(const MTree& tree, const TreePoint& x, const SegmentSet& S);

// Longest path distance within a connected set (0 for a point).
Rat set_diameter(const MTree& tree, const SegmentSet& S);

// Materialize a connected SegmentSet as a standalone MTree. `where` receives,
// per new vertex, the corresponding point of the parent tree.
MTree extract_tree(const MTree& tree, const SegmentSet& S, std::vector<TreePoint>* where);

}  // namespace ucc
