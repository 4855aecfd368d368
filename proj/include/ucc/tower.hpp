#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "ucc/segset.hpp"

namespace ucc {

// A point of the tower in arc-chart coordinates: chart parameter t in [0,1]
// on arc `arc` (0-based index into Tower::arcs).
struct TowerCoord {
  int arc = -1;
  Rat t;

  friend bool operator==(const TowerCoord& a, const TowerCoord& b) {
    return a.arc == b.arc && a.t == b.t;
  }
  friend bool operator<(const TowerCoord& a, const TowerCoord& b) {
    if (a.arc != b.arc) return a.arc < b.arc;
    return a.t < b.t;
  }
};

// One tower arc: a chart [0,1] passing through named nodes at strictly
// increasing coordinates (first 0, last 1). Nodes shared with earlier arcs
// define the (single-point) intersections. Arc i carries metric weight
// 2^-(i+1), the weight of I_{i+1} in the tower metric.
struct TowerArc {
  std::string name;
  std::vector<std::string> nodes;
  std::vector<Rat> coords;
};

struct Tower {
  std::vector<TowerArc> arcs;
  std::map<std::string, std::pair<Rat, Rat>> planar;  // optional node coords

  int size() const { return static_cast<int>(arcs.size()); }
  int arc_index(const std::string& name) const;  // -1 if absent
};

struct TowerViolation {
  int level;  // 1-based level at which the violation appears
  std::string code;     // non_tree | bad_intersection | not_strict | bad_arc
  std::string message;
};

std::vector<TowerViolation> validate_tower(const Tower& tw);

// Node where arc i (i >= 1) meets T_i; empty if the tower is malformed there.
std::string attach_node(const Tower& tw, int arc);

// T_n with the tower metric: a finite MTree whose edge lengths are the
// weighted chart spans, so plain path length equals d. This is the
// level-n completion approximant (Hausdorff distance <= 2^-n from the true
// completion).
class LevelTree {
 public:
  LevelTree(const Tower& tw, int level);

  const MTree& tree() const { return tree_; }
  int level() const { return level_; }
  const Tower& tower() const { return *tower_; }

  int vertex_of_node(const std::string& node) const;  // -1 if absent
  const std::string& node_of_vertex(int v) const { return vertex_node_[v]; }

  // Chart interval [lo, hi] of the edge on its arc; edge.u sits at lo.
  struct EdgeMeta {
    int arc;
    Rat lo, hi;
  };
  const EdgeMeta& meta(int edge) const { return meta_[edge]; }

  TreePoint point_at(const TowerCoord& c) const;
  TowerCoord coord_of(const TreePoint& p) const;

  // Chart length covered by the set, per arc weights ignored.
  Rat chart_length(const SegmentSet& s) const;

  // Closed chart interval [lo,hi] of an arc as a SegmentSet.
  SegmentSet arc_interval(int arc, const Rat& lo, const Rat& hi) const;

  // All of T_m as a subset of this (m <= level).
  SegmentSet sublevel_set(int m) const;

 private:
  const Tower* tower_;
  int level_;
  MTree tree_;
  std::vector<EdgeMeta> meta_;
  std::map<std::string, int> node_vertex_;
  std::vector<std::string> vertex_node_;
  std::vector<std::vector<std::pair<Rat, int>>> arc_edges_;  // per arc: (lo, edge)
};

// Exact tower-metric value between two tower points of T_n.
Rat d_metric(const LevelTree& lt, const TowerCoord& x, const TowerCoord& y);

// ---- ends and accumulation -------------------------------------------------

// An end: either a ray escaping every level along a rule-described chain of
// arc indices (all i >= start with (i - start) mod period in offsets), or a
// fixed tower node (an endpoint of the tower itself).
struct EndScheme {
  enum class Kind { chain, anchored };
  std::string name;
  Kind kind = Kind::chain;
  int start = 0;
  int period = 1;
  std::vector<int> offsets{0};
  std::string anchor_node;
};

bool chain_contains(const EndScheme& e, int arc);
// First chain arc with index >= n; -1 when the rule yields none.
int chain_next(const EndScheme& e, int n);

// Declared limit set of an end in the ambient continuum.
struct LimitDecl {
  enum class Kind { ideal, point, segments };
  Kind kind = Kind::ideal;
  TowerCoord point;                              // kind == point
  std::vector<std::tuple<int, Rat, Rat>> segs;   // kind == segments: (arc, lo, hi)

  bool singleton() const { return kind != Kind::segments; }
};

struct Model {
  Tower tower;
  std::vector<EndScheme> ends;
  std::map<std::string, LimitDecl> limits;  // by end name; may be absent

  int end_index(const std::string& name) const;
  const EndScheme& end(const std::string& name) const;
};

// Exit point of the end's ray from T_n (the deepest tower node of the chain
// that is still attached inside T_n); anchored ends return their node.
TreePoint end_representative(const Model& m, const LevelTree& lt, const EndScheme& e);

struct EndMatrix {
  std::vector<std::string> names;
  std::vector<TreePoint> representatives;
  std::vector<std::vector<Rat>> dist;  // pairwise d distances
};

EndMatrix ideal_end_coordinates(const Model& m, const LevelTree& lt);

// Planar-embedding consistency of declared limit sets: for each k up to the
// cutoff, chain nodes beyond level k must stay within a (weakly) shrinking
// Euclidean neighborhood of the declared limit set. Returns violation
// messages (empty = consistent or not checkable).
std::vector<std::string> validate_accumulation(const Model& m, int cutoff);

// ---- dendrite checks (compactness / local connectedness / tree-likeness) ---

struct DendriteCheck {
  int level;                 // n of the checks
  int prefix;                // N, the full loaded level
  Rat max_tail_distance;     // max d(x, r_{T_n}(x)) over samples; bound 2^-n
  Rat tail_bound;            // 2^-n
  Rat max_fiber_diameter;    // max d-diameter of r_{T_n} fibers; bound 2*2^-n
  Rat fiber_bound;           // 2*2^-n
  int cover_cells = 0;       // tree-likeness cover size (for eps = 3 * 2^-n)
  Rat max_cover_diameter;    // max d-diameter of the cover sets
  Rat cover_bound;           // eps = 3 * 2^-n
  bool ok = false;
};

DendriteCheck dendrite_check(const Model& m, int level, int prefix);

}  // namespace ucc
