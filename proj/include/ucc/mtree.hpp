#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ucc/error.hpp"
#include "ucc/rational.hpp"

namespace ucc {

struct Edge {
  int u = -1;
  int v = -1;
  Rat length;
};

// A point addressed by (edge, chart parameter in [0,1]). Points at t = 0 / 1
// coincide with vertices and are canonicalized: for a vertex the smallest
// incident edge id is used, with t = 0 preferred over t = 1.
struct TreePoint {
  int edge = -1;
  Rat t;

  friend bool operator==(const TreePoint& a, const TreePoint& b) {
    return a.edge == b.edge && a.t == b.t;
  }
  friend bool operator!=(const TreePoint& a, const TreePoint& b) { return !(a == b); }
  friend bool operator<(const TreePoint& a, const TreePoint& b) {
    if (a.edge != b.edge) return a.edge < b.edge;
    return a.t < b.t;
  }
};

// Finite metric tree: connected, acyclic, positive rational edge lengths.
// Immutable after construction.
class MTree {
 public:
  // single-vertex tree; useful as a placeholder before assignment
  MTree() : vertex_count_(1), incident_(1) {}
  MTree(int vertex_count, std::vector<Edge> edges);

  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const Edge& edge(int e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& incident(int v) const { return incident_[v]; }
  int degree(int v) const { return static_cast<int>(incident_[v].size()); }

  // Canonical TreePoint representing vertex v. Requires degree(v) > 0.
  TreePoint vertex_point(int v) const;

  // Canonical form of p (vertex points normalized). Throws InvalidPointError
  // if p is out of range.
  TreePoint canonical(const TreePoint& p) const;

  // Vertex id if p sits at a vertex, nullopt for interior points.
  std::optional<int> vertex_of(const TreePoint& p) const;

  // Chart coordinate of p on edge e, if p lies on e (interior or endpoint).
  std::optional<Rat> coord_on_edge(const TreePoint& p, int e) const;

  // All (edge, t) representations of p: one for interior points, one per
  // incident edge for vertex points.
  std::vector<TreePoint> aliases(const TreePoint& p) const;

  // Unique vertex path from a to b (inclusive). parent-array BFS.
  std::vector<int> vertex_path(int a, int b) const;

 private:
  int vertex_count_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> incident_;
};

// One traversed piece of an arc: the chart interval [lo, hi] of `edge`,
// walked lo->hi when `forward`, hi->lo otherwise. lo < hi always.
struct ArcSeg {
  int edge;
  Rat lo, hi;
  bool forward;

  Rat span() const { return hi - lo; }
  Rat enter_coord() const { return forward ? lo : hi; }
  Rat exit_coord() const { return forward ? hi : lo; }
};

// The unique injective path between two points; degenerate (no segments)
// when the endpoints coincide.
struct Arc {
  TreePoint a, b;             // canonical endpoints
  std::vector<ArcSeg> segs;   // ordered along the walk a -> b

  bool degenerate() const { return segs.empty(); }
  Rat length(const MTree& tree) const;
};

Arc arc_between(const MTree& tree, const TreePoint& x, const TreePoint& y);
Rat distance(const MTree& tree, const TreePoint& x, const TreePoint& y);

enum class PointClass { endpoint, cut, branch };

// (number of components of tree minus the point, classification).
std::pair<int, PointClass> point_order(const MTree& tree, const TreePoint& x);

}  // namespace ucc
