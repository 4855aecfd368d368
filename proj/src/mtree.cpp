#include "ucc/mtree.hpp"

#include <algorithm>
#include <queue>

namespace ucc {

MTree::MTree(int vertex_count, std::vector<Edge> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)) {
  if (vertex_count_ < 1) throw ArgumentError("tree needs at least one vertex");
  if (static_cast<int>(edges_.size()) != vertex_count_ - 1)
    throw ArgumentError("tree must have exactly V-1 edges");
  incident_.assign(vertex_count_, {});
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
    const Edge& ed = edges_[e];
    if (ed.u < 0 || ed.u >= vertex_count_ || ed.v < 0 || ed.v >= vertex_count_ || ed.u == ed.v)
      throw ArgumentError("bad edge endpoints");
    if (ed.length <= 0) throw ArgumentError("edge lengths must be positive");
    incident_[ed.u].push_back(e);
    incident_[ed.v].push_back(e);
  }
  // connectivity (acyclicity follows from edge count)
  if (vertex_count_ > 1) {
    std::vector<char> seen(vertex_count_, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int e : incident_[v]) {
        int w = edges_[e].u == v ? edges_[e].v : edges_[e].u;
        if (!seen[w]) {
          seen[w] = 1;
          ++reached;
          q.push(w);
        }
      }
    }
    if (reached != vertex_count_) throw ArgumentError("tree is not connected");
  }
}

TreePoint MTree::vertex_point(int v) const {
  if (v < 0 || v >= vertex_count_ || incident_[v].empty())
    throw InvalidPointError("vertex has no incident edge");
  int e = *std::min_element(incident_[v].begin(), incident_[v].end());
  return TreePoint{e, edges_[e].u == v ? Rat(0) : Rat(1)};
}

TreePoint MTree::canonical(const TreePoint& p) const {
  if (p.edge < 0 || p.edge >= edge_count() || p.t < 0 || p.t > 1)
    throw InvalidPointError("point not on tree");
  if (p.t == 0) return vertex_point(edges_[p.edge].u);
  if (p.t == 1) return vertex_point(edges_[p.edge].v);
  return p;
}

std::optional<int> MTree::vertex_of(const TreePoint& p) const {
  if (p.t == 0) return edges_[p.edge].u;
  if (p.t == 1) return edges_[p.edge].v;
  return std::nullopt;
}

std::optional<Rat> MTree::coord_on_edge(const TreePoint& p, int e) const {
  if (p.edge == e) return p.t;
  auto v = vertex_of(p);
  if (!v) return std::nullopt;
  if (edges_[e].u == *v) return Rat(0);
  if (edges_[e].v == *v) return Rat(1);
  return std::nullopt;
}

std::vector<TreePoint> MTree::aliases(const TreePoint& p) const {
  auto v = vertex_of(p);
  if (!v) return {p};
  std::vector<TreePoint> out;
  for (int e : incident_[*v])
    out.push_back(TreePoint{e, edges_[e].u == *v ? Rat(0) : Rat(1)});
  return out;
}

std::vector<int> MTree::vertex_path(int a, int b) const {
  std::vector<int> parent(vertex_count_, -2);
  std::queue<int> q;
  q.push(a);
  parent[a] = -1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    if (v == b) break;
    for (int e : incident_[v]) {
      int w = edges_[e].u == v ? edges_[e].v : edges_[e].u;
      if (parent[w] == -2) {
        parent[w] = v;
        q.push(w);
      }
    }
  }
  std::vector<int> path;
  for (int v = b; v != -1; v = parent[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

Rat Arc::length(const MTree& tree) const {
  Rat total = 0;
  for (const ArcSeg& s : segs) total += s.span() * tree.edge(s.edge).length;
  return total;
}

namespace {

int edge_between(const MTree& tree, int a, int b) {
  for (int e : tree.incident(a)) {
    const Edge& ed = tree.edge(e);
    if (ed.u == b || ed.v == b) return e;
  }
  return -1;
}

void push_seg(std::vector<ArcSeg>& segs, int edge, const Rat& from, const Rat& to) {
  if (from == to) return;
  if (from < to)
    segs.push_back(ArcSeg{edge, from, to, true});
  else
    segs.push_back(ArcSeg{edge, to, from, false});
}

}  // namespace

Arc arc_between(const MTree& tree, const TreePoint& x, const TreePoint& y) {
  TreePoint a = tree.canonical(x);
  TreePoint b = tree.canonical(y);
  Arc arc;
  arc.a = a;
  arc.b = b;
  if (a == b) return arc;

  auto va = tree.vertex_of(a);
  auto vb = tree.vertex_of(b);

  // Same-edge shortcut (covers interior-interior and interior-endpoint).
  if (!va || !vb) {
    int e = !va ? a.edge : b.edge;
    auto ca = tree.coord_on_edge(a, e);
    auto cb = tree.coord_on_edge(b, e);
    if (ca && cb) {
      push_seg(arc.segs, e, *ca, *cb);
      return arc;
    }
  } else {
    // Both vertices: handled by the generic walk below.
  }

  // Reduce to a vertex-to-vertex walk with optional partial segments at
  // the two ends. Determine the exit vertex from a's edge and the entry
  // vertex into b's edge.
  int start_vertex, end_vertex;
  {
    if (va) {
      start_vertex = *va;
    } else {
      // The path exits a's edge through u or v: pick the endpoint whose
      // vertex path to b's side does not re-cross a's edge.
      const Edge& ea = tree.edge(a.edge);
      int target = vb ? *vb : tree.edge(b.edge).u;
      auto path = tree.vertex_path(ea.u, target);
      bool via_v = path.size() >= 2 && path[1] == ea.v &&
                   edge_between(tree, ea.u, ea.v) == a.edge;
      // If the first step of the u->target path is the edge itself, exit
      // through v; otherwise exit through u.
      start_vertex = via_v ? ea.v : ea.u;
      push_seg(arc.segs, a.edge, a.t, start_vertex == ea.u ? Rat(0) : Rat(1));
    }
    if (vb) {
      end_vertex = *vb;
    } else {
      const Edge& eb = tree.edge(b.edge);
      auto path = tree.vertex_path(eb.u, start_vertex);
      bool via_v = path.size() >= 2 && path[1] == eb.v &&
                   edge_between(tree, eb.u, eb.v) == b.edge;
      end_vertex = via_v ? eb.v : eb.u;
    }
  }

  if (!va && !vb && a.edge == b.edge) {
    // Interior points of the same edge were handled above.
  }

  auto vpath = tree.vertex_path(start_vertex, end_vertex);
  for (size_t i = 0; i + 1 < vpath.size(); ++i) {
    int e = edge_between(tree, vpath[i], vpath[i + 1]);
    const Edge& ed = tree.edge(e);
    push_seg(arc.segs, e, ed.u == vpath[i] ? Rat(0) : Rat(1),
             ed.u == vpath[i] ? Rat(1) : Rat(0));
  }

  if (!vb) {
    const Edge& eb = tree.edge(b.edge);
    push_seg(arc.segs, b.edge, end_vertex == eb.u ? Rat(0) : Rat(1), b.t);
  }
  return arc;
}

Rat distance(const MTree& tree, const TreePoint& x, const TreePoint& y) {
  return arc_between(tree, x, y).length(tree);
}

std::pair<int, PointClass> point_order(const MTree& tree, const TreePoint& x) {
  TreePoint p = tree.canonical(x);
  auto v = tree.vertex_of(p);
  int order = v ? tree.degree(*v) : 2;
  PointClass cls = order == 1   ? PointClass::endpoint
                   : order == 2 ? PointClass::cut
                                : PointClass::branch;
  return {order, cls};
}

}  // namespace ucc
