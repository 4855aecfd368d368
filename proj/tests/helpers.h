#pragma once

#include <random>
#include <string>
#include <vector>

#include "ucc/mtree.hpp"
#include "ucc/scenario.hpp"

namespace ucc_test {

using namespace ucc;

inline Scenario load_fixture(const std::string& name) {
  return load_scenario(std::string(UCC_FIXTURE_DIR) + "/" + name + ".json");
}

// Random tower: each arc attaches to a node of the earlier tree at chart 0
// and ends at a fresh node, occasionally with a fresh midpoint node.
inline Tower random_tower(std::mt19937_64& rng, int max_arcs) {
  Tower tw;
  int arcs = 1 + static_cast<int>(rng() % max_arcs);
  std::vector<std::string> nodes{"base"};
  for (int i = 0; i < arcs; ++i) {
    TowerArc a;
    a.name = "a" + std::to_string(i);
    std::string head = i == 0 ? "base" : nodes[rng() % nodes.size()];
    std::string fresh = "f" + std::to_string(i);
    if (rng() % 3 == 0) {
      a.nodes = {head, "m" + std::to_string(i), fresh};
      a.coords = {Rat(0), Rat(1 + static_cast<long>(rng() % 6), 8), Rat(1)};
      nodes.push_back(a.nodes[1]);
    } else {
      a.nodes = {head, fresh};
      a.coords = {Rat(0), Rat(1)};
    }
    nodes.push_back(fresh);
    tw.arcs.push_back(a);
  }
  return tw;
}

inline MTree make_tripod() {
  // center 0, leaves 1, 2, 3, unit legs
  return MTree(4, {{0, 1, Rat(1)}, {0, 2, Rat(1)}, {0, 3, Rat(1)}});
}

inline MTree make_path(int edges, Rat len = Rat(1)) {
  std::vector<Edge> es;
  for (int i = 0; i < edges; ++i) es.push_back({i, i + 1, len});
  return MTree(edges + 1, es);
}

// Random tree on 2..max_edges+1 vertices: each new vertex attaches to a
// uniformly chosen earlier one, lengths are small positive rationals.
inline MTree random_tree(std::mt19937_64& rng, int max_edges) {
  int n = 2 + static_cast<int>(rng() % max_edges);  // vertices
  std::vector<Edge> es;
  for (int v = 1; v < n; ++v) {
    int u = static_cast<int>(rng() % v);
    Rat len(1 + static_cast<long>(rng() % 8), 1 + static_cast<long>(rng() % 4));
    es.push_back({u, v, len});
  }
  return MTree(n, es);
}

inline TreePoint random_point(std::mt19937_64& rng, const MTree& tree) {
  int e = static_cast<int>(rng() % tree.edge_count());
  Rat t(static_cast<long>(rng() % 17), 16);
  return tree.canonical({e, t});
}

// All-pairs vertex distances by Floyd-Warshall, independent of the arc
// machinery under test.
inline std::vector<std::vector<Rat>> vertex_dist_table(const MTree& tree) {
  int n = tree.vertex_count();
  Rat inf = 0;
  for (const Edge& e : tree.edges()) inf += e.length;
  inf += 1;
  std::vector<std::vector<Rat>> d(n, std::vector<Rat>(n, inf));
  for (int i = 0; i < n; ++i) d[i][i] = 0;
  for (const Edge& e : tree.edges()) {
    d[e.u][e.v] = std::min(d[e.u][e.v], e.length);
    d[e.v][e.u] = d[e.u][e.v];
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

// Point distance from the vertex table: exit through one endpoint of each
// carrying edge, minimized over the four combinations.
inline Rat oracle_distance(const MTree& tree, const std::vector<std::vector<Rat>>& vd,
                           const TreePoint& pa, const TreePoint& pb) {
  TreePoint a = tree.canonical(pa), b = tree.canonical(pb);
  if (a == b) return 0;
  const Edge& ea = tree.edge(a.edge);
  const Edge& eb = tree.edge(b.edge);
  if (a.edge == b.edge) return rat_abs(a.t - b.t) * ea.length;
  Rat best = -1;
  int ua[2] = {ea.u, ea.v};
  Rat da[2] = {a.t * ea.length, (1 - a.t) * ea.length};
  int ub[2] = {eb.u, eb.v};
  Rat db[2] = {b.t * eb.length, (1 - b.t) * eb.length};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Rat cand = da[i] + vd[ua[i]][ub[j]] + db[j];
      if (best < 0 || cand < best) best = cand;
    }
  return best;
}

}  // namespace ucc_test
