#include "ucc/render.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>

namespace ucc {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

std::string render_svg(const Model& m, int level,
                       const std::vector<std::pair<std::string, TowerCoord>>& markers) {
  LevelTree lt(m.tower, level);
  const MTree& tree = lt.tree();
  int nv = tree.vertex_count();
  std::vector<double> x(nv, 0), y(nv, 0);

  bool planar = !m.tower.planar.empty();
  for (int v = 0; v < nv && planar; ++v)
    planar = m.tower.planar.count(lt.node_of_vertex(v)) > 0;

  if (planar) {
    for (int v = 0; v < nv; ++v) {
      auto& xy = m.tower.planar.at(lt.node_of_vertex(v));
      x[v] = rat_double(xy.first);
      y[v] = rat_double(xy.second);
    }
  } else {
    // radial-free layered layout: leaves spread on the x axis, depth on y
    std::vector<int> order;
    std::vector<int> depth(nv, 0);
    std::vector<char> seen(nv, 0);
    double next_leaf = 0;
    std::function<double(int)> place = [&](int v) -> double {
      seen[v] = 1;
      std::vector<int> kids;
      for (int e : tree.incident(v)) {
        int w = tree.edge(e).u == v ? tree.edge(e).v : tree.edge(e).u;
        if (!seen[w]) {
          depth[w] = depth[v] + 1;
          kids.push_back(w);
        }
      }
      if (kids.empty()) {
        x[v] = next_leaf++;
      } else {
        double sum = 0;
        for (int w : kids) sum += place(w);
        x[v] = sum / kids.size();
      }
      y[v] = depth[v];
      return x[v];
    };
    place(0);
  }

  double xlo = x[0], xhi = x[0], ylo = y[0], yhi = y[0];
  for (int v = 0; v < nv; ++v) {
    xlo = std::min(xlo, x[v]);
    xhi = std::max(xhi, x[v]);
    ylo = std::min(ylo, y[v]);
    yhi = std::max(yhi, y[v]);
  }
  double w = std::max(xhi - xlo, 1e-9), h = std::max(yhi - ylo, 1e-9);
  double pad = 0.05 * std::max(w, h);
  xlo -= pad;
  w += 2 * pad;
  ylo -= pad;
  h += 2 * pad;
  double scale = 760.0 / std::max(w, h);
  auto px = [&](double v) { return 20 + (v - xlo) * scale; };
  auto py = [&](double v) { return 780 - (v - ylo) * scale; };

  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
      "viewBox=\"0 0 800 800\">\n";
  svg += "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";
  for (int e = 0; e < tree.edge_count(); ++e) {
    const Edge& ed = tree.edge(e);
    svg += "<line x1=\"" + num(px(x[ed.u])) + "\" y1=\"" + num(py(y[ed.u])) + "\" x2=\"" +
           num(px(x[ed.v])) + "\" y2=\"" + num(py(y[ed.v])) +
           "\" stroke=\"#334\" stroke-width=\"1\"/>\n";
  }
  for (int v = 0; v < nv; ++v)
    svg += "<circle cx=\"" + num(px(x[v])) + "\" cy=\"" + num(py(y[v])) +
           "\" r=\"1.5\" fill=\"#334\"/>\n";
  for (auto& [label, coord] : markers) {
    TreePoint p = lt.point_at(coord);
    // interpolate on the (straight) edge segment
    TreePoint a = p;
    const Edge& ed = tree.edge(a.edge);
    double t = rat_double(a.t);
    double mx = x[ed.u] + t * (x[ed.v] - x[ed.u]);
    double my = y[ed.u] + t * (y[ed.v] - y[ed.u]);
    svg += "<circle cx=\"" + num(px(mx)) + "\" cy=\"" + num(py(my)) +
           "\" r=\"5\" fill=\"none\" stroke=\"#c22\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + num(px(mx) + 8) + "\" y=\"" + num(py(my) - 8) +
           "\" font-size=\"12\" fill=\"#c22\">" + label + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace ucc
