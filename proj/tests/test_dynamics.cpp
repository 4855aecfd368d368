#include <random>

#include "doctest.h"
#include "helpers.h"
#include "ucc/dynamics.hpp"
#include "ucc/pipeline.hpp"

using namespace ucc;
using namespace ucc_test;

namespace {

MTree unit_edge() { return MTree(2, {{0, 1, Rat(1)}}); }

// endpoint-fixing contraction toward 0: x/2 on [0,1/2], expanding back on [1/2,1]
TreeMap squeeze_map(const MTree& t) {
  return TreeMap(t, {MapPiece{0, Rat(0), Rat(1, 2), 0, Rat(0), Rat(1, 4), 1},
                     MapPiece{0, Rat(1, 2), Rat(1), 0, Rat(1, 4), Rat(1), 1}});
}

// per-edge reparametrization: a random two-piece increasing map of each edge
TreeMap random_reparam(std::mt19937_64& rng, const MTree& t) {
  std::vector<MapPiece> pieces;
  for (int e = 0; e < t.edge_count(); ++e) {
    Rat m(1 + static_cast<long>(rng() % 7), 8);
    Rat im(1 + static_cast<long>(rng() % 7), 8);
    pieces.push_back({e, Rat(0), m, e, Rat(0), im, 1});
    pieces.push_back({e, m, Rat(1), e, im, Rat(1), 1});
  }
  return TreeMap(t, pieces);
}

}  // namespace

TEST_CASE("fixed_set of a flip is the midpoint") {
  MTree t = unit_edge();
  TreeMap f(t, {MapPiece{0, Rat(0), Rat(1), 0, Rat(0), Rat(1), -1}});
  CHECK(f.fixed_set() == SegmentSet::point(t, TreePoint{0, Rat(1, 2)}));
}

TEST_CASE("fixed_set of an interior-moving endpoint-fixing map is the endpoints") {
  MTree t = unit_edge();
  TreeMap f = squeeze_map(t);
  SegmentSet expect;
  expect.add_point(t, t.vertex_point(0));
  expect.add_point(t, t.vertex_point(1));
  CHECK(f.fixed_set() == expect);
}

TEST_CASE("fixed_set matches a sign-change oracle on random self-maps") {
  std::mt19937_64 rng(60601);
  const int kGrid = 64;
  for (int iter = 0; iter < 25; ++iter) {
    MTree t = random_tree(rng, 6);
    TreeMap f = random_reparam(rng, t);
    SegmentSet fs = f.fixed_set();
    for (int e = 0; e < t.edge_count(); ++e) {
      // displacement along the edge (the map sends each edge to itself)
      std::vector<int> sign(kGrid + 1, 0);
      for (int k = 0; k <= kGrid; ++k) {
        TreePoint p{e, Rat(k, kGrid)};
        Rat moved = distance(t, p, f(p));
        // grid points are in the fixed set exactly when they do not move
        CHECK(fs.contains(t, p) == (moved == 0));
        TreePoint q = f(t.canonical(p));
        if (q.edge == e) sign[k] = q.t > Rat(k, kGrid) ? 1 : (q.t < Rat(k, kGrid) ? -1 : 0);
      }
      // a sign change across a grid cell forces a fixed point inside it
      for (int k = 0; k + 1 <= kGrid; ++k)
        if (sign[k] * sign[k + 1] == -1) {
          SegmentSet cell;
          cell.add_interval(t, e, Rat(k, kGrid), Rat(k + 1, kGrid));
          CHECK(!fs.intersect(t, cell).empty());
        }
    }
  }
}

TEST_CASE("periodic search: flip generator gives the midpoint") {
  Tower tw;
  tw.arcs.push_back({"A", {"u", "v"}, {Rat(0), Rat(1)}});
  GroupAction ga;
  PLMap flip;
  flip.name = "s";
  flip.pieces.push_back({0, Rat(0), Rat(1), 0, Rat(0), Rat(1), -1});
  ga.generators.push_back(flip);
  LevelTree lt(tw, 1);
  ActionOnLevel act(ga, lt);
  auto hit = periodic_search_tree(act);
  REQUIRE(hit);
  CHECK(hit->period == 1);
  CHECK(lt.coord_of(hit->x) == TowerCoord{0, Rat(1, 2)});
}

TEST_CASE("periodic search finds a genuine two-cycle when no common fixed point exists") {
  // path u - v - w; g1 reverses it, g2 fixes u and w but drags v toward u
  Tower tw;
  tw.arcs.push_back({"A", {"u", "v"}, {Rat(0), Rat(1)}});
  tw.arcs.push_back({"B", {"v", "w"}, {Rat(0), Rat(1)}});
  GroupAction ga;
  PLMap g1, g2;
  g1.name = "g1";
  g1.pieces.push_back({0, Rat(0), Rat(1), 1, Rat(0), Rat(1), -1});
  g1.pieces.push_back({1, Rat(0), Rat(1), 0, Rat(0), Rat(1), -1});
  g2.name = "g2";
  g2.pieces.push_back({0, Rat(0), Rat(1), 0, Rat(0), Rat(1, 2), 1});
  g2.pieces.push_back({1, Rat(0), Rat(1, 2), 0, Rat(1, 2), Rat(1), 1});
  g2.pieces.push_back({1, Rat(1, 2), Rat(1), 1, Rat(0), Rat(1), 1});
  ga.generators.push_back(g1);
  ga.generators.push_back(g2);
  LevelTree lt(tw, 2);
  ActionOnLevel act(ga, lt);
  CHECK(common_fixed_set(act).empty());
  auto hit = periodic_search_tree(act);
  REQUIRE(hit);
  CHECK(hit->period == 2);
  REQUIRE(hit->y);
  TreePoint u = lt.point_at({0, Rat(0)});
  TreePoint w = lt.point_at({1, Rat(1)});
  bool match = (hit->x == u && *hit->y == w) || (hit->x == w && *hit->y == u);
  CHECK(match);
}

TEST_CASE("periodic search: commuting contractions share their fixed endpoints") {
  Tower tw;
  tw.arcs.push_back({"A", {"u", "v"}, {Rat(0), Rat(1)}});
  GroupAction ga;
  for (int i = 0; i < 2; ++i) {
    PLMap f;
    f.name = "f" + std::to_string(i);
    Rat mid = i == 0 ? Rat(1, 4) : Rat(1, 8);
    f.pieces.push_back({0, Rat(0), Rat(1, 2), 0, Rat(0), mid, 1});
    f.pieces.push_back({0, Rat(1, 2), Rat(1), 0, mid, Rat(1), 1});
    ga.generators.push_back(f);
  }
  LevelTree lt(tw, 1);
  ActionOnLevel act(ga, lt);
  auto hit = periodic_search_tree(act);
  REQUIRE(hit);
  CHECK(hit->period == 1);
  SegmentSet common = common_fixed_set(act);
  CHECK(common.contains(lt.tree(), hit->x));
}

TEST_CASE("invariant arc construction at a fixed endpoint") {
  MTree t = unit_edge();
  TreeMap f = squeeze_map(t);
  TreePoint e = t.vertex_point(0);
  TreePoint v{0, Rat(1, 2)};
  InvariantArc ia = invariant_arc_at_endpoint(t, f, e, v);
  CHECK(ia.u == TreePoint{0, Rat(1, 2)});
  CHECK(ia.image_inside);
  SegmentSet eu = SegmentSet::from_arc(t, arc_between(t, e, ia.u));
  CHECK(eu.contains_set(t, f.image_of(eu)));
}

TEST_CASE("invariant arc flips direction for an expanding map") {
  MTree t = unit_edge();
  TreeMap f(t, {MapPiece{0, Rat(0), Rat(1, 2), 0, Rat(0), Rat(3, 4), 1},
                MapPiece{0, Rat(1, 2), Rat(1), 0, Rat(3, 4), Rat(1), 1}});
  TreePoint e = t.vertex_point(0);
  InvariantArc ia = invariant_arc_at_endpoint(t, f, e, TreePoint{0, Rat(1, 2)});
  CHECK(!ia.image_inside);
  SegmentSet eu = SegmentSet::from_arc(t, arc_between(t, e, ia.u));
  CHECK(eu.contains_set(t, f.inverse().image_of(eu)));
}

TEST_CASE("invariant arc requires a fixed endpoint") {
  MTree t = unit_edge();
  TreeMap f(t, {MapPiece{0, Rat(0), Rat(1), 0, Rat(0), Rat(1), -1}});
  CHECK_THROWS_AS(
      invariant_arc_at_endpoint(t, f, t.vertex_point(0), TreePoint{0, Rat(1, 2)}),
      PreconditionError);
}

TEST_CASE("common invariant arc for maps contracting at different rates") {
  MTree t = unit_edge();
  TreeMap f1 = squeeze_map(t);
  TreeMap f2(t, {MapPiece{0, Rat(0), Rat(1, 2), 0, Rat(0), Rat(1, 8), 1},
                 MapPiece{0, Rat(1, 2), Rat(1), 0, Rat(1, 8), Rat(1), 1}});
  TreePoint e = t.vertex_point(0);
  TreePoint v0{0, Rat(1, 2)};
  CommonArc ca = common_invariant_arc(t, {&f1, &f2}, e, v0);
  SegmentSet ev = SegmentSet::from_arc(t, arc_between(t, e, ca.v));
  SegmentSet eu = SegmentSet::from_arc(t, arc_between(t, e, ca.u));
  CHECK(ev.total_length(t) > 0);
  for (const TreeMap* f : {&f1, &f2}) {
    CHECK(eu.contains_set(t, f->image_of(ev)));
    CHECK(eu.contains_set(t, f->inverse().image_of(ev)));
  }
}

TEST_CASE("nested invariant arcs shrink geometrically for a contraction") {
  MTree t = unit_edge();
  TreeMap f = squeeze_map(t);
  TreePoint e = t.vertex_point(0);
  NestedArcs na = nested_invariant_arcs(t, f, e, TreePoint{0, Rat(1, 2)}, 6);
  REQUIRE(na.lengths.size() >= 4);
  CHECK(!na.stagnated);
  CHECK(na.lengths[0] == Rat(1, 2));
  for (size_t k = 0; k + 1 < na.lengths.size(); ++k)
    CHECK(na.lengths[k + 1] == na.lengths[k] / 2);
}

TEST_CASE("nested invariant arcs stagnate immediately for the identity") {
  MTree t = unit_edge();
  TreeMap id(t, {MapPiece{0, Rat(0), Rat(1), 0, Rat(0), Rat(1), 1}});
  NestedArcs na = nested_invariant_arcs(t, id, t.vertex_point(0), TreePoint{0, Rat(1, 2)}, 5);
  CHECK(na.stagnated);
  REQUIRE(!na.lengths.empty());
  CHECK(na.lengths[0] == Rat(1, 2));
}

TEST_CASE("median and arc_point_at_length") {
  MTree t = make_tripod();
  TreePoint m = median(t, t.vertex_point(1), t.vertex_point(2), t.vertex_point(3));
  CHECK(m == t.vertex_point(0));
  Arc a = arc_between(t, t.vertex_point(1), t.vertex_point(2));
  CHECK(arc_point_at_length(t, a, Rat(1)) == t.vertex_point(0));
  CHECK(arc_point_at_length(t, a, Rat(1, 2)) == TreePoint{0, Rat(1, 2)});
  CHECK(arc_point_at_length(t, a, Rat(5)) == t.vertex_point(2));  // clamped
}

TEST_CASE("pick_moved_point finds a witness") {
  MTree t = unit_edge();
  TreeMap flip(t, {MapPiece{0, Rat(0), Rat(1), 0, Rat(0), Rat(1), -1}});
  auto p = pick_moved_point(t, SegmentSet::whole(t), flip);
  REQUIRE(p);
  CHECK(flip(*p) != *p);
  TreeMap id(t, {MapPiece{0, Rat(0), Rat(1), 0, Rat(0), Rat(1), 1}});
  CHECK(!pick_moved_point(t, SegmentSet::whole(t), id));
}

TEST_CASE("ray parametrization round trips and orders correctly") {
  Scenario sc = load_fixture("z_ray");
  LevelTree lt(sc.model.tower, 12);
  Ray r = build_ray(sc.model, lt, sc.model.end("eplus"), lt.point_at({0, Rat(0)}));
  CHECK(r.total == Rat(6));  // six chain arcs of chart length 1 inside T_12
  for (const Rat& s : {Rat(0), Rat(1, 2), Rat(3), Rat(11, 4)}) {
    TreePoint p = ray_point(lt, r, s);
    auto back = ray_param(lt, r, p);
    REQUIRE(back);
    CHECK(*back == s);
  }
  TreePoint p1 = ray_point(lt, r, Rat(1)), p2 = ray_point(lt, r, Rat(2));
  CHECK(ray_order(lt, r, p1, p2) < 0);
  CHECK(ray_order(lt, r, p2, p1) > 0);
  CHECK(ray_order(lt, r, p1, p1) == 0);
  // off-ray points have no parameter
  LevelTree lt14(sc.model.tower, 14);
  Ray r14 = build_ray(sc.model, lt14, sc.model.end("eplus"), lt14.point_at({0, Rat(0)}));
  CHECK(!ray_param(lt14, r14, lt14.point_at({1, Rat(1, 2)})));  // on the B side
}

TEST_CASE("a tail-preserving generator preserves the ray order") {
  Scenario sc = load_fixture("z_ray");
  LevelTree lt(sc.model.tower, 12);
  ActionOnLevel act(sc.action, lt);
  Ray r = build_ray(sc.model, lt, sc.model.end("eplus"), lt.point_at({0, Rat(0)}));
  std::mt19937_64 rng(11);
  for (int k = 0; k < 30; ++k) {
    Rat s(static_cast<long>(rng() % 16), 4);   // [0, 4)
    Rat u = s + Rat(1 + static_cast<long>(rng() % 4), 4);
    TreePoint x = ray_point(lt, r, s), y = ray_point(lt, r, u);
    auto fx = act.apply_word({1}, x), fy = act.apply_word({1}, y);
    REQUIRE(fx);
    REQUIRE(fy);
    CHECK(ray_order(lt, r, *fx, *fy) < 0);
  }
}

TEST_CASE("lines glue two rays with a signed parameter") {
  Scenario sc = load_fixture("z_line");
  LevelTree lt(sc.model.tower, 14);
  TreePoint origin = lt.point_at({0, Rat(0)});  // v0
  Line l = build_line(sc.model, lt, sc.model.end("eminus"), sc.model.end("eplus"), origin);
  CHECK(line_point(lt, l, Rat(0)) == origin);
  CHECK(*line_param(lt, l, lt.point_at({0, Rat(1)})) == Rat(1));    // v1
  CHECK(*line_param(lt, l, lt.point_at({1, Rat(1)})) == Rat(-1));   // w1
  CHECK(*line_param(lt, l, lt.point_at({1, Rat(1, 3)})) == Rat(-1, 3));
  SegmentSet seg = line_segment(lt, l, Rat(-1, 2), Rat(1, 2));
  CHECK(seg.contains(lt.tree(), origin));
  CHECK(seg.contains(lt.tree(), lt.point_at({0, Rat(1, 2)})));
  CHECK(!seg.contains(lt.tree(), lt.point_at({0, Rat(3, 4)})));
}

TEST_CASE("end permutations: the dihedral translation fixes, the reflection swaps") {
  Scenario sc = load_fixture("dihedral_arc");
  LevelTree lt(sc.model.tower, 14);
  ActionOnLevel act(sc.action, lt);
  int shallow = 7;
  auto pa = end_permutation(act, sc.model, {1}, shallow);
  CHECK(pa == std::vector<int>{0, 1});
  auto pb = end_permutation(act, sc.model, {2}, shallow);
  CHECK(pb == std::vector<int>{1, 0});
  auto pbab = end_permutation(act, sc.model, {2, 1, 2}, shallow);
  CHECK(pbab == std::vector<int>{0, 1});
}

TEST_CASE("index-two stabilizer words have even reflection count") {
  Scenario sc = load_fixture("dihedral_arc");
  LevelTree lt(sc.model.tower, 14);
  ActionOnLevel act(sc.action, lt);
  Index2Result idx = stabilizer_index2(act, sc.model, 0, 1, 3, 7);
  CHECK(idx.ok);
  CHECK(idx.problems.empty());
  CHECK(!idx.fixing.empty());
  CHECK(!idx.swapping.empty());
  auto b_count = [](const Word& w) {
    int c = 0;
    for (int l : w) c += (l == 2 || l == -2) ? 1 : 0;
    return c;
  };
  for (const Word& w : idx.fixing) CHECK(b_count(w) % 2 == 0);
  for (const Word& w : idx.swapping) CHECK(b_count(w) % 2 == 1);
}

TEST_CASE("one-sided window analysis on the stub ray") {
  Scenario sc = load_fixture("two_stub_ray");
  LevelTree lt(sc.model.tower, 10);
  ActionOnLevel act(sc.action, lt);
  TreePoint base = lt.point_at({0, Rat(0)});  // n0
  Ray full = build_ray(sc.model, lt, sc.model.end("eray"), base);
  Ray probe = build_ray(sc.model, lt, sc.model.end("eray"), base, 8);
  TailThreshold th = tail_thresholds(lt, act, 0, probe, full);
  REQUIRE(th.found);
  CHECK(th.c_deep == 1);
  CHECK(th.c_shallow == 0);
  OneSidedAnalysis osa = one_sided_analysis(lt, full, Rat(th.c_shallow), Rat(th.c_deep));
  CHECK(osa.w == base);
  CHECK(osa.t == Rat(1, 2));
  CHECK(osa.a == ray_point(lt, full, Rat(1, 2)));
  const MTree& tree = lt.tree();
  CHECK(osa.P.unite(tree, osa.Q) == SegmentSet::whole(tree));
  CHECK(osa.P.intersect(tree, osa.Q) == SegmentSet::point(tree, osa.a));
  // the side stubs retract to the ray origin, hence sit in Q
  CHECK(osa.Q.contains(tree, lt.point_at({1, Rat(1)})));
  CHECK(osa.Q.contains(tree, lt.point_at({2, Rat(1)})));
  CHECK(!osa.P.contains(tree, lt.point_at({1, Rat(1)})));
}

TEST_CASE("pipeline outcomes on the bundled fixtures") {
  struct Expect {
    const char* name;
    const char* outcome;
    const char* stage;
  };
  for (const Expect& e : {Expect{"fixed_vertex", "fixed_point", "tree_search"},
                          Expect{"two_stub_ray", "fixed_point", "tree_search"},
                          Expect{"z_ray", "fixed_point", "ray_case1"},
                          Expect{"z_line", "ideal_endpoint", "ray_case2"},
                          Expect{"dihedral_arc", "two_periodic", "end_pair"}}) {
    Scenario sc = load_fixture(e.name);
    PipelineResult res = find_periodic_pipeline(sc.model, sc.action, sc.run.level,
                                                sc.run.radius, run_base(sc), sc.run.folner_max);
    CHECK(res.outcome == e.outcome);
    CHECK(res.stage == e.stage);
  }
}

TEST_CASE("pipeline outcome kind is stable one level up") {
  for (const char* name : {"z_ray", "z_line", "dihedral_arc"}) {
    Scenario sc = load_fixture(name);
    PipelineResult a = find_periodic_pipeline(sc.model, sc.action, sc.run.level,
                                              sc.run.radius, run_base(sc), sc.run.folner_max);
    PipelineResult b = find_periodic_pipeline(sc.model, sc.action, sc.run.level + 1,
                                              sc.run.radius, run_base(sc), sc.run.folner_max);
    CHECK(a.outcome == b.outcome);
    CHECK(a.stage == b.stage);
  }
}

TEST_CASE("fixed_vertex pipeline pins the branch point") {
  Scenario sc = load_fixture("fixed_vertex");
  PipelineResult res = find_periodic_pipeline(sc.model, sc.action, 3, 2, run_base(sc), 4);
  REQUIRE(res.coord);
  CHECK(*res.coord == TowerCoord{0, Rat(0)});  // the junction of the three legs
}
