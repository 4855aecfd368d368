#pragma once

#include "ucc/plaction.hpp"

namespace ucc {

// The unique common point of the arcs [a,b], [a,c], [b,c].
TreePoint median(const MTree& tree, const TreePoint& a, const TreePoint& b,
                 const TreePoint& c);

// Point of the arc at the given d-length from its start (clamped to the end).
TreePoint arc_point_at_length(const MTree& tree, const Arc& arc, const Rat& len);

// Intersection of the fixed sets of all generators.
SegmentSet common_fixed_set(const ActionOnLevel& act);

struct PeriodicHit {
  int period = 1;
  TreePoint x;
  std::optional<TreePoint> y;   // period 2: the partner point
  std::vector<int> pattern;     // period 2: 1 where the generator swaps x and y
};

// Exhaustive search for a finite orbit of size 1 or 2 of the level action.
std::optional<PeriodicHit> periodic_search_tree(const ActionOnLevel& act);

// Some point of C moved by f, if any (C must be nonempty).
std::optional<TreePoint> pick_moved_point(const MTree& tree, const SegmentSet& C,
                                          const TreeMap& f);

// Arc [e,u] with f([e,u]) inside [e,u] (image_inside) or containing it,
// built from the meet of e, v, f(v). e must be an endpoint fixed by f,
// v a point with v != e.
struct InvariantArc {
  TreePoint u;
  bool image_inside;
};
InvariantArc invariant_arc_at_endpoint(const MTree& tree, const TreeMap& f,
                                       const TreePoint& e, const TreePoint& v);

// Common arc [e,v] for a finite family fixing the endpoint e: [e,v] lies in
// every f_i([e,u]) and f_i^{-1}([e,u]) for the common prefix point u.
struct CommonArc {
  TreePoint u, v;
};
CommonArc common_invariant_arc(const MTree& tree, const std::vector<const TreeMap*>& fs,
                               const TreePoint& e, const TreePoint& v0);

// Iterates u_{k+1} = f(u_k) inside a contracted arc [e,u0] (requires
// f([e,u0]) inside [e,u0]). Arc lengths are nonincreasing; `stagnated` is
// set when they stop strictly decreasing before max_iters.
struct NestedArcs {
  std::vector<TreePoint> points;
  std::vector<Rat> lengths;
  bool stagnated = false;
};
NestedArcs nested_invariant_arcs(const MTree& tree, const TreeMap& f, const TreePoint& e,
                                 const TreePoint& u0, int max_iters);

// ---- rays and lines ---------------------------------------------------------

// The arc from a base point to the level representative of a chain end,
// parametrized by cumulative chart length (psi(0) = base).
struct Ray {
  TreePoint base;
  Arc arc;
  std::vector<Rat> cum;  // parameter at each segment start, then the total
  Rat total;
};

// target_level < 0 means the full level; smaller values truncate the ray at
// an earlier representative so that generator images stay inside the tree.
Ray build_ray(const Model& m, const LevelTree& lt, const EndScheme& end,
              const TreePoint& base, int target_level = -1);

TreePoint ray_point(const LevelTree& lt, const Ray& r, const Rat& s);
// Parameter of p on the ray, nullopt when p is off the ray.
std::optional<Rat> ray_param(const LevelTree& lt, const Ray& r, const TreePoint& p);
// psi([a, b]) as a set (b clamped to the total).
SegmentSet ray_segment(const LevelTree& lt, const Ray& r, const Rat& a, const Rat& b);
// psi([c, total]).
SegmentSet ray_tail(const LevelTree& lt, const Ray& r, const Rat& c);

// -1 / 0 / +1 as p comes before, at, or after q along the ray.
int ray_order(const LevelTree& lt, const Ray& r, const TreePoint& p, const TreePoint& q);

// Two rays glued at a common origin; signed parameter, negative on `neg`.
struct Line {
  Ray neg, pos;
};

Line build_line(const Model& m, const LevelTree& lt, const EndScheme& neg,
                const EndScheme& pos, const TreePoint& origin);

TreePoint line_point(const LevelTree& lt, const Line& l, const Rat& s);
std::optional<Rat> line_param(const LevelTree& lt, const Line& l, const TreePoint& p);
SegmentSet line_segment(const LevelTree& lt, const Line& l, const Rat& a, const Rat& b);

// ---- ends under the action --------------------------------------------------

// Tower node of the end's representative at the given level.
std::string end_node_at(const Model& m, const EndScheme& e, int level);

// Image end of each end under the word, decided by which end's tail (between
// the shallow level and the full level) contains the image of the deep
// representative; -1 when undetermined.
std::vector<int> end_permutation(const ActionOnLevel& act, const Model& m, const Word& w,
                                 int shallow);

struct Index2Result {
  bool ok = false;               // every word preserves the pair, some word swaps
  std::vector<Word> fixing;      // words fixing both ends (identity omitted)
  std::vector<Word> swapping;
  std::vector<std::string> problems;
};

// Stabilizer of one end of an invariant 2-element end set, over all words of
// length <= radius.
Index2Result stabilizer_index2(const ActionOnLevel& act, const Model& m, int end_a,
                               int end_b, int radius, int shallow);

}  // namespace ucc
