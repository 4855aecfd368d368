#pragma once

#include "ucc/measure.hpp"

namespace ucc {

// Tail-invariance thresholds on a ray: smallest integer c_deep admitting a
// c_shallow < c_deep with g(tail(c_deep)) and g^-1(tail(c_deep)) both inside
// tail(c_shallow).
struct TailThreshold {
  int gen = -1;
  bool found = false;
  long c_deep = 0;
  long c_shallow = 0;
};

// `probe` is a truncated copy of `full` (same base, earlier representative);
// sources are taken on the probe ray so their images stay inside the tree,
// containment is tested against tails of the full ray.
TailThreshold tail_thresholds(const LevelTree& lt, const ActionOnLevel& act, int gen,
                              const Ray& probe, const Ray& full);

// Sidedness/limit classification of a chain end from its declared limit.
struct RayClass {
  std::string kind;        // "nonoscillatory" | "oscillatory"
  std::string sidedness;   // "", "one_sided", "bi_sided"
  std::vector<TailThreshold> thresholds;
  bool certified = false;  // all generators admit thresholds
  // Case 1 extras: shrinking invariant arcs toward the limit
  std::vector<Rat> arc_lengths;
  bool stagnated = false;
};

RayClass classify_ray(const Model& m, const LevelTree& lt, const ActionOnLevel& act,
                      const EndScheme& end, const TreePoint& base, int max_iters);

// Geometry for the one-sided oscillatory subcase: the midpoint split of the
// admissible window [c_shallow, c_deep] and the two retraction half-spaces.
struct OneSidedAnalysis {
  TreePoint w;  // window entry point psi(c_shallow)
  TreePoint a;  // d-midpoint of the window arc
  Rat t;        // line/ray parameter of a
  SegmentSet P;  // points retracting at or past a
  SegmentSet Q;  // points retracting at or before a
};

OneSidedAnalysis one_sided_analysis(const LevelTree& lt, const Ray& ray, const Rat& c_shallow,
                                    const Rat& c_deep);

struct MassRow {
  int i = 0;
  Rat mass;
};

struct PipelineResult {
  std::string outcome;  // fixed_point | two_periodic | ideal_endpoint | undetermined
  std::string stage;    // tree_search | ray_case1 | ray_case2 | end_pair | none
  std::string detail;
  std::optional<TreePoint> point, partner;
  std::optional<TowerCoord> coord, partner_coord;
  std::string end_name, partner_end;
  bool hull_stabilized = false;
  int hull_radius = 0;
  bool hull_escaped = false;
  std::vector<TailThreshold> thresholds;
  std::vector<std::string> fixing_words, swapping_words;
  std::vector<MassRow> escape_masses;
  std::string escape_result;
  std::vector<std::string> notes;
};

// Staged periodic-point search: orbit-hull stabilization and finite-orbit
// search on the level tree, then end-permutation analysis with ray
// classification, then end pairs with index-two stabilizers.
PipelineResult find_periodic_pipeline(const Model& m, const GroupAction& action, int level,
                                      int radius, const TowerCoord& base, int folner_max);

}  // namespace ucc
