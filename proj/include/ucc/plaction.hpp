#pragma once

#include <string>
#include <vector>

#include "ucc/tower.hpp"
#include "ucc/treemap.hpp"

namespace ucc {

// One affine piece of a PL self-map in tower chart coordinates: [s_lo, s_hi]
// of src_arc onto [d_lo, d_hi] of dst_arc, orientation as in MapPiece.
struct PLPiece {
  int src_arc;
  Rat s_lo, s_hi;
  int dst_arc;
  Rat d_lo, d_hi;
  int orient = 1;
};

struct PLMap {
  std::string name;
  std::vector<PLPiece> pieces;

  // Image of a tower point, or nullopt if no piece covers it. When several
  // pieces cover it (chart breakpoints) the lowest (arc, s_lo) piece wins;
  // continuity is only guaranteed for validated maps.
  std::optional<TowerCoord> apply(const TowerCoord& c) const;

  // 1 + the largest arc index mentioned by any piece.
  int depth() const;
};

// Restriction of a PL map to the level tree. Pieces touching arcs outside
// the level, or whose images leave it, are dropped; *complete is cleared
// when an image escapes (domain pieces beyond the level do not count).
TreeMap induced_map(const LevelTree& lt, const PLMap& f, bool* complete = nullptr);

// A word in the generators: letter k+1 means generator k, -(k+1) its inverse.
using Word = std::vector<int>;

std::string word_str(const Word& w, const std::vector<std::string>& names);

// All freely reduced words of length <= radius (identity first), ordered by
// length then lexicographically by letters. Deterministic.
std::vector<Word> all_words(int num_gens, int radius);

struct GroupAction {
  std::vector<PLMap> generators;
  std::vector<Word> relations;  // each word acts as the identity
  std::string group_rule;      // catalog key for the measure module

  int gen_index(const std::string& name) const;  // -1 if absent
};

// The action restricted to one level tree, generators and inverses realized
// as TreeMaps. Generators must be total and injective on the level.
class ActionOnLevel {
 public:
  ActionOnLevel(const GroupAction& action, const LevelTree& lt);

  const GroupAction& action() const { return *action_; }
  const LevelTree& level_tree() const { return *lt_; }
  int num_gens() const { return static_cast<int>(gens_.size()); }
  bool complete(int i) const { return complete_[i]; }

  const TreeMap& gen(int i) const { return gens_[i]; }
  const TreeMap& gen_inv(int i) const { return invs_[i]; }
  const TreeMap& letter(int l) const { return l > 0 ? gens_[l - 1] : invs_[-l - 1]; }

  // Composition of the word, leftmost letter applied last.
  TreeMap word_map(const Word& w) const;

  std::optional<TreePoint> apply_word(const Word& w, const TreePoint& p) const;

  // Each declared relation acts as the identity wherever defined, and is
  // total when all generators are.
  std::vector<std::string> check_relations() const;

 private:
  const GroupAction* action_;
  const LevelTree* lt_;
  std::vector<TreeMap> gens_, invs_;
  std::vector<bool> complete_;
};

struct OrbitHull {
  SegmentSet hull;
  int radius = 0;        // word radius at which the hull was last grown
  bool stabilized = false;  // hull invariant under every generator
  bool escaped = false;     // an orbit point left the level tree
};

// Convex hull of the orbit of the seeds under words of length <= max_radius,
// stopping early once the hull is generator-invariant.
OrbitHull orbit_hull(const ActionOnLevel& act, const std::vector<TreePoint>& seeds,
                     int max_radius);

}  // namespace ucc
