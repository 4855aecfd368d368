#pragma once

#include <memory>

#include "ucc/dynamics.hpp"

namespace ucc {

// Abstract word arithmetic for a finitely generated amenable group: canonical
// forms (so word images can be deduplicated) and an explicit Folner sequence.
class GroupRule {
 public:
  virtual ~GroupRule() = default;
  virtual std::string name() const = 0;
  virtual int arity() const = 0;  // number of generators expected
  // canonical-form key of the group element spelled by the word
  virtual std::string canon(const Word& w) const = 0;
  // F_i, one word per element, i >= 1; deterministic order
  virtual std::vector<Word> folner_set(int i) const = 0;
};

// Catalog: "free_abelian" (rank = generator count), "infinite_dihedral"
// (generators: translation a, involution b), "cyclic:<n>" (one generator).
std::unique_ptr<GroupRule> make_group_rule(const std::string& spec, int num_gens);

// |g F_i  symmetric-difference  F_i| / |F_i| for the generator of the letter.
Rat folner_defect(const GroupRule& rule, int i, int letter);

// A finitely supported probability measure: the normalized push-forward of
// the counting measure on the given words through w -> w(x).
struct EmpiricalMeasure {
  std::vector<std::pair<TreePoint, Rat>> atoms;  // canonical points, weights
  Rat total() const;
};

EmpiricalMeasure empirical_measure(const ActionOnLevel& act, const std::vector<Word>& words,
                                   const TreePoint& x);

Rat measure_of(const MTree& tree, const EmpiricalMeasure& mu, const SegmentSet& s);

// A line inside the level tree together with its point set, for retraction
// fibers and the integer cell partition K_n = r^-1(psi([n, n+1))).
struct LineField {
  Line line;
  SegmentSet set;  // the whole built line
};

LineField make_line_field(const LevelTree& lt, const Line& l);

// floor of the line parameter of the retraction of x (half-open assignment).
long line_cell_index(const LevelTree& lt, const LineField& lf, const TreePoint& x);

// Closed fiber r^-1(psi([n, n+1])) clamped to the built line.
SegmentSet line_cell(const LevelTree& lt, const LineField& lf, long n);

// mu(K_n) under the half-open assignment rule.
Rat cell_mass(const LevelTree& lt, const LineField& lf, const EmpiricalMeasure& mu, long n);

// "mass escapes" when the second half of the sequence is nonincreasing and
// the final mass is at most half the initial one; otherwise "no escape".
std::string escape_verdict(const std::vector<Rat>& masses);

}  // namespace ucc
