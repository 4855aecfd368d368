#include "ucc/measure.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ucc {

namespace {

class FreeAbelianRule : public GroupRule {
 public:
  explicit FreeAbelianRule(int rank) : rank_(rank) {
    if (rank < 1) throw ArgumentError("free abelian rank must be positive");
  }
  std::string name() const override { return "free_abelian"; }
  int arity() const override { return rank_; }
  std::string canon(const Word& w) const override {
    std::vector<long> e(rank_, 0);
    for (int l : w) {
      int g = l > 0 ? l - 1 : -l - 1;
      if (g >= rank_) throw ArgumentError("letter outside the generator range");
      e[g] += l > 0 ? 1 : -1;
    }
    std::string key;
    for (long x : e) key += std::to_string(x) + ",";
    return key;
  }
  std::vector<Word> folner_set(int i) const override {
    if (i < 1) throw ArgumentError("Folner index must be >= 1");
    double size = 1;
    for (int r = 0; r < rank_; ++r) size *= 2 * i + 1;
    if (size > 2e6) throw ArgumentError("Folner box too large");
    std::vector<Word> out{{}};
    for (int g = 0; g < rank_; ++g) {
      std::vector<Word> next;
      for (const Word& w : out)
        for (long e = -i; e <= i; ++e) {
          Word v = w;
          for (long k = 0; k < std::abs(e); ++k) v.push_back(e > 0 ? g + 1 : -(g + 1));
          next.push_back(std::move(v));
        }
      out = std::move(next);
    }
    return out;
  }

 private:
  int rank_;
};

// Generators a (letter 1, infinite order) and b (letter 2, involution) with
// b a b = a^-1; every element is a^k or a^k b.
class DihedralRule : public GroupRule {
 public:
  std::string name() const override { return "infinite_dihedral"; }
  int arity() const override { return 2; }
  std::string canon(const Word& w) const override {
    long k = 0;
    int e = 0;
    for (int l : w) {
      int g = l > 0 ? l : -l;
      if (g == 1)
        k += (e == 0) == (l > 0) ? 1 : -1;
      else if (g == 2)
        e = 1 - e;
      else
        throw ArgumentError("letter outside the generator range");
    }
    return std::to_string(k) + (e ? "b" : "");
  }
  std::vector<Word> folner_set(int i) const override {
    if (i < 1) throw ArgumentError("Folner index must be >= 1");
    std::vector<Word> out;
    for (int e = 0; e <= 1; ++e)
      for (long k = -i; k < i; ++k) {
        Word w;
        for (long j = 0; j < std::abs(k); ++j) w.push_back(k > 0 ? 1 : -1);
        if (e) w.push_back(2);
        out.push_back(std::move(w));
      }
    return out;
  }
};

class CyclicRule : public GroupRule {
 public:
  explicit CyclicRule(long n) : n_(n) {
    if (n < 1) throw ArgumentError("cyclic order must be positive");
  }
  std::string name() const override { return "cyclic:" + std::to_string(n_); }
  int arity() const override { return 1; }
  std::string canon(const Word& w) const override {
    long k = 0;
    for (int l : w) {
      if (l != 1 && l != -1) throw ArgumentError("letter outside the generator range");
      k += l > 0 ? 1 : -1;
    }
    k %= n_;
    if (k < 0) k += n_;
    return std::to_string(k);
  }
  std::vector<Word> folner_set(int) const override {
    std::vector<Word> out;
    for (long k = 0; k < n_; ++k) out.push_back(Word(k, 1));
    return out;
  }

 private:
  long n_;
};

}  // namespace

std::unique_ptr<GroupRule> make_group_rule(const std::string& spec, int num_gens) {
  if (spec == "free_abelian") return std::make_unique<FreeAbelianRule>(num_gens);
  if (spec == "infinite_dihedral") {
    if (num_gens != 2) throw ArgumentError("infinite_dihedral needs exactly two generators");
    return std::make_unique<DihedralRule>();
  }
  if (spec.rfind("cyclic:", 0) == 0) {
    if (num_gens != 1) throw ArgumentError("cyclic group rule needs one generator");
    return std::make_unique<CyclicRule>(std::stol(spec.substr(7)));
  }
  throw ArgumentError("unknown group rule: " + spec);
}

Rat folner_defect(const GroupRule& rule, int i, int letter) {
  std::set<std::string> f, gf;
  for (const Word& w : rule.folner_set(i)) {
    f.insert(rule.canon(w));
    Word gw;
    gw.push_back(letter);
    gw.insert(gw.end(), w.begin(), w.end());
    gf.insert(rule.canon(gw));
  }
  long sym = 0;
  for (const auto& k : f)
    if (!gf.count(k)) ++sym;
  for (const auto& k : gf)
    if (!f.count(k)) ++sym;
  return Rat(sym, static_cast<long>(f.size()));
}

Rat EmpiricalMeasure::total() const {
  Rat t = 0;
  for (auto& [p, w] : atoms) t += w;
  return t;
}

EmpiricalMeasure empirical_measure(const ActionOnLevel& act, const std::vector<Word>& words,
                                   const TreePoint& x) {
  if (words.empty()) throw ArgumentError("empirical measure needs at least one word");
  std::map<TreePoint, Rat> acc;
  Rat w = Rat(1, static_cast<long>(words.size()));
  for (const Word& word : words) {
    auto q = act.apply_word(word, x);
    if (!q) throw EscapeError("orbit point left the level tree");
    acc[*q] += w;
  }
  EmpiricalMeasure mu;
  for (auto& [p, m] : acc) mu.atoms.push_back({p, m});
  return mu;
}

Rat measure_of(const MTree& tree, const EmpiricalMeasure& mu, const SegmentSet& s) {
  Rat total = 0;
  for (auto& [p, w] : mu.atoms)
    if (s.contains(tree, p)) total += w;
  return total;
}

LineField make_line_field(const LevelTree& lt, const Line& l) {
  LineField lf;
  lf.line = l;
  lf.set = line_segment(lt, l, -l.neg.total, l.pos.total);
  return lf;
}

long line_cell_index(const LevelTree& lt, const LineField& lf, const TreePoint& x) {
  TreePoint r = quasi_retract(lt.tree(), lf.set, x, false);
  auto s = line_param(lt, lf.line, r);
  if (!s) throw PreconditionError("retraction missed the line");
  return static_cast<long>(rat_floor(*s));
}

SegmentSet line_cell(const LevelTree& lt, const LineField& lf, long n) {
  Rat a = std::max(Rat(n), Rat(-lf.line.neg.total));
  Rat b = std::min(Rat(n + 1), lf.line.pos.total);
  if (a > b) return SegmentSet();
  return retract_fiber(lt.tree(), lf.set, line_segment(lt, lf.line, a, b));
}

Rat cell_mass(const LevelTree& lt, const LineField& lf, const EmpiricalMeasure& mu, long n) {
  Rat total = 0;
  for (auto& [p, w] : mu.atoms)
    if (line_cell_index(lt, lf, p) == n) total += w;
  return total;
}

std::string escape_verdict(const std::vector<Rat>& masses) {
  if (masses.size() < 2) return "no escape";
  size_t half = masses.size() / 2;
  bool tail_mono = true;
  for (size_t i = half; i + 1 < masses.size(); ++i)
    if (masses[i + 1] > masses[i]) tail_mono = false;
  bool decayed = 2 * masses.back() <= masses.front();
  return tail_mono && decayed ? "mass escapes" : "no escape";
}

}  // namespace ucc
