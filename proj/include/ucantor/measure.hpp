#pragma once

#include <map>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "ucantor/cantor.hpp"

namespace ucantor {

/// Strictly positive entries summing exactly to one.
class ProbVector {
 public:
  explicit ProbVector(std::vector<Rational> entries);
  static ProbVector uniform(long size);

  std::size_t size() const { return entries_.size(); }
  const Rational& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<Rational>& entries() const { return entries_; }
  const Rational& first() const { return entries_.front(); }
  const Rational& last() const { return entries_.back(); }
  bool is_uniform() const;

  /// (P, P): the vector concatenated with itself.
  std::vector<Rational> doubled() const;

  bool operator==(const ProbVector&) const = default;
  auto operator<=>(const ProbVector& o) const { return entries_ <=> o.entries_; }

 private:
  std::vector<Rational> entries_;
};

struct UniformVectorTail {
  bool operator==(const UniformVectorTail&) const = default;
};
/// Vector at level k is vectors[(k - 1) % period] (absolute indexing).
struct PeriodicVectorTail {
  std::vector<ProbVector> vectors;
  bool operator==(const PeriodicVectorTail&) const = default;
};
using VectorTail = std::variant<UniformVectorTail, PeriodicVectorTail>;

/// One probability vector per level, P_k with n_k entries.
class MatchingSequence {
 public:
  MatchingSequence(std::vector<ProbVector> prefix, VectorTail tail);
  static MatchingSequence uniform() { return {{}, UniformVectorTail{}}; }
  static MatchingSequence constant(ProbVector p) { return {{}, PeriodicVectorTail{{std::move(p)}}}; }

  ProbVector at(const CantorConfig& config, long k) const;
  void validate(const CantorConfig& config) const;

  const std::vector<ProbVector>& prefix() const { return prefix_; }
  const VectorTail& tail() const { return tail_; }
  long tail_start() const { return static_cast<long>(prefix_.size()) + 1; }
  long tail_period() const;

  /// Least k0 with P_k uniform for all k >= k0.
  std::optional<long> ultimately_uniform_index() const;

  bool operator==(const MatchingSequence&) const = default;

 private:
  std::vector<ProbVector> prefix_;
  VectorTail tail_;
};

// Word-indexed families. Each is finitely describable, which keeps the
// number of distinct vectors per level bounded.

/// P_w depends only on the level k = |w| + 1.
struct LevelOnlyRule {
  MatchingSequence sequence;
  bool operator==(const LevelOnlyRule&) const = default;
};

/// P_w looked up by (k mod period, last letter of w); `root` serves w = empty.
struct LastLetterRule {
  long period = 1;
  ProbVector root;
  std::map<std::pair<long, int>, ProbVector> table;
  bool operator==(const LastLetterRule&) const = default;
};

/// Explicit vectors for finitely many words, `fallback` for all others.
struct WordTableRule {
  std::map<Word, ProbVector> entries;
  MatchingSequence fallback;
  bool operator==(const WordTableRule&) const = default;
};

using WordMeasureRule = std::variant<LevelOnlyRule, LastLetterRule, WordTableRule>;
using MeasureSpec = std::variant<MatchingSequence, WordMeasureRule>;

/// Throws ValidationError if some vector has the wrong length or a word
/// rule is not total for the configuration.
void validate_measure(const MeasureSpec& measure, const CantorConfig& config);

/// The splitting vector applied to I_w: P_{|w|+1} or P_w.
ProbVector vector_at(const MeasureSpec& measure, const CantorConfig& config, const Word& w);
ProbVector vector_at(const WordMeasureRule& rule, const CantorConfig& config, const Word& w);

/// Distinct vectors that vector_at can return for words of length k - 1.
std::vector<ProbVector> vectors_at_level(const MeasureSpec& measure, const CantorConfig& config, long k);

/// Key such that two words of equal length with the same key have identical
/// vectors at themselves and at every extension by the same suffix.
std::vector<int> rule_state(const WordMeasureRule& rule, const Word& w);

/// mu(I_w).
Rational component_measure(const MeasureSpec& measure, const CantorConfig& config, const Word& w);

struct MeasureBounds {
  Rational lower;
  Rational upper;
  long depth = 0;

  bool exact() const { return lower == upper; }
  Rational width() const { return upper - lower; }
};

/// Bounds on mu of the closed interval I. Components wholly inside count
/// fully, components disjoint from I count zero, and components meeting I
/// otherwise are split down to level `depth`, where they count zero toward the
/// lower bound and their full mass toward the upper bound.
MeasureBounds interval_measure(const MeasureSpec& measure, LevelTable& table, const Interval& I, long depth);
MeasureBounds interval_measure(const MeasureSpec& measure, const CantorConfig& config, const Interval& I,
                               long depth);

/// interval_measure on the closed ball [x - r, x + r].
MeasureBounds ball_measure(const MeasureSpec& measure, LevelTable& table, const Rational& x, const Rational& r,
                           long depth);
MeasureBounds ball_measure(const MeasureSpec& measure, const CantorConfig& config, const Rational& x,
                           const Rational& r, long depth);

/// Least k0 such that every splitting vector at levels k >= k0 is uniform.
std::optional<long> ultimately_one_uniform_index(const MeasureSpec& measure);

}  // namespace ucantor
