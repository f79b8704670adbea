#pragma once

#include <algorithm>
#include <compare>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ucantor/rational.hpp"
#include "ucantor/sequence.hpp"

namespace ucantor {

/// A validated pair (n, c) describing the uniform Cantor set E(n, c).
///
/// Every k satisfies n_k >= 2 (integer), 0 < c_k < 1 and (n_k - 1) c_k < 1.
/// The infinite conditions are decided on the tail rules: n must have a
/// constant or periodic tail, and c a constant, periodic, geometric or power
/// tail with positive values.
class CantorConfig {
 public:
  CantorConfig(SequenceSpec n, SequenceSpec c);

  /// E(2, 1/3).
  static CantorConfig middle_thirds();
  /// Constant n_k = branching, constant c_k = gap.
  static CantorConfig constant(long branching, const Rational& gap);

  const SequenceSpec& n() const { return n_; }
  const SequenceSpec& c() const { return c_; }

  long n_at(long k) const;
  Rational c_at(long k) const { return c_.at(k); }

  /// sup_k n_k (always finite for the supported tail rules).
  long max_branching() const;

  /// First level at which both tail rules are in force.
  long tail_start() const { return std::max(n_.tail_start(), c_.tail_start()); }

  bool operator==(const CantorConfig&) const = default;

 private:
  SequenceSpec n_;
  SequenceSpec c_;
};

/// Address i_1 ... i_k of a level-k component, letters 1-based.
struct Word {
  std::vector<int> letters;

  std::size_t size() const { return letters.size(); }
  bool empty() const { return letters.empty(); }
  int operator[](std::size_t j) const { return letters[j]; }

  Word child(int i) const {
    Word w = *this;
    w.letters.push_back(i);
    return w;
  }
  /// Lexicographic order; on equal length this is the left-to-right order
  /// of the components.
  auto operator<=>(const Word&) const = default;
  bool operator==(const Word&) const = default;

  std::string str() const;
};

/// Throws ValidationError when some letter i_j is outside 1..n_j.
void validate_word(const CantorConfig& config, const Word& w);

struct Interval {
  Rational lo;
  Rational hi;

  Rational length() const { return hi - lo; }
  bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
  bool operator==(const Interval&) const = default;
};

struct LevelStats {
  long k = 0;
  Integer count;                    // N_k
  Rational delta;                   // component length
  std::optional<Rational> epsilon;  // gap length, absent at k = 0
};

/// Levels 0..depth of a configuration, computed incrementally. Not shared
/// between threads while growing; callers extend it before any parallel use.
class LevelTable {
 public:
  explicit LevelTable(CantorConfig config, long depth = 0);

  void extend_to(long depth);
  long depth() const { return static_cast<long>(levels_.size()) - 1; }

  /// Requires k <= depth().
  const LevelStats& operator[](long k) const { return levels_[static_cast<std::size_t>(k)]; }
  /// Extends as needed.
  const LevelStats& at(long k);

  const Rational& delta(long k) { return at(k).delta; }
  const Rational& epsilon(long k) { return *at(k).epsilon; }
  /// delta_k + epsilon_k: offset between consecutive children of level k.
  Rational stride(long k) { return delta(k) + epsilon(k); }

  const CantorConfig& config() const { return config_; }

 private:
  CantorConfig config_;
  std::vector<LevelStats> levels_;
};

LevelStats level_stats(const CantorConfig& config, long k);

/// Data attached to a level k in Lambda = { k : epsilon_k < delta_k }.
struct GapContext {
  long k;
  long m;  // delta_{k+m} <= epsilon_k < delta_{k+m-1}
  long s;  // s delta' + (s-1) eps' <= epsilon_k < (s+1) delta' + s eps' at level k+m
  bool operator==(const GapContext&) const = default;
};

bool in_lambda(LevelTable& table, long k);
std::optional<GapContext> gap_context(LevelTable& table, long k);
std::optional<GapContext> gap_context(const CantorConfig& config, long k);

Interval component_interval(LevelTable& table, const Word& w);
Interval component_interval(const CantorConfig& config, const Word& w);

/// Open gap G_{wi} between I_{wi} and I_{w(i+1)}, returned as its closure.
Interval gap_interval(LevelTable& table, const Word& w, int i);
Interval gap_interval(const CantorConfig& config, const Word& w, int i);

/// (w i n_{k+1} ... n_{k+t}, w (i+1) 1^t): the two level-(k+t) components
/// adjacent across G_{wi}, where k = |w| + 1.
std::pair<Word, Word> adjacent_boundary_words(const CantorConfig& config, const Word& w, int i, long t);

/// sum_k n_k c_k < infinity; holds exactly for geometric tails and for power
/// tails with exponent >= 2.
bool nc_summable(const CantorConfig& config);

/// Certified enclosure of prod_{i >= from} (1 - (n_i - 1) c_i) of width at
/// most `tolerance`. Exactly (0, 0) when the product diverges to zero.
Bracket tail_product_bracket(const CantorConfig& config, long from, const Rational& tolerance);

/// Lebesgue measure of E(n, c).
Bracket lebesgue_of_E(const CantorConfig& config, const Rational& tolerance);

}  // namespace ucantor
