#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ucantor/measure.hpp"
#include "ucantor/uniformity.hpp"

namespace ucantor {

enum class ConditionKind {
  VectorUniform,  // P_k (or P_w) is C-uniform
  AdjacentRatio,  // neighbouring entries within factor C
  PairUniform,    // (P_{k+t}, P_{k+t}) is C-uniform, 1 <= t < m_k
  ProductRatio,   // prod p_{k+j,last} vs prod p_{k+j,1}, 1 <= t < m_k
  PairSUniform    // (P_{k+m_k}, P_{k+m_k}) is (C, s_k)-uniform
};

const char* to_string(ConditionKind kind);

/// Largest constant demanded by one condition family at one level. For the
/// t-indexed families the record keeps the maximising t.
struct ConditionRecord {
  long k = 0;
  ConditionKind kind = ConditionKind::VectorUniform;
  Rational constant{1};
  std::optional<long> t;
  std::optional<long> s;
  std::optional<WindowTriple> windows;
  std::optional<Word> word;      // word-indexed witness w
  std::optional<int> gap_index;  // i of G_{wi}
};

enum class Outcome { Doubling, NotDoubling, Unknown };
const char* to_string(Outcome outcome);

struct DoublingVerdict {
  Outcome outcome = Outcome::Unknown;
  /// Doubling: a constant valid for every condition at every level.
  /// Unknown: the largest constant seen up to `checked_up_to`.
  std::optional<Rational> C;
  long checked_up_to = 0;
  std::vector<ConditionRecord> records;
  /// NotDoubling: records at increasing levels with strictly increasing
  /// constants, exhibiting the divergence.
  std::vector<ConditionRecord> witness;
  /// Symbolic verdict requested but not decidable from the tail rules.
  bool fallback = false;
  std::string basis;

  /// Maximum constant over all records (1 if there are none).
  Rational sup_constant() const;
};

struct CheckOptions {
  long horizon = 12;
  bool symbolic = false;
  /// Word-condition evaluations allowed in check_theorem2.
  long long budget = 1'000'000;
};

/// Conditions characterising doubling for measures given by an n-matching
/// sequence. Symbolic mode decides all k from the tail rules:
///  - n and c with periodic tails make (Lambda, m_k, s_k, P_k) periodic from
///    finite_verification_horizon() on, so a finite window decides;
///  - c tails decaying to zero force m_k -> infinity, and the product
///    condition diverges exactly when one period of P's tail has
///    prod p_last / p_first != 1.
DoublingVerdict check_theorem1(const CantorConfig& config, const MatchingSequence& matching,
                               const CheckOptions& options = {});

/// Word-indexed version; enumerates W_{k-1} up to the horizon, collapsing
/// words with equal rule_state().
DoublingVerdict check_theorem2(const CantorConfig& config, const WordMeasureRule& rule,
                               const CheckOptions& options = {});

/// which = 1 (sup n_k < inf), 2 (sup m_k < inf), 3 (ultimately 1-uniform).
/// Throws InapplicableError when the shortcut's hypothesis fails.
DoublingVerdict check_corollary(const CantorConfig& config, const MatchingSequence& matching, int which,
                                const CheckOptions& options = {});

struct VerificationWindow {
  long start;   // K*
  long period;  // conditions at k and k + period agree for k >= start
};

/// Present when n, c and P all have periodic (or constant) tails.
std::optional<VerificationWindow> finite_verification_horizon(const CantorConfig& config,
                                                              const MatchingSequence& matching);

/// sup m_k = infinity: Lambda is cofinite and the gap depth grows without
/// bound (c_k -> 0).
bool gap_depth_unbounded(const CantorConfig& config);

}  // namespace ucantor
