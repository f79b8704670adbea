#pragma once

#include <optional>
#include <vector>

#include "ucantor/measure.hpp"

namespace ucantor {

enum class EnumerationMode {
  Auto,      // Full when it fits the budget, Windowed otherwise
  Full,      // every endpoint distance
  Windowed   // nearest `window` endpoints per side at every level
};

const char* to_string(EnumerationMode mode);

/// Closed ball B(x, r). `level` is the least depth K whose enumeration
/// contains it.
struct Ball {
  Rational x;
  Rational r;
  long level = 0;
};

struct BallEnumeration {
  long K = 0;
  std::vector<Rational> centers;  // sorted
  std::vector<Ball> balls;        // sorted by (x, r)
  EnumerationMode mode = EnumerationMode::Full;
  /// Windowed selection was used instead of all endpoint distances.
  bool truncated = false;
};

struct OracleOptions {
  long long budget = 2'000'000;
  long window = 2;
  long eval_depth = 14;
  EnumerationMode mode = EnumerationMode::Auto;
  Rational growth_factor{3, 2};
};

/// Centers are the endpoints of all components of level <= K; radii are the
/// distances from a center to the other endpoints, also doubled and halved,
/// clipped to (0, 1]. In windowed mode only the `window` nearest level-j
/// endpoints on each side are used, for every j <= K, which keeps the
/// enumeration monotone in K.
BallEnumeration enumerate_balls(const CantorConfig& config, long K, long long budget,
                                EnumerationMode mode = EnumerationMode::Auto, long window = 2);

struct SeriesPoint {
  long K = 0;
  Rational sup_ratio{0};
  Rational x{0};
  Rational r{0};
  /// All four ball-mass brackets of the witness are exact.
  bool exact = false;
};

struct OracleReport {
  long K = 0;
  long eval_depth = 0;
  /// max over balls of lower(mu(B(x, 2r))) / upper(mu(B(x, r))).
  Rational sup_ratio_lower{0};
  Rational witness_x{0};
  Rational witness_r{0};
  bool exact = false;
  std::vector<SeriesPoint> series;
  EnumerationMode mode = EnumerationMode::Full;
  bool truncated = false;
  std::size_t balls = 0;
};

/// Parallel lattice kernel. Positions are integers in units of 1/(2L), L the
/// common denominator of all gap and component lengths down to eval_depth,
/// and masses are integers over the common denominator of all vectors.
OracleReport sup_doubling_ratio(const MeasureSpec& measure, const CantorConfig& config, long K,
                                const OracleOptions& options = {});

/// One enumeration at max(schedule), evaluated once; the sup at each depth
/// is the max over balls whose level fits. The enumeration mode is fixed by
/// the largest depth.
OracleReport sup_doubling_series(const MeasureSpec& measure, const CantorConfig& config,
                                 const std::vector<long>& schedule, const OracleOptions& options = {});

/// Serial reference built directly on ball_measure; same enumeration, same
/// tie-breaking. Meant for tests and benchmarks.
OracleReport sup_doubling_series_reference(const MeasureSpec& measure, const CantorConfig& config,
                                           const std::vector<long>& schedule, const OracleOptions& options = {});

/// Brackets for mu(B(x, r)) and mu(B(x, 2r)) from the lattice kernel.
struct BallBrackets {
  MeasureBounds single;
  MeasureBounds doubled;
};
BallBrackets evaluate_ball(const MeasureSpec& measure, const CantorConfig& config, const Rational& x,
                           const Rational& r, long eval_depth);

/// True when t lies strictly inside a gap of some level <= depth, or
/// outside [0, 1].
bool in_gap(LevelTable& table, const Rational& t, long depth);

enum class Growth { Bounded, Growing };
const char* to_string(Growth growth);

/// Growing iff last >= gamma * first and the last three entries strictly
/// increase. Needs at least three entries.
Growth classify_series(const std::vector<Rational>& series, const Rational& gamma);

struct GrowthReport {
  Growth label = Growth::Bounded;
  OracleReport report;
};

GrowthReport growth_classification(const MeasureSpec& measure, const CantorConfig& config,
                                   const std::vector<long>& schedule, const OracleOptions& options = {});

}  // namespace ucantor
