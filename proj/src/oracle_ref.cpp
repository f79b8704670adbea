// Serial reference for the oracle: rational arithmetic throughout, masses
// from ball_measure. Slow, but shares no code with the lattice kernel beyond
// the enumeration.

#include "oracle_internal.hpp"
#include "ucantor/error.hpp"

namespace ucantor {

OracleReport sup_doubling_series_reference(const MeasureSpec& measure, const CantorConfig& config,
                                           const std::vector<long>& schedule, const OracleOptions& options) {
  detail::check_schedule(schedule, options.eval_depth, false);
  validate_measure(measure, config);
  const BallEnumeration en = enumerate_balls(config, schedule.back(), options.budget, options.mode, options.window);
  LevelTable table(config, options.eval_depth);

  std::vector<SeriesPoint> series;
  SeriesPoint best;
  bool have = false;
  long previous = 0;
  for (long K : schedule) {
    for (std::size_t i = 0; i < en.balls.size(); ++i) {
      const Ball& b = en.balls[i];
      if (b.level <= previous || b.level > K) continue;
      const auto outer = ball_measure(measure, table, b.x, 2 * b.r, options.eval_depth);
      const auto inner = ball_measure(measure, table, b.x, b.r, options.eval_depth);
      UCANTOR_ENSURE(inner.upper > 0, "ball centred in E has zero upper mass");
      const Rational ratio = outer.lower / inner.upper;
      const bool better = !have || ratio > best.sup_ratio ||
                          (ratio == best.sup_ratio && (b.x < best.x || (b.x == best.x && b.r < best.r)));
      if (better) {
        have = true;
        best.sup_ratio = ratio;
        best.x = b.x;
        best.r = b.r;
        best.exact = outer.exact() && inner.exact();
      }
    }
    best.K = K;
    series.push_back(best);
    previous = K;
  }

  OracleReport report;
  report.K = schedule.back();
  report.eval_depth = options.eval_depth;
  report.series = series;
  report.sup_ratio_lower = series.back().sup_ratio;
  report.witness_x = series.back().x;
  report.witness_r = series.back().r;
  report.exact = series.back().exact;
  report.mode = en.mode;
  report.truncated = en.truncated;
  report.balls = en.balls.size();
  return report;
}

}  // namespace ucantor
