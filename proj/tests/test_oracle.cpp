#include <doctest.h>

#include <random>

#include "support.hpp"
#include "ucantor/error.hpp"
#include "ucantor/oracle.hpp"

using namespace ucantor;
using namespace ucantor::testing;

namespace {

OracleOptions small(long eval_depth) {
  OracleOptions o;
  o.eval_depth = eval_depth;
  return o;
}

Rational ratio_from_ball_measure(const MeasureSpec& m, const CantorConfig& c, const Rational& x, const Rational& r,
                                 long depth) {
  const auto one = ball_measure(m, c, x, r, depth);
  const auto two = ball_measure(m, c, x, 2 * r, depth);
  return two.lower / one.upper;
}

}  // namespace

TEST_CASE("ball enumeration") {
  const auto mid = CantorConfig::middle_thirds();
  const auto e1 = enumerate_balls(mid, 1, 1'000'000);
  CHECK(e1.centers == std::vector<Rational>{q(0), q(1, 3), q(2, 3), q(1)});
  CHECK(e1.mode == EnumerationMode::Full);
  CHECK_FALSE(e1.truncated);
  for (const auto& b : e1.balls) {
    CHECK(b.r > 0);
    CHECK(b.r <= 1);
    CHECK(b.level == 1);
  }
  const auto e2 = enumerate_balls(mid, 2, 1'000'000);
  CHECK(e2.centers.size() == 8);

  SUBCASE("monotone in K") {
    for (auto mode : {EnumerationMode::Full, EnumerationMode::Windowed}) {
      const auto a = enumerate_balls(mid, 2, 1'000'000, mode);
      const auto b = enumerate_balls(mid, 3, 1'000'000, mode);
      for (const auto& ball : a.balls) {
        const bool found = std::any_of(b.balls.begin(), b.balls.end(),
                                       [&](const Ball& o) { return o.x == ball.x && o.r == ball.r; });
        CHECK(found);
      }
      // Balls of level <= 2 in the larger enumeration are exactly the smaller one.
      const auto lower = std::count_if(b.balls.begin(), b.balls.end(), [](const Ball& o) { return o.level <= 2; });
      CHECK(static_cast<std::size_t>(lower) == a.balls.size());
    }
  }

  SUBCASE("budget") {
    CHECK_THROWS_AS(enumerate_balls(mid, 4, 3), BudgetError);
    const auto w = enumerate_balls(mid, 6, 20'000);
    CHECK(w.mode == EnumerationMode::Windowed);
    CHECK(w.truncated);
    CHECK(w.balls.size() <= 20'000);
  }
}

TEST_CASE("middle thirds uniform") {
  const MeasureSpec m = MatchingSequence::uniform();
  const auto mid = CantorConfig::middle_thirds();
  const auto rep = sup_doubling_ratio(m, mid, 2, small(6));
  CHECK(rep.sup_ratio_lower >= 2);
  CHECK(ratio_from_ball_measure(m, mid, q(0), q(1, 6), 6) == 2);
  CHECK(ratio_from_ball_measure(m, mid, q(1, 2), q(1), 6) == 1);
}

TEST_CASE("kernel agrees with the serial reference") {
  const std::vector<long> schedule{1, 2, 3};
  for (const auto& rc : corpus()) {
    CAPTURE(rc.name);
    const auto opts = small(7);
    const auto a = sup_doubling_series(rc.measure, rc.cantor, schedule, opts);
    const auto b = sup_doubling_series_reference(rc.measure, rc.cantor, schedule, opts);
    REQUIRE(a.series.size() == b.series.size());
    for (std::size_t i = 0; i < a.series.size(); ++i) {
      CHECK(a.series[i].sup_ratio == b.series[i].sup_ratio);
      CHECK(a.series[i].x == b.series[i].x);
      CHECK(a.series[i].r == b.series[i].r);
      CHECK(a.series[i].exact == b.series[i].exact);
    }
  }
}

TEST_CASE("witness is reproducible and series is monotone") {
  for (const auto& rc : corpus()) {
    CAPTURE(rc.name);
    const auto rep = sup_doubling_series(rc.measure, rc.cantor, {2, 3, 4}, small(8));
    for (std::size_t i = 0; i < rep.series.size(); ++i) {
      const auto& p = rep.series[i];
      CHECK(ratio_from_ball_measure(rc.measure, rc.cantor, p.x, p.r, 8) == p.sup_ratio);
      if (i > 0) CHECK(p.sup_ratio >= rep.series[i - 1].sup_ratio);
    }
    CHECK(rep.sup_ratio_lower == rep.series.back().sup_ratio);
  }
}

TEST_CASE("evaluate_ball matches ball_measure") {
  std::mt19937 gen(7);
  for (const auto& rc : corpus()) {
    CAPTURE(rc.name);
    const auto e = enumerate_balls(rc.cantor, 3, 1'000'000);
    std::uniform_int_distribution<std::size_t> pick(0, e.balls.size() - 1);
    for (int i = 0; i < 10; ++i) {
      const auto& b = e.balls[pick(gen)];
      const auto br = evaluate_ball(rc.measure, rc.cantor, b.x, b.r, 7);
      const auto one = ball_measure(rc.measure, rc.cantor, b.x, b.r, 7);
      const auto two = ball_measure(rc.measure, rc.cantor, b.x, 2 * b.r, 7);
      CHECK(br.single.lower == one.lower);
      CHECK(br.single.upper == one.upper);
      CHECK(br.doubled.lower == two.lower);
      CHECK(br.doubled.upper == two.upper);
    }
  }
}

TEST_CASE("balls with boundaries in gaps are exact") {
  const auto cfg = quarter_power();
  LevelTable t(cfg, 10);
  const MeasureSpec m = MatchingSequence::constant(skew());
  const auto e = enumerate_balls(cfg, 3, 1'000'000);
  long exact = 0;
  for (const auto& b : e.balls) {
    if (!(in_gap(t, b.x - b.r, 3) && in_gap(t, b.x + b.r, 3))) continue;
    CHECK(ball_measure(m, t, b.x, b.r, 3).exact());
    ++exact;
  }
  CHECK(exact > 0);
}

TEST_CASE("growth classification") {
  const Rational g(3, 2);
  CHECK(classify_series({q(3), q(3), q(3)}, g) == Growth::Bounded);
  CHECK(classify_series({q(2), q(3), q(4)}, g) == Growth::Growing);
  CHECK(classify_series({q(2), q(2), q(4), q(5)}, g) == Growth::Growing);
  CHECK(classify_series({q(2), q(5), q(4), q(6)}, g) == Growth::Bounded);
  CHECK(classify_series({q(4), q(5), q(5, 1) + q(1, 2)}, g) == Growth::Bounded);
  CHECK_THROWS_AS(classify_series({q(1), q(2)}, g), ValidationError);
}

TEST_CASE("growth separates a doubling and a non-doubling measure") {
  const std::vector<long> schedule{4, 6, 8};
  const auto opts = small(12);
  const auto bounded = growth_classification(MatchingSequence::uniform(), CantorConfig::middle_thirds(), schedule, opts);
  CHECK(bounded.label == Growth::Bounded);
  const auto growing = growth_classification(MatchingSequence::constant(skew()), quarter_power(), {4, 6, 8, 10}, small(14));
  CHECK(growing.label == Growth::Growing);
}

TEST_CASE("harmonic skew grows slowly") {
  // m_k grows like log k here, so the ratio increases but only slowly.
  const auto rep = sup_doubling_series(MatchingSequence::constant(skew()), harmonic(), {4, 6, 8, 10}, small(14));
  for (std::size_t i = 1; i < rep.series.size(); ++i) CHECK(rep.series[i].sup_ratio > rep.series[i - 1].sup_ratio);
}

TEST_CASE("invalid schedules") {
  const MeasureSpec m = MatchingSequence::uniform();
  const auto mid = CantorConfig::middle_thirds();
  CHECK_THROWS_AS(sup_doubling_series(m, mid, {}, small(6)), ValidationError);
  CHECK_THROWS_AS(sup_doubling_series(m, mid, {3, 2}, small(6)), ValidationError);
  CHECK_THROWS_AS(sup_doubling_series(m, mid, {4, 8}, small(6)), ValidationError);
}
