#include "ucantor/oracle.hpp"

#include <algorithm>
#include <map>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "oracle_internal.hpp"
#include "ucantor/error.hpp"

namespace ucantor {

const char* to_string(EnumerationMode mode) {
  switch (mode) {
    case EnumerationMode::Auto: return "auto";
    case EnumerationMode::Full: return "full";
    case EnumerationMode::Windowed: return "windowed";
  }
  return "?";
}

const char* to_string(Growth growth) { return growth == Growth::Growing ? "Growing" : "Bounded"; }

namespace detail {

Lattice make_lattice(LevelTable& table, long depth, const Integer& extra) {
  table.extend_to(depth);
  Lattice lat;
  lat.depth = depth;
  Integer L = extra;
  for (long j = 1; j <= depth; ++j) {
    mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), table[j].delta.get_den_mpz_t());
    mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), table[j].epsilon->get_den_mpz_t());
  }
  lat.unit = 2 * L;
  for (long j = 0; j <= depth; ++j) {
    lat.delta.push_back(to_lattice(table[j].delta, lat));
    lat.stride.push_back(j == 0 ? Integer(0) : to_lattice(table[j].delta + *table[j].epsilon, lat));
    lat.n.push_back(j == 0 ? 0 : table.config().n_at(j));
  }
  return lat;
}

Integer to_lattice(const Rational& v, const Lattice& lat) {
  const Rational scaled = v * lat.unit;
  UCANTOR_ENSURE(scaled.get_den() == 1, "point " + to_string(v) + " is off the lattice");
  return scaled.get_num();
}

Rational from_lattice(const Integer& v, const Lattice& lat) {
  Rational r(v, lat.unit);
  r.canonicalize();
  return r;
}

namespace {

struct Endpoint {
  Integer pos;
  long level;
};

void collect_endpoints(const Lattice& lat, long K, long j, const Integer& lo, long lo_level, long hi_level,
                       std::vector<Endpoint>& out) {
  if (j == K) {
    out.push_back({lo, lo_level});
    out.push_back({lo + lat.delta[j], hi_level});
    return;
  }
  const long k = j + 1;
  Integer clo = lo;
  for (long i = 0; i < lat.n[k]; ++i) {
    if (i > 0) clo += lat.stride[k];
    collect_endpoints(lat, K, k, clo, i == 0 ? lo_level : k, i == lat.n[k] - 1 ? hi_level : k, out);
  }
}

void add_radii(std::map<Integer, long>& radii, const Integer& d, long label, const Integer& unit) {
  auto put = [&](const Integer& r) {
    const Integer clipped = r > unit ? unit : r;
    auto [it, inserted] = radii.emplace(clipped, label);
    if (!inserted) it->second = std::min(it->second, label);
  };
  put(d);
  put(2 * d);
  put(d / 2);  // endpoints sit on even lattice points
}

}  // namespace

LatticeEnumeration enumerate_lattice(const Lattice& lat, long K, long long budget, EnumerationMode mode,
                                     long window) {
  if (K < 1) throw ValidationError("enumeration depth K must be >= 1");
  if (K > lat.depth) throw InternalError("enumeration depth beyond lattice depth");
  if (budget < 1) throw ValidationError("ball budget must be positive");
  if (window < 1) throw ValidationError("window must be >= 1");

  std::vector<Endpoint> ends;
  collect_endpoints(lat, K, 0, Integer(0), 0, 0, ends);
  const long long centers = static_cast<long long>(ends.size());
  if (budget < centers)
    throw BudgetError("ball budget " + std::to_string(budget) + " is below the " + std::to_string(centers) +
                      " centers at depth " + std::to_string(K) + "; raise the budget or lower K");

  const long double full_count = 3.0L * static_cast<long double>(centers) * static_cast<long double>(centers - 1);
  const long double windowed_count = 6.0L * static_cast<long double>(centers) * static_cast<long double>(K + 1) *
                                     static_cast<long double>(window);
  if (mode == EnumerationMode::Auto)
    mode = full_count <= static_cast<long double>(budget) ? EnumerationMode::Full : EnumerationMode::Windowed;
  if (mode == EnumerationMode::Full && full_count > static_cast<long double>(budget))
    throw BudgetError("full enumeration at depth " + std::to_string(K) + " needs about " +
                      std::to_string(static_cast<long long>(full_count)) + " balls, budget is " +
                      std::to_string(budget));
  if (mode == EnumerationMode::Windowed && windowed_count > static_cast<long double>(budget))
    throw BudgetError("windowed enumeration at depth " + std::to_string(K) + " needs about " +
                      std::to_string(static_cast<long long>(windowed_count)) + " balls, budget is " +
                      std::to_string(budget));

  LatticeEnumeration out;
  out.mode = mode;
  for (const auto& e : ends) out.centers.push_back(e.pos);

  // Sorted endpoint positions of level <= j, for the windowed selection.
  std::vector<std::vector<const Endpoint*>> by_level;
  if (mode == EnumerationMode::Windowed) {
    by_level.resize(static_cast<std::size_t>(K) + 1);
    for (long j = 0; j <= K; ++j)
      for (const auto& e : ends)
        if (e.level <= j) by_level[static_cast<std::size_t>(j)].push_back(&e);
  }

  for (const auto& c : ends) {
    std::map<Integer, long> radii;
    if (mode == EnumerationMode::Full) {
      for (const auto& e : ends) {
        if (e.pos == c.pos) continue;
        add_radii(radii, abs(e.pos - c.pos), std::max(c.level, e.level), lat.unit);
      }
    } else {
      for (long j = 0; j <= K; ++j) {
        const auto& list = by_level[static_cast<std::size_t>(j)];
        const auto it = std::lower_bound(list.begin(), list.end(), c.pos,
                                         [](const Endpoint* e, const Integer& p) { return e->pos < p; });
        const long label = std::max(c.level, j);
        auto left = it;
        for (long taken = 0; taken < window && left != list.begin(); ++taken) {
          --left;
          add_radii(radii, c.pos - (*left)->pos, label, lat.unit);
        }
        auto right = it;
        if (right != list.end() && (*right)->pos == c.pos) ++right;
        for (long taken = 0; taken < window && right != list.end(); ++taken, ++right)
          add_radii(radii, (*right)->pos - c.pos, label, lat.unit);
      }
    }
    for (const auto& [r, label] : radii) out.balls.push_back({c.pos, r, std::max(label, 1L)});
  }
  return out;
}

void check_schedule(const std::vector<long>& schedule, long eval_depth, bool need_three) {
  if (schedule.empty()) throw ValidationError("depth schedule is empty");
  if (need_three && schedule.size() < 3) throw ValidationError("growth classification needs >= 3 depths");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i] < 1) throw ValidationError("schedule depths must be >= 1");
    if (i > 0 && schedule[i] <= schedule[i - 1]) throw ValidationError("schedule must be strictly increasing");
  }
  if (eval_depth < schedule.back())
    throw ValidationError("eval_depth " + std::to_string(eval_depth) + " is below the enumeration depth " +
                          std::to_string(schedule.back()));
}

}  // namespace detail

using detail::Lattice;

namespace {

std::vector<int> state_key(const MeasureSpec& measure, const Word& w) {
  if (const auto* rule = std::get_if<WordMeasureRule>(&measure)) return rule_state(*rule, w);
  return {};
}

// Splitting vectors as integers, one small automaton per level: states are
// rule_state classes, so the descent never touches words.
struct MassLevel {
  std::vector<std::vector<Integer>> vec;  // per state, entries * scale
  std::vector<std::vector<int>> child;    // per state and letter, state at the next level
};

struct Kernel {
  Lattice lat;
  std::vector<MassLevel> levels;  // index 1..depth
  std::vector<Integer> suffix;    // suffix[k] = prod_{i > k} scale_i
  Integer total;                  // mass of [0, 1]

  enum class Key { Lo, Hi };

  Kernel(const MeasureSpec& measure, LevelTable& table, long depth, const Integer& extra = 1)
      : lat(detail::make_lattice(table, depth, extra)) {
    const CantorConfig& config = table.config();
    levels.resize(static_cast<std::size_t>(depth) + 1);
    std::vector<Integer> scale(static_cast<std::size_t>(depth) + 1, Integer(1));
    std::vector<Word> reps{Word{}};
    for (long k = 1; k <= depth; ++k) {
      MassLevel& lvl = levels[static_cast<std::size_t>(k)];
      std::vector<ProbVector> vectors;
      Integer m = 1;
      for (const Word& w : reps) {
        vectors.push_back(vector_at(measure, config, w));
        for (const auto& e : vectors.back().entries()) mpz_lcm(m.get_mpz_t(), m.get_mpz_t(), e.get_den_mpz_t());
      }
      scale[static_cast<std::size_t>(k)] = m;
      for (const auto& p : vectors) {
        std::vector<Integer> ints;
        for (const auto& e : p.entries()) {
          const Rational v = e * m;
          ints.push_back(v.get_num());
        }
        lvl.vec.push_back(std::move(ints));
      }
      if (k == depth) break;
      std::map<std::vector<int>, int> index;
      std::vector<Word> next;
      for (const Word& w : reps) {
        std::vector<int> row;
        for (int a = 1; a <= config.n_at(k); ++a) {
          Word c = w.child(a);
          auto [it, inserted] = index.emplace(state_key(measure, c), static_cast<int>(next.size()));
          if (inserted) next.push_back(std::move(c));
          row.push_back(it->second);
        }
        lvl.child.push_back(std::move(row));
      }
      reps = std::move(next);
    }
    suffix.assign(static_cast<std::size_t>(depth) + 1, Integer(1));
    for (long k = depth - 1; k >= 0; --k)
      suffix[static_cast<std::size_t>(k)] = suffix[static_cast<std::size_t>(k) + 1] * scale[static_cast<std::size_t>(k) + 1];
    total = suffix[0];
  }

  // Mass of the level-depth components whose key endpoint is < t (strict)
  // or <= t.
  Integer prefix_mass(const Integer& t, Key key, bool strict) const {
    const long D = lat.depth;
    const Integer& dD = lat.delta[static_cast<std::size_t>(D)];
    auto pred = [&](const Integer& v) { return strict ? v < t : v <= t; };
    Integer keymin = key == Key::Lo ? Integer(0) : dD;
    Integer keymax = key == Key::Lo ? Integer(lat.unit - dD) : lat.unit;
    if (pred(keymax)) return total;
    if (!pred(keymin)) return 0;

    Integer acc = 0, lo = 0, mass = 1, clo, term;
    int state = 0;
    for (long k = 1; k <= D; ++k) {
      const MassLevel& lvl = levels[static_cast<std::size_t>(k)];
      const auto& vec = lvl.vec[static_cast<std::size_t>(state)];
      const Integer& stride = lat.stride[static_cast<std::size_t>(k)];
      const Integer& delta = lat.delta[static_cast<std::size_t>(k)];
      int partial = -1;
      clo = lo;
      for (long i = 0; i < lat.n[static_cast<std::size_t>(k)]; ++i) {
        if (i > 0) clo += stride;
        if (key == Key::Lo) {
          keymin = clo;
          keymax = clo + delta - dD;
        } else {
          keymin = clo + dD;
          keymax = clo + delta;
        }
        if (pred(keymax)) {
          term = mass * vec[static_cast<std::size_t>(i)];
          acc += term * suffix[static_cast<std::size_t>(k)];
          continue;
        }
        if (pred(keymin)) partial = static_cast<int>(i);
        break;
      }
      if (partial < 0) return acc;
      lo = clo;
      mass *= vec[static_cast<std::size_t>(partial)];
      if (k < D) state = lvl.child[static_cast<std::size_t>(state)][static_cast<std::size_t>(partial)];
    }
    return acc;
  }

  // Bounds on mu([a, b]) in units of 1/total.
  Integer lower(const Integer& a, const Integer& b) const {
    Integer v = prefix_mass(b, Key::Hi, false) - prefix_mass(a, Key::Lo, true);
    return v > 0 ? v : Integer(0);
  }
  Integer upper(const Integer& a, const Integer& b) const {
    return prefix_mass(b, Key::Lo, false) - prefix_mass(a, Key::Hi, true);
  }
};

struct Candidate {
  Integer num;
  Integer den;
  std::size_t index = 0;
  bool set = false;

  // Larger ratio wins; equal ratios go to the lexicographically smaller ball.
  bool beats(const Candidate& o) const {
    if (!o.set) return set;
    if (!set) return false;
    const int c = cmp(Integer(num * o.den), Integer(o.num * den));
    return c > 0 || (c == 0 && index < o.index);
  }
};

SeriesPoint make_point(long K, const Candidate& best, const detail::LatticeEnumeration& en, const Kernel& kernel) {
  SeriesPoint p;
  p.K = K;
  if (!best.set) return p;
  const auto& b = en.balls[best.index];
  p.sup_ratio = Rational(best.num, best.den);
  p.sup_ratio.canonicalize();
  p.x = detail::from_lattice(b.x, kernel.lat);
  p.r = detail::from_lattice(b.r, kernel.lat);
  const Integer r2 = 2 * b.r;
  p.exact = kernel.lower(b.x - b.r, b.x + b.r) == kernel.upper(b.x - b.r, b.x + b.r) &&
            kernel.lower(b.x - r2, b.x + r2) == kernel.upper(b.x - r2, b.x + r2);
  return p;
}

OracleReport finish_report(const std::vector<long>& schedule, const std::vector<SeriesPoint>& series,
                           const OracleOptions& options, EnumerationMode mode, std::size_t balls) {
  OracleReport report;
  report.K = schedule.back();
  report.eval_depth = options.eval_depth;
  report.series = series;
  report.sup_ratio_lower = series.back().sup_ratio;
  report.witness_x = series.back().x;
  report.witness_r = series.back().r;
  report.exact = series.back().exact;
  report.mode = mode;
  report.truncated = mode == EnumerationMode::Windowed;
  report.balls = balls;
  return report;
}

}  // namespace

BallEnumeration enumerate_balls(const CantorConfig& config, long K, long long budget, EnumerationMode mode,
                                long window) {
  if (K < 1) throw ValidationError("enumeration depth K must be >= 1");
  LevelTable table(config, K);
  const Lattice lat = detail::make_lattice(table, K);
  const auto en = detail::enumerate_lattice(lat, K, budget, mode, window);
  BallEnumeration out;
  out.K = K;
  out.mode = en.mode;
  out.truncated = en.mode == EnumerationMode::Windowed;
  for (const auto& c : en.centers) out.centers.push_back(detail::from_lattice(c, lat));
  out.balls.reserve(en.balls.size());
  for (const auto& b : en.balls)
    out.balls.push_back({detail::from_lattice(b.x, lat), detail::from_lattice(b.r, lat), b.level});
  return out;
}

OracleReport sup_doubling_series(const MeasureSpec& measure, const CantorConfig& config,
                                 const std::vector<long>& schedule, const OracleOptions& options) {
  detail::check_schedule(schedule, options.eval_depth, false);
  validate_measure(measure, config);
  const long Kmax = schedule.back();
  LevelTable table(config, options.eval_depth);
  const Kernel kernel(measure, table, options.eval_depth);
  const auto en = detail::enumerate_lattice(kernel.lat, Kmax, options.budget, options.mode, options.window);

  // best[label]: best ball first appearing at that depth.
  const std::size_t labels = static_cast<std::size_t>(Kmax) + 1;
  std::vector<Candidate> best(labels);
  const long long count = static_cast<long long>(en.balls.size());

#pragma omp parallel
  {
    std::vector<Candidate> local(labels);
    Candidate cand;
#pragma omp for schedule(dynamic, 64)
    for (long long i = 0; i < count; ++i) {
      const auto& b = en.balls[static_cast<std::size_t>(i)];
      const Integer r2 = 2 * b.r;
      cand.num = kernel.lower(b.x - r2, b.x + r2);
      cand.den = kernel.upper(b.x - b.r, b.x + b.r);
      cand.index = static_cast<std::size_t>(i);
      cand.set = true;
      UCANTOR_ENSURE(cand.den > 0, "ball centred in E has zero upper mass");
      auto& slot = local[static_cast<std::size_t>(b.level)];
      if (cand.beats(slot)) slot = cand;
    }
#pragma omp critical(ucantor_oracle_merge)
    for (std::size_t l = 0; l < labels; ++l)
      if (local[l].beats(best[l])) best[l] = local[l];
  }

  std::vector<SeriesPoint> series;
  Candidate running;
  std::size_t label = 0;
  for (long K : schedule) {
    for (; label <= static_cast<std::size_t>(K); ++label)
      if (best[label].beats(running)) running = best[label];
    series.push_back(make_point(K, running, en, kernel));
  }
  return finish_report(schedule, series, options, en.mode, en.balls.size());
}

OracleReport sup_doubling_ratio(const MeasureSpec& measure, const CantorConfig& config, long K,
                                const OracleOptions& options) {
  return sup_doubling_series(measure, config, std::vector<long>{K}, options);
}

BallBrackets evaluate_ball(const MeasureSpec& measure, const CantorConfig& config, const Rational& x,
                           const Rational& r, long eval_depth) {
  if (r <= 0) throw ValidationError("ball radius must be positive");
  if (eval_depth < 1) throw ValidationError("eval_depth must be >= 1");
  validate_measure(measure, config);
  LevelTable table(config, eval_depth);
  Integer extra;
  mpz_lcm(extra.get_mpz_t(), x.get_den_mpz_t(), r.get_den_mpz_t());
  const Kernel kernel(measure, table, eval_depth, extra);
  const Integer xi = detail::to_lattice(x, kernel.lat), ri = detail::to_lattice(r, kernel.lat);
  auto bounds = [&](const Integer& rad) {
    MeasureBounds m;
    m.depth = eval_depth;
    m.lower = Rational(kernel.lower(xi - rad, xi + rad), kernel.total);
    m.upper = Rational(kernel.upper(xi - rad, xi + rad), kernel.total);
    m.lower.canonicalize();
    m.upper.canonicalize();
    return m;
  };
  return {bounds(ri), bounds(2 * ri)};
}

bool in_gap(LevelTable& table, const Rational& t, long depth) {
  if (t < 0 || t > 1) return true;
  table.extend_to(depth);
  Rational lo = 0;
  for (long k = 1; k <= depth; ++k) {
    const Rational stride = table.stride(k);
    const Rational& delta = table.delta(k);
    bool found = false;
    for (long i = 0; i < table.config().n_at(k); ++i) {
      const Rational clo = lo + i * stride;
      if (clo <= t && t <= clo + delta) {
        lo = clo;
        found = true;
        break;
      }
    }
    if (!found) return true;
  }
  return false;
}

Growth classify_series(const std::vector<Rational>& series, const Rational& gamma) {
  if (series.size() < 3) throw ValidationError("growth classification needs >= 3 depths");
  const std::size_t n = series.size();
  const bool grew = series.back() >= gamma * series.front();
  const bool rising = series[n - 3] < series[n - 2] && series[n - 2] < series[n - 1];
  return grew && rising ? Growth::Growing : Growth::Bounded;
}

GrowthReport growth_classification(const MeasureSpec& measure, const CantorConfig& config,
                                   const std::vector<long>& schedule, const OracleOptions& options) {
  detail::check_schedule(schedule, options.eval_depth, true);
  GrowthReport out;
  out.report = sup_doubling_series(measure, config, schedule, options);
  std::vector<Rational> values;
  for (const auto& p : out.report.series) values.push_back(p.sup_ratio);
  out.label = classify_series(values, options.growth_factor);
  return out;
}

}  // namespace ucantor
