#include "ucantor/extension.hpp"

#include <algorithm>
#include <set>

#include "ucantor/error.hpp"

namespace ucantor {

const char* to_string(ExtensionOutcome outcome) {
  return outcome == ExtensionOutcome::Extendable ? "Extendable" : "NotExtendable";
}

LpVerdict lp_membership(const CantorConfig& config, const Rational& q) {
  if (q < 1) throw ValidationError("exponent q must be >= 1");
  LpVerdict v;
  v.q = q;
  const auto& tail = config.c().tail();
  if (std::holds_alternative<ConstantTail>(tail) || std::holds_alternative<PeriodicTail>(tail)) {
    v.member = false;
    v.reason = "constant: n_k c_k is eventually periodic and positive, so the terms do not tend to 0";
  } else if (std::holds_alternative<GeometricTail>(tail)) {
    v.member = true;
    v.reason = "geometric: n_k c_k <= sup n * a * rho^k is summable for every q";
  } else {
    const auto& p = std::get<PowerTail>(tail);
    v.member = q * p.exponent > 1;
    v.reason = "power: n_k c_k ~ k^-" + std::to_string(p.exponent) + ", summable in l^q iff q * " +
               std::to_string(p.exponent) + " > 1";
  }
  return v;
}

namespace {

Rational overlap(const Interval& a, const Interval& b) {
  const Rational lo = max_of(a.lo, b.lo);
  const Rational hi = a.hi < b.hi ? a.hi : b.hi;
  return hi > lo ? Rational(hi - lo) : Rational(0);
}

Bracket times(const Bracket& a, const Bracket& b) { return {a.lower * b.lower, a.upper * b.upper}; }

void collect_components(LevelTable& table, long depth, Word& w, const Rational& lo, std::vector<Piece>& out,
                        const MeasureSpec& measure, const Bracket& set_length) {
  const long j = static_cast<long>(w.size());
  if (j == depth) {
    const Rational mu = component_measure(measure, table.config(), w);
    out.push_back({{lo, lo + table.delta(j)}, {mu / set_length.upper, mu / set_length.lower}, w});
    return;
  }
  const long k = j + 1;
  for (int i = 1; i <= table.config().n_at(k); ++i) {
    const Rational clo = lo + (i - 1) * table.stride(k);
    if (i > 1) out.push_back({{clo - table.epsilon(k), clo}, {Rational(1), Rational(1)}, std::nullopt});
    w.letters.push_back(i);
    collect_components(table, depth, w, clo, out, measure, set_length);
    w.letters.pop_back();
  }
}

}  // namespace

Bracket PiecewiseMeasure::mass(const Interval& I) const {
  Bracket m{Rational(0), Rational(0)};
  for (const auto& p : pieces) {
    const Rational len = overlap(p.interval, I);
    if (len == 0) continue;
    m.lower += p.density.lower * len;
    m.upper += p.density.upper * len;
  }
  return m;
}

Bracket PiecewiseMeasure::restricted_total() const {
  Bracket total{Rational(0), Rational(0)};
  for (const auto& p : pieces) {
    if (!p.word) continue;
    const Bracket b = times(p.density, component_set_length);
    total.lower += b.lower;
    total.upper += b.upper;
  }
  return total;
}

Rational PiecewiseMeasure::max_density_upper() const {
  Rational m = pieces.front().density.upper;
  for (const auto& p : pieces) m = max_of(m, p.density.upper);
  return m;
}

Rational PiecewiseMeasure::min_density_lower() const {
  Rational m = pieces.front().density.lower;
  for (const auto& p : pieces)
    if (p.density.lower < m) m = p.density.lower;
  return m;
}

PiecewiseMeasure build_extension(const CantorConfig& config, const MeasureSpec& measure, const Rational& tolerance) {
  validate_measure(measure, config);
  const auto k0 = ultimately_one_uniform_index(measure);
  if (!k0)
    throw InapplicableError("extension needs an ultimately 1-uniform measure; the given vectors are not uniform "
                            "from any level on");
  if (!lp_membership(config, 1).member)
    throw InapplicableError("no doubling extension exists: {n_k c_k} is not summable, so E has Lebesgue measure 0");

  PiecewiseMeasure nu;
  nu.k0 = *k0;
  const long depth = *k0 - 1;
  LevelTable table(config, depth);
  const Bracket tail = tail_product_bracket(config, *k0, tolerance);
  UCANTOR_ENSURE(tail.lower > 0, "tail product bracket touches 0; tolerance too coarse");
  nu.component_set_length = {table.delta(depth) * tail.lower, table.delta(depth) * tail.upper};
  Word root;
  collect_components(table, depth, root, Rational(0), nu.pieces, measure, nu.component_set_length);
  return nu;
}

namespace {

// L(E cap I_w) for |w| = j: delta_j * prod_{i > j}(1 - (n_i - 1) c_i).
Bracket set_length_at(const CantorConfig& config, long j, const Rational& tolerance) {
  LevelTable table(config, j);
  const Bracket tail = tail_product_bracket(config, j + 1, tolerance);
  return {table.delta(j) * tail.lower, table.delta(j) * tail.upper};
}

Bracket restricted_mass_impl(const PiecewiseMeasure& nu, const Word& w, const Bracket& length_at_w) {
  const long depth = nu.k0 - 1;
  const long j = static_cast<long>(w.size());
  Bracket total{Rational(0), Rational(0)};
  for (const auto& p : nu.pieces) {
    if (!p.word) continue;
    const Word& v = *p.word;
    if (j <= depth) {
      // I_v inside I_w: all of E cap I_v counts.
      if (!std::equal(w.letters.begin(), w.letters.end(), v.letters.begin())) continue;
      const Bracket b = times(p.density, nu.component_set_length);
      total.lower += b.lower;
      total.upper += b.upper;
    } else if (std::equal(v.letters.begin(), v.letters.end(), w.letters.begin())) {
      return times(p.density, length_at_w);  // I_w inside I_v
    }
  }
  return total;
}

}  // namespace

Bracket restricted_mass(const PiecewiseMeasure& nu, const CantorConfig& config, const Word& w,
                        const Rational& tolerance) {
  validate_word(config, w);
  const long j = static_cast<long>(w.size());
  const Bracket len = j >= nu.k0 ? set_length_at(config, j, tolerance) : nu.component_set_length;
  return restricted_mass_impl(nu, w, len);
}

RestrictionCheck check_restriction(const PiecewiseMeasure& nu, const CantorConfig& config,
                                   const MeasureSpec& measure, long depth, const Rational& tolerance) {
  RestrictionCheck check;
  check.depth = depth;
  std::vector<Word> frontier{Word{}};
  for (long j = 0; j <= depth && check.passed; ++j) {
    const Bracket len = j >= nu.k0 ? set_length_at(config, j, tolerance) : nu.component_set_length;
    std::vector<Word> next;
    for (const Word& w : frontier) {
      ++check.components;
      if (!restricted_mass_impl(nu, w, len).contains(component_measure(measure, config, w))) {
        check.passed = false;
        check.failure = w;
        break;
      }
      if (j < depth)
        for (int a = 1; a <= config.n_at(j + 1); ++a) next.push_back(w.child(a));
    }
    frontier = std::move(next);
  }
  return check;
}

std::vector<SeriesPoint> nu_sup_series(const PiecewiseMeasure& nu, const std::vector<long>& schedule) {
  if (schedule.empty()) throw ValidationError("depth schedule is empty");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (schedule[i] <= schedule[i - 1]) throw ValidationError("schedule must be strictly increasing");
  if (schedule.front() < 0) throw ValidationError("grid exponents must be >= 0");

  std::set<Rational> piece_points;
  for (const auto& p : nu.pieces) {
    piece_points.insert(p.interval.lo);
    piece_points.insert(p.interval.hi);
  }

  std::vector<SeriesPoint> series;
  SeriesPoint best;
  bool have = false;
  for (long g : schedule) {
    Integer den = 1;
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(g));
    std::set<Rational> centers(piece_points);
    for (Integer j = 0; j <= den; ++j) {
      Rational c(j, den);
      c.canonicalize();
      centers.insert(c);
    }
    for (const Rational& x : centers) {
      std::set<Rational> radii;
      Rational dyadic = 1;
      for (long i = 0; i <= g; ++i, dyadic /= 2) radii.insert(dyadic);
      for (const Rational& e : piece_points) {
        if (e == x) continue;
        const Rational d = e > x ? Rational(e - x) : Rational(x - e);
        for (const Rational& r : {d, Rational(2 * d), Rational(d / 2)}) radii.insert(r > 1 ? Rational(1) : r);
      }
      for (const Rational& r : radii) {
        const Bracket outer = nu.mass({x - 2 * r, x + 2 * r});
        const Bracket inner = nu.mass({x - r, x + r});
        const Rational ratio = outer.lower / inner.upper;
        if (!have || ratio > best.sup_ratio ||
            (ratio == best.sup_ratio && (x < best.x || (x == best.x && r < best.r)))) {
          have = true;
          best.sup_ratio = ratio;
          best.x = x;
          best.r = r;
          best.exact = outer.exact() && inner.exact();
        }
      }
    }
    best.K = g;
    series.push_back(best);
  }
  return series;
}

ExtensionVerdict check_theorem3(const CantorConfig& config, const MeasureSpec& measure,
                                const std::vector<long>& schedule, const Rational& tolerance) {
  validate_measure(measure, config);
  if (!ultimately_one_uniform_index(measure))
    throw InapplicableError("extension needs an ultimately 1-uniform measure");
  if (schedule.empty()) throw ValidationError("depth schedule is empty");
  ExtensionVerdict v;
  v.lp = lp_membership(config, 1);
  if (!v.lp.member) {
    v.outcome = ExtensionOutcome::NotExtendable;
    return v;
  }
  v.outcome = ExtensionOutcome::Extendable;
  v.nu = build_extension(config, measure, tolerance);
  v.mass = v.nu->restricted_total();
  v.restriction = check_restriction(*v.nu, config, measure, schedule.back(), tolerance);
  v.nu_series = nu_sup_series(*v.nu, schedule);
  v.nu_bound = 2 * v.nu->max_density_upper() / v.nu->min_density_lower();
  v.nu_within_bound = std::all_of(v.nu_series.begin(), v.nu_series.end(),
                                  [&](const SeriesPoint& p) { return p.sup_ratio <= v.nu_bound; });
  if (schedule.size() >= 3) {
    std::vector<Rational> values;
    for (const auto& p : v.nu_series) values.push_back(p.sup_ratio);
    v.nu_growth = classify_series(values, Rational(3, 2));
  }
  return v;
}

}  // namespace ucantor
