#include "ucantor/cantor.hpp"

#include <numeric>
#include <sstream>

#include "ucantor/error.hpp"

namespace ucantor {

namespace {

long as_branching(const Rational& v, long k) {
  if (v.get_den() != 1 || v < 2 || !v.get_num().fits_slong_p())
    throw ValidationError("n_" + std::to_string(k) + " = " + to_string(v) + " is not an integer >= 2");
  return v.get_num().get_si();
}

void validate_n(const SequenceSpec& n) {
  for (long k = 1; k < n.tail_start(); ++k) as_branching(n.at(k), k);
  const auto per = n.periodicity();
  if (!per)
    throw ValidationError("n tail must be constant or periodic; decaying tails fall below 2 from some index >= " +
                          std::to_string(n.tail_start()));
  for (long k = per->start; k < per->start + per->period; ++k) as_branching(n.at(k), k);
}

void check_gap_at(const SequenceSpec& n, const SequenceSpec& c, long k) {
  const Rational ck = c.at(k);
  const long nk = as_branching(n.at(k), k);
  if (ck <= 0 || ck >= 1)
    throw ValidationError("c_" + std::to_string(k) + " = " + to_string(ck) + " is outside (0,1)");
  if ((nk - 1) * ck >= 1)
    throw ValidationError("(n_k - 1) c_k >= 1 at k = " + std::to_string(k) + " (n_k = " + std::to_string(nk) +
                          ", c_k = " + to_string(ck) + ")");
}

void validate_c(const SequenceSpec& n, const SequenceSpec& c) {
  for (long k = 1; k < c.tail_start(); ++k) check_gap_at(n, c, k);

  const long n_period = n.periodicity()->period;
  long window = n_period;
  if (const auto cp = c.periodicity()) {
    window = std::lcm(n_period, cp->period);
  } else {
    // Decreasing tails: within each residue class mod n_period the first
    // occurrence after the n prefix is the worst case.
    std::visit(
        [&](const auto& rule) {
          using T = std::decay_t<decltype(rule)>;
          if constexpr (std::is_same_v<T, GeometricTail> || std::is_same_v<T, PowerTail>) {
            if (rule.coefficient <= 0)
              throw ValidationError("c tail coefficient must be positive, got " + to_string(rule.coefficient));
          }
        },
        c.tail());
  }
  const long end = std::max(c.tail_start(), n.tail_start()) + window;
  for (long k = c.tail_start(); k < end; ++k) check_gap_at(n, c, k);
}

}  // namespace

CantorConfig::CantorConfig(SequenceSpec n, SequenceSpec c) : n_(std::move(n)), c_(std::move(c)) {
  validate_n(n_);
  validate_c(n_, c_);
}

CantorConfig CantorConfig::middle_thirds() { return constant(2, Rational(1, 3)); }

CantorConfig CantorConfig::constant(long branching, const Rational& gap) {
  return CantorConfig(SequenceSpec::constant(Rational(branching)), SequenceSpec::constant(gap));
}

long CantorConfig::n_at(long k) const { return n_.at(k).get_num().get_si(); }

long CantorConfig::max_branching() const { return n_.max().get_num().get_si(); }

std::string Word::str() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t j = 0; j < letters.size(); ++j) os << (j ? "," : "") << letters[j];
  os << ')';
  return os.str();
}

void validate_word(const CantorConfig& config, const Word& w) {
  for (std::size_t j = 0; j < w.size(); ++j) {
    const long k = static_cast<long>(j) + 1;
    if (w[j] < 1 || w[j] > config.n_at(k))
      throw ValidationError("word letter i_" + std::to_string(k) + " = " + std::to_string(w[j]) +
                            " outside 1.." + std::to_string(config.n_at(k)));
  }
}

LevelTable::LevelTable(CantorConfig config, long depth) : config_(std::move(config)) {
  levels_.push_back(LevelStats{0, Integer(1), Rational(1), std::nullopt});
  extend_to(depth);
}

void LevelTable::extend_to(long depth) {
  while (this->depth() < depth) {
    const LevelStats& prev = levels_.back();
    const long k = prev.k + 1;
    const long nk = config_.n_at(k);
    const Rational ck = config_.c_at(k);
    LevelStats next;
    next.k = k;
    next.count = prev.count * nk;
    next.delta = prev.delta * (1 - (nk - 1) * ck) / nk;
    next.epsilon = ck * prev.delta;
    levels_.push_back(std::move(next));
  }
}

const LevelStats& LevelTable::at(long k) {
  extend_to(k);
  return levels_[static_cast<std::size_t>(k)];
}

LevelStats level_stats(const CantorConfig& config, long k) {
  if (k < 0) throw ValidationError("level must be >= 0");
  LevelTable table(config, k);
  return table[k];
}

bool in_lambda(LevelTable& table, long k) { return table.epsilon(k) < table.delta(k); }

std::optional<GapContext> gap_context(LevelTable& table, long k) {
  if (k < 1) throw ValidationError("gap context needs k >= 1");
  if (!in_lambda(table, k)) return std::nullopt;
  const Rational eps = table.epsilon(k);
  long m = 1;
  while (!(table.delta(k + m) <= eps)) ++m;
  const Rational d = table.delta(k + m);
  const Rational e = table.epsilon(k + m);
  const Integer s = floor(Rational((eps + e) / (d + e)));
  const Rational sq(s);
  UCANTOR_ENSURE(sq >= 1 && sq * d + (sq - 1) * e <= eps && eps < (sq + 1) * d + sq * e,
                 "gap context sandwich failed at k = " + std::to_string(k));
  return GapContext{k, m, s.get_si()};
}

std::optional<GapContext> gap_context(const CantorConfig& config, long k) {
  LevelTable table(config, k);
  return gap_context(table, k);
}

Interval component_interval(LevelTable& table, const Word& w) {
  validate_word(table.config(), w);
  Rational lo = 0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const long k = static_cast<long>(j) + 1;
    lo += (w[j] - 1) * table.stride(k);
  }
  return {lo, lo + table.delta(static_cast<long>(w.size()))};
}

Interval component_interval(const CantorConfig& config, const Word& w) {
  LevelTable table(config, static_cast<long>(w.size()));
  return component_interval(table, w);
}

Interval gap_interval(LevelTable& table, const Word& w, int i) {
  const long k = static_cast<long>(w.size()) + 1;
  const long nk = table.config().n_at(k);
  if (i < 1 || i >= nk)
    throw ValidationError("gap index " + std::to_string(i) + " outside 1.." + std::to_string(nk - 1));
  const Interval left = component_interval(table, w.child(i));
  return {left.hi, left.hi + table.epsilon(k)};
}

Interval gap_interval(const CantorConfig& config, const Word& w, int i) {
  LevelTable table(config, static_cast<long>(w.size()) + 1);
  return gap_interval(table, w, i);
}

std::pair<Word, Word> adjacent_boundary_words(const CantorConfig& config, const Word& w, int i, long t) {
  validate_word(config, w);
  const long k = static_cast<long>(w.size()) + 1;
  const long nk = config.n_at(k);
  if (i < 1 || i >= nk)
    throw ValidationError("gap index " + std::to_string(i) + " outside 1.." + std::to_string(nk - 1));
  if (t < 0) throw ValidationError("depth t must be >= 0");
  Word left = w.child(i);
  Word right = w.child(i + 1);
  for (long j = 1; j <= t; ++j) {
    left.letters.push_back(static_cast<int>(config.n_at(k + j)));
    right.letters.push_back(1);
  }
  return {left, right};
}

bool nc_summable(const CantorConfig& config) {
  const auto& tail = config.c().tail();
  if (std::holds_alternative<GeometricTail>(tail)) return true;
  if (const auto* p = std::get_if<PowerTail>(&tail)) return p->exponent >= 2;
  return false;
}

namespace {

// Upper bound on sum_{i > K} (n_i - 1) c_i, valid once K is past every prefix.
Rational tail_sum_bound(const CantorConfig& config, long K) {
  const long nmax = config.n().tail_max().get_num().get_si();
  const auto& tail = config.c().tail();
  if (const auto* g = std::get_if<GeometricTail>(&tail))
    return (nmax - 1) * g->coefficient * pow(g->ratio, static_cast<unsigned long>(K + 1)) / (1 - g->ratio);
  const auto& p = std::get<PowerTail>(tail);
  // sum_{i > K} i^-e <= integral_K^inf x^-e dx = K^(1-e) / (e - 1)
  return (nmax - 1) * p.coefficient / (pow(Rational(K), p.exponent - 1) * (p.exponent - 1));
}

}  // namespace

Bracket tail_product_bracket(const CantorConfig& config, long from, const Rational& tolerance) {
  if (tolerance <= 0) throw ValidationError("tolerance must be positive");
  if (from < 1) from = 1;
  if (!nc_summable(config)) return {Rational(0), Rational(0)};

  const Rational half = tolerance / 2;
  long K = std::max(config.tail_start(), from);
  if (tail_sum_bound(config, K) > half) {
    // Exponential search followed by bisection on the monotone bound.
    long hi = K;
    while (tail_sum_bound(config, hi) > half) hi *= 2;
    long lo = hi / 2;
    while (hi - lo > 1) {
      const long mid = lo + (hi - lo) / 2;
      (tail_sum_bound(config, mid) > half ? lo : hi) = mid;
    }
    K = hi;
  }
  const Rational tail_sum = tail_sum_bound(config, K);

  const long terms = K - from + 1;
  Rational lower, upper;
  if (terms <= 256) {
    Rational prod = 1;
    for (long i = from; i <= K; ++i) prod *= 1 - (config.n_at(i) - 1) * config.c_at(i);
    lower = prod;
    upper = prod;
  } else {
    // Fixed-point product with directed rounding: each step loses < 2^-bits.
    const unsigned long bits =
        mpz_sizeinbase(ceil(Rational(4 * terms / tolerance)).get_mpz_t(), 2) + 2;
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 2, bits);
    Integer lo_fp = scale, hi_fp = scale;
    for (long i = from; i <= K; ++i) {
      const Rational f = 1 - (config.n_at(i) - 1) * config.c_at(i);
      Integer t = lo_fp * f.get_num();
      mpz_fdiv_q(lo_fp.get_mpz_t(), t.get_mpz_t(), f.get_den_mpz_t());
      t = hi_fp * f.get_num();
      mpz_cdiv_q(hi_fp.get_mpz_t(), t.get_mpz_t(), f.get_den_mpz_t());
    }
    lower = Rational(lo_fp, scale);
    upper = Rational(hi_fp, scale);
    lower.canonicalize();
    upper.canonicalize();
  }
  Rational lo_final = lower * (1 - tail_sum);
  if (lo_final < 0) lo_final = 0;
  return {lo_final, upper};
}

Bracket lebesgue_of_E(const CantorConfig& config, const Rational& tolerance) {
  return tail_product_bracket(config, 1, tolerance);
}

}  // namespace ucantor
