#include "ucantor/measure.hpp"

#include <algorithm>
#include <numeric>

#include "ucantor/error.hpp"

namespace ucantor {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require_size(const ProbVector& p, long expected, const std::string& where) {
  if (static_cast<long>(p.size()) != expected)
    throw ValidationError(where + ": vector has " + std::to_string(p.size()) + " entries, expected n_k = " +
                          std::to_string(expected));
}
}  // namespace

ProbVector::ProbVector(std::vector<Rational> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw ValidationError("probability vector must be non-empty");
  Rational sum = 0;
  for (const auto& e : entries_) {
    if (e <= 0) throw ValidationError("probability vector entries must be strictly positive, got " + to_string(e));
    sum += e;
  }
  if (sum != 1) throw ValidationError("probability vector sums to " + to_string(sum) + ", not 1");
}

ProbVector ProbVector::uniform(long size) { return ProbVector(std::vector<Rational>(size, Rational(1, size))); }

bool ProbVector::is_uniform() const {
  return std::all_of(entries_.begin(), entries_.end(), [&](const Rational& e) { return e == entries_.front(); });
}

std::vector<Rational> ProbVector::doubled() const {
  std::vector<Rational> out(entries_);
  out.insert(out.end(), entries_.begin(), entries_.end());
  return out;
}

MatchingSequence::MatchingSequence(std::vector<ProbVector> prefix, VectorTail tail)
    : prefix_(std::move(prefix)), tail_(std::move(tail)) {
  if (const auto* p = std::get_if<PeriodicVectorTail>(&tail_); p && p->vectors.empty())
    throw ValidationError("periodic vector tail needs period >= 1");
}

long MatchingSequence::tail_period() const {
  if (const auto* p = std::get_if<PeriodicVectorTail>(&tail_)) return static_cast<long>(p->vectors.size());
  return 1;
}

ProbVector MatchingSequence::at(const CantorConfig& config, long k) const {
  if (k < 1) throw ValidationError("vector index must be >= 1");
  if (k <= static_cast<long>(prefix_.size())) return prefix_[static_cast<std::size_t>(k - 1)];
  if (const auto* p = std::get_if<PeriodicVectorTail>(&tail_))
    return p->vectors[static_cast<std::size_t>((k - 1) % static_cast<long>(p->vectors.size()))];
  return ProbVector::uniform(config.n_at(k));
}

void MatchingSequence::validate(const CantorConfig& config) const {
  for (long k = 1; k <= static_cast<long>(prefix_.size()); ++k)
    require_size(prefix_[static_cast<std::size_t>(k - 1)], config.n_at(k), "P_" + std::to_string(k));
  if (std::holds_alternative<PeriodicVectorTail>(tail_)) {
    const long n_period = config.n().periodicity()->period;
    const long end = std::max(tail_start(), config.n().tail_start()) + std::lcm(n_period, tail_period());
    for (long k = tail_start(); k < end; ++k) require_size(at(config, k), config.n_at(k), "P_" + std::to_string(k));
  }
}

std::optional<long> MatchingSequence::ultimately_uniform_index() const {
  if (const auto* p = std::get_if<PeriodicVectorTail>(&tail_)) {
    if (!std::all_of(p->vectors.begin(), p->vectors.end(), [](const ProbVector& v) { return v.is_uniform(); }))
      return std::nullopt;
  }
  long k0 = 1;
  for (long k = 1; k <= static_cast<long>(prefix_.size()); ++k)
    if (!prefix_[static_cast<std::size_t>(k - 1)].is_uniform()) k0 = k + 1;
  return k0;
}

namespace {

long window_end(const CantorConfig& config, long start, long period) {
  const long n_period = config.n().periodicity()->period;
  return std::max(start, config.n().tail_start()) + std::lcm(n_period, period) + 1;
}

void validate_rule(const LevelOnlyRule& r, const CantorConfig& config) { r.sequence.validate(config); }

void validate_rule(const LastLetterRule& r, const CantorConfig& config) {
  if (r.period < 1) throw ValidationError("last-letter rule period must be >= 1");
  require_size(r.root, config.n_at(1), "root vector");
  const long end = window_end(config, 2, r.period);
  for (long k = 2; k < end; ++k) {
    for (int a = 1; a <= config.n_at(k - 1); ++a) {
      const auto it = r.table.find({k % r.period, a});
      if (it == r.table.end())
        throw ValidationError("last-letter rule has no vector for (phase " + std::to_string(k % r.period) +
                              ", letter " + std::to_string(a) + ") needed at level " + std::to_string(k));
      require_size(it->second, config.n_at(k), "last-letter vector at level " + std::to_string(k));
    }
  }
}

void validate_rule(const WordTableRule& r, const CantorConfig& config) {
  r.fallback.validate(config);
  for (const auto& [w, p] : r.entries) {
    validate_word(config, w);
    require_size(p, config.n_at(static_cast<long>(w.size()) + 1), "table vector for word " + w.str());
  }
}

}  // namespace

void validate_measure(const MeasureSpec& measure, const CantorConfig& config) {
  std::visit(overloaded{
                 [&](const MatchingSequence& m) { m.validate(config); },
                 [&](const WordMeasureRule& rule) { std::visit([&](const auto& r) { validate_rule(r, config); }, rule); },
             },
             measure);
}

ProbVector vector_at(const WordMeasureRule& rule, const CantorConfig& config, const Word& w) {
  const long k = static_cast<long>(w.size()) + 1;
  return std::visit(overloaded{
                        [&](const LevelOnlyRule& r) { return r.sequence.at(config, k); },
                        [&](const LastLetterRule& r) {
                          if (w.empty()) return r.root;
                          return r.table.at({k % r.period, w.letters.back()});
                        },
                        [&](const WordTableRule& r) {
                          const auto it = r.entries.find(w);
                          return it != r.entries.end() ? it->second : r.fallback.at(config, k);
                        },
                    },
                    rule);
}

ProbVector vector_at(const MeasureSpec& measure, const CantorConfig& config, const Word& w) {
  return std::visit(overloaded{
                        [&](const MatchingSequence& m) { return m.at(config, static_cast<long>(w.size()) + 1); },
                        [&](const WordMeasureRule& r) { return vector_at(r, config, w); },
                    },
                    measure);
}

std::vector<ProbVector> vectors_at_level(const MeasureSpec& measure, const CantorConfig& config, long k) {
  std::vector<ProbVector> out;
  std::visit(overloaded{
                 [&](const MatchingSequence& m) { out.push_back(m.at(config, k)); },
                 [&](const WordMeasureRule& rule) {
                   std::visit(overloaded{
                                  [&](const LevelOnlyRule& r) { out.push_back(r.sequence.at(config, k)); },
                                  [&](const LastLetterRule& r) {
                                    if (k == 1) {
                                      out.push_back(r.root);
                                      return;
                                    }
                                    for (int a = 1; a <= config.n_at(k - 1); ++a)
                                      out.push_back(r.table.at({k % r.period, a}));
                                  },
                                  [&](const WordTableRule& r) {
                                    out.push_back(r.fallback.at(config, k));
                                    for (const auto& [w, p] : r.entries)
                                      if (static_cast<long>(w.size()) + 1 == k) out.push_back(p);
                                  },
                              },
                              rule);
                 },
             },
             measure);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> rule_state(const WordMeasureRule& rule, const Word& w) {
  return std::visit(overloaded{
                        [](const LevelOnlyRule&) { return std::vector<int>{}; },
                        [&](const LastLetterRule&) { return std::vector<int>{w.empty() ? 0 : w.letters.back()}; },
                        [&](const WordTableRule& r) {
                          const auto it = r.entries.lower_bound(w);
                          const bool is_prefix = it != r.entries.end() && it->first.size() >= w.size() &&
                                                 std::equal(w.letters.begin(), w.letters.end(), it->first.letters.begin());
                          return is_prefix ? w.letters : std::vector<int>{-1};
                        },
                    },
                    rule);
}

Rational component_measure(const MeasureSpec& measure, const CantorConfig& config, const Word& w) {
  validate_word(config, w);
  Rational mass = 1;
  Word prefix;
  for (std::size_t j = 0; j < w.size(); ++j) {
    mass *= vector_at(measure, config, prefix)[static_cast<std::size_t>(w[j] - 1)];
    prefix.letters.push_back(w[j]);
  }
  return mass;
}

namespace {

struct Descent {
  const MeasureSpec& measure;
  LevelTable& table;
  const Interval& I;
  long depth;
  MeasureBounds out;

  // Component of level j at [lo, lo + delta_j], known to meet I without
  // being contained in it.
  void straddle(Word& w, const Rational& lo, const Rational& mass, long j) {
    if (j == depth) {
      out.upper += mass;
      return;
    }
    const long k = j + 1;
    const ProbVector p = vector_at(measure, table.config(), w);
    const Rational stride = table.stride(k);
    const Rational& delta = table.delta(k);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const Rational clo = lo + static_cast<long>(i) * stride;
      const Rational chi = clo + delta;
      if (chi < I.lo || clo > I.hi) continue;
      const Rational cmass = mass * p[i];
      if (I.lo <= clo && chi <= I.hi) {
        out.lower += cmass;
        out.upper += cmass;
        continue;
      }
      w.letters.push_back(static_cast<int>(i) + 1);
      straddle(w, clo, cmass, k);
      w.letters.pop_back();
    }
  }
};

}  // namespace

MeasureBounds interval_measure(const MeasureSpec& measure, LevelTable& table, const Interval& I, long depth) {
  if (depth < 1) throw ValidationError("truncation depth must be >= 1");
  if (I.hi < I.lo) throw ValidationError("interval with hi < lo");
  table.extend_to(depth);
  Descent d{measure, table, I, depth, {Rational(0), Rational(0), depth}};
  if (I.hi < 0 || I.lo > 1) return d.out;
  if (I.lo <= 0 && 1 <= I.hi) return {Rational(1), Rational(1), depth};
  Word root;
  d.straddle(root, Rational(0), Rational(1), 0);
  return d.out;
}

MeasureBounds interval_measure(const MeasureSpec& measure, const CantorConfig& config, const Interval& I,
                               long depth) {
  LevelTable table(config, depth);
  return interval_measure(measure, table, I, depth);
}

MeasureBounds ball_measure(const MeasureSpec& measure, LevelTable& table, const Rational& x, const Rational& r,
                           long depth) {
  if (r <= 0) throw ValidationError("ball radius must be positive");
  return interval_measure(measure, table, Interval{x - r, x + r}, depth);
}

MeasureBounds ball_measure(const MeasureSpec& measure, const CantorConfig& config, const Rational& x,
                           const Rational& r, long depth) {
  LevelTable table(config, depth);
  return ball_measure(measure, table, x, r, depth);
}

std::optional<long> ultimately_one_uniform_index(const MeasureSpec& measure) {
  return std::visit(
      overloaded{
          [](const MatchingSequence& m) { return m.ultimately_uniform_index(); },
          [](const WordMeasureRule& rule) {
            return std::visit(
                overloaded{
                    [](const LevelOnlyRule& r) { return r.sequence.ultimately_uniform_index(); },
                    [](const LastLetterRule& r) -> std::optional<long> {
                      for (const auto& [key, p] : r.table)
                        if (!p.is_uniform()) return std::nullopt;
                      return r.root.is_uniform() ? 1 : 2;
                    },
                    [](const WordTableRule& r) -> std::optional<long> {
                      auto k0 = r.fallback.ultimately_uniform_index();
                      if (!k0) return std::nullopt;
                      for (const auto& [w, p] : r.entries)
                        if (!p.is_uniform()) k0 = std::max(*k0, static_cast<long>(w.size()) + 2);
                      return k0;
                    },
                },
                rule);
          },
      },
      measure);
}

}  // namespace ucantor
