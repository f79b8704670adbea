#include "ucantor/checker.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "ucantor/error.hpp"

namespace ucantor {

const char* to_string(ConditionKind kind) {
  switch (kind) {
    case ConditionKind::VectorUniform: return "vector-uniform";
    case ConditionKind::AdjacentRatio: return "adjacent-ratio";
    case ConditionKind::PairUniform: return "pair-uniform";
    case ConditionKind::ProductRatio: return "product-ratio";
    case ConditionKind::PairSUniform: return "pair-s-uniform";
  }
  return "?";
}

const char* to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Doubling: return "Doubling";
    case Outcome::NotDoubling: return "NotDoubling";
    case Outcome::Unknown: return "Unknown";
  }
  return "?";
}

Rational DoublingVerdict::sup_constant() const {
  Rational sup = 1;
  for (const auto& r : records) sup = max_of(sup, r.constant);
  return sup;
}

namespace {

struct ConditionSet {
  bool vector = false;
  bool adjacent = false;
  bool pair = false;
  bool product = false;
  bool pair_s = false;
};

constexpr ConditionSet kAllConditions{true, false, true, true, true};
constexpr ConditionSet kBoundedBranching{false, true, false, true, false};
constexpr ConditionSet kBoundedGapDepth{true, false, true, false, true};

class UniformCache {
 public:
  const UniformityReport& get(const std::vector<Rational>& p, long s) {
    auto key = std::make_pair(p, s);
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(std::move(key), min_uniform_constant(p, s)).first;
    return it->second;
  }

 private:
  std::map<std::pair<std::vector<Rational>, long>, UniformityReport> cache_;
};

std::vector<Rational> concat(const ProbVector& a, const ProbVector& b) {
  std::vector<Rational> out(a.entries());
  out.insert(out.end(), b.entries().begin(), b.entries().end());
  return out;
}

struct AdjacentResult {
  Rational constant{1};
  long index = 0;
};

AdjacentResult adjacent_ratio(const ProbVector& p) {
  AdjacentResult out;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    const Rational r = symmetric_ratio(p[i], p[i + 1]);
    if (r > out.constant) {
      out.constant = r;
      out.index = static_cast<long>(i) + 1;
    }
  }
  return out;
}

// Conditions of one level k for a level-indexed sequence.
std::vector<ConditionRecord> level_records(LevelTable& table, const MatchingSequence& seq, long k,
                                           const ConditionSet& which, UniformCache& cache) {
  const CantorConfig& config = table.config();
  std::vector<ConditionRecord> out;
  const ProbVector pk = seq.at(config, k);
  if (which.vector) {
    const auto& rep = cache.get(pk.entries(), 1);
    out.push_back({k, ConditionKind::VectorUniform, rep.min_C, {}, {}, rep.argmax, {}, {}});
  }
  if (which.adjacent) {
    const auto adj = adjacent_ratio(pk);
    ConditionRecord r{k, ConditionKind::AdjacentRatio, adj.constant, {}, {}, {}, {}, {}};
    if (adj.index > 0) r.gap_index = static_cast<int>(adj.index);
    out.push_back(r);
  }
  const auto gc = gap_context(table, k);
  if (!gc) return out;

  ConditionRecord pair{k, ConditionKind::PairUniform, Rational(1), {}, {}, {}, {}, {}};
  ConditionRecord product{k, ConditionKind::ProductRatio, Rational(1), {}, {}, {}, {}, {}};
  Rational last_prod = 1, first_prod = 1;
  for (long t = 1; t < gc->m; ++t) {
    const ProbVector p = seq.at(config, k + t);
    if (which.pair) {
      const auto& rep = cache.get(p.doubled(), 1);
      if (rep.min_C > pair.constant) {
        pair.constant = rep.min_C;
        pair.t = t;
        pair.windows = rep.argmax;
      }
    }
    last_prod *= p.last();
    first_prod *= p.first();
    const Rational ratio = symmetric_ratio(last_prod, first_prod);
    if (ratio > product.constant) {
      product.constant = ratio;
      product.t = t;
    }
  }
  if (which.pair && gc->m > 1) out.push_back(pair);
  if (which.product && gc->m > 1) out.push_back(product);
  if (which.pair_s) {
    const ProbVector p = seq.at(config, k + gc->m);
    const auto& rep = cache.get(p.doubled(), gc->s);
    out.push_back({k, ConditionKind::PairSUniform, rep.min_C, {}, gc->s, rep.argmax, {}, {}});
  }
  return out;
}

std::vector<ProbVector> tail_vectors(const CantorConfig& config, const MatchingSequence& seq) {
  if (const auto* p = std::get_if<PeriodicVectorTail>(&seq.tail())) return p->vectors;
  std::vector<ProbVector> out;
  const auto per = config.n().periodicity();
  const long start = std::max(seq.tail_start(), config.n().tail_start());
  for (long k = start; k < start + per->period; ++k) out.push_back(ProbVector::uniform(config.n_at(k)));
  return out;
}

// prod over one tail period of p_last / p_first.
Rational period_ratio(const MatchingSequence& seq) {
  Rational r = 1;
  if (const auto* p = std::get_if<PeriodicVectorTail>(&seq.tail()))
    for (const auto& v : p->vectors) r *= v.last() / v.first();
  return r;
}

// Sup over all windows inside the periodic tail of the product condition,
// valid when period_ratio == 1 (partial products then repeat with the period).
Rational tail_product_bound(const MatchingSequence& seq) {
  const auto* p = std::get_if<PeriodicVectorTail>(&seq.tail());
  if (!p) return 1;
  const long q = static_cast<long>(p->vectors.size());
  Rational bound = 1;
  for (long start = 0; start < q; ++start) {
    Rational prod = 1;
    for (long t = 0; t < q; ++t) {
      const auto& v = p->vectors[static_cast<std::size_t>((start + t) % q)];
      prod *= v.last() / v.first();
      bound = max_of(bound, symmetric_ratio(prod, Rational(1)));
    }
  }
  return bound;
}

Rational tail_condition_bound(const CantorConfig& config, const MatchingSequence& seq, const ConditionSet& which,
                              UniformCache& cache) {
  Rational bound = 1;
  for (const auto& v : tail_vectors(config, seq)) {
    if (which.vector) bound = max_of(bound, cache.get(v.entries(), 1).min_C);
    if (which.adjacent) bound = max_of(bound, adjacent_ratio(v).constant);
    // (C, s)-uniformness for s >= 1 is implied by the s = 1 constant.
    if (which.pair || which.pair_s) bound = max_of(bound, cache.get(v.doubled(), 1).min_C);
  }
  if (which.product) bound = max_of(bound, tail_product_bound(seq));
  return bound;
}

std::vector<ConditionRecord> diverging_witness(const std::vector<ConditionRecord>& records) {
  std::vector<ConditionRecord> out;
  for (const auto& r : records) {
    if (r.kind != ConditionKind::ProductRatio) continue;
    if (out.empty() || r.constant > out.back().constant) out.push_back(r);
  }
  return out;
}

bool periodic_tails(const CantorConfig& config) {
  return config.n().periodicity().has_value() && config.c().periodicity().has_value();
}

DoublingVerdict run_level_checks(const CantorConfig& config, const MatchingSequence& seq, const CheckOptions& options,
                                 const ConditionSet& which) {
  seq.validate(config);
  if (options.horizon < 1) throw ValidationError("checker horizon must be >= 1");
  UniformCache cache;
  LevelTable table(config, options.horizon);
  DoublingVerdict verdict;

  long horizon = options.horizon;
  const auto window = finite_verification_horizon(config, seq);
  const bool decaying = config.c().tends_to_zero();
  if (options.symbolic && window) horizon = std::max(horizon, window->start + window->period - 1);
  if (options.symbolic && decaying)
    horizon = std::max(horizon, std::max({config.tail_start(), seq.tail_start()}));

  for (long k = 1; k <= horizon; ++k) {
    auto recs = level_records(table, seq, k, which, cache);
    verdict.records.insert(verdict.records.end(), recs.begin(), recs.end());
  }
  verdict.checked_up_to = horizon;
  const Rational sup = verdict.sup_constant();

  if (decaying && which.product && period_ratio(seq) != 1) {
    verdict.outcome = Outcome::NotDoubling;
    verdict.witness = diverging_witness(verdict.records);
    verdict.basis = "c_k -> 0 forces m_k -> infinity and the tail period has prod p_last/p_first = " +
                    to_string(period_ratio(seq)) + " != 1";
    return verdict;
  }
  if (!options.symbolic) {
    verdict.outcome = Outcome::Unknown;
    verdict.C = sup;
    verdict.basis = "finite horizon";
    return verdict;
  }
  if (window) {
    verdict.outcome = Outcome::Doubling;
    verdict.C = sup;
    verdict.basis = "periodic tails from K* = " + std::to_string(window->start) + " with period " +
                    std::to_string(window->period);
    return verdict;
  }
  if (decaying) {
    verdict.outcome = Outcome::Doubling;
    verdict.C = max_of(sup, tail_condition_bound(config, seq, which, cache));
    verdict.basis = "c_k -> 0 with bounded tail products";
    return verdict;
  }
  verdict.outcome = Outcome::Unknown;
  verdict.C = sup;
  verdict.fallback = true;
  verdict.basis = "tails not decidable; finite horizon only";
  return verdict;
}

}  // namespace

std::optional<VerificationWindow> finite_verification_horizon(const CantorConfig& config,
                                                              const MatchingSequence& matching) {
  if (!periodic_tails(config)) return std::nullopt;
  const long start = std::max({config.n().tail_start(), config.c().tail_start(), matching.tail_start()});
  const long period = std::lcm(std::lcm(config.n().periodicity()->period, config.c().periodicity()->period),
                               matching.tail_period());
  return VerificationWindow{start, period};
}

bool gap_depth_unbounded(const CantorConfig& config) { return config.c().tends_to_zero(); }

DoublingVerdict check_theorem1(const CantorConfig& config, const MatchingSequence& matching,
                               const CheckOptions& options) {
  return run_level_checks(config, matching, options, kAllConditions);
}

DoublingVerdict check_corollary(const CantorConfig& config, const MatchingSequence& matching, int which,
                                const CheckOptions& options) {
  switch (which) {
    case 1:
      if (!config.n().periodicity())
        throw InapplicableError("the bounded-branching shortcut needs sup n_k < infinity");
      return run_level_checks(config, matching, options, kBoundedBranching);
    case 2:
      if (gap_depth_unbounded(config))
        throw InapplicableError("the bounded-gap-depth shortcut needs sup m_k < infinity, but c_k -> 0 makes m_k unbounded");
      return run_level_checks(config, matching, options, kBoundedGapDepth);
    case 3: {
      const auto k0 = matching.ultimately_uniform_index();
      if (!k0) throw InapplicableError("the 1-uniform shortcut needs an ultimately 1-uniform sequence");
      CheckOptions sym = options;
      sym.symbolic = true;
      auto verdict = run_level_checks(config, matching, sym, kAllConditions);
      verdict.outcome = Outcome::Doubling;
      verdict.fallback = false;
      verdict.C = max_of(verdict.C.value_or(Rational(1)), verdict.sup_constant());
      verdict.witness.clear();
      verdict.basis = "ultimately 1-uniform from k0 = " + std::to_string(*k0);
      return verdict;
    }
    default:
      throw ValidationError("shortcut selector must be 1, 2 or 3");
  }
}

namespace {

// prod over one joint period of the asymptotic max-path / min-path ratio.
Rational rule_period_ratio(const CantorConfig& config, const WordMeasureRule& rule) {
  return std::visit(
      [&](const auto& r) -> Rational {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, LevelOnlyRule>) {
          return period_ratio(r.sequence);
        } else if constexpr (std::is_same_v<T, WordTableRule>) {
          return period_ratio(r.fallback);
        } else {
          const long n_period = config.n().periodicity()->period;
          const long L = std::lcm(r.period, n_period);
          const long start = std::max(config.n().tail_start(), 2L) + 1;
          Rational ratio = 1;
          for (long l = start; l < start + L; ++l) {
            const auto& maxv = r.table.at({l % r.period, static_cast<int>(config.n_at(l - 1))});
            const auto& minv = r.table.at({l % r.period, 1});
            ratio *= maxv.last() / minv.first();
          }
          return ratio;
        }
      },
      rule);
}

struct RecordSlot {
  ConditionRecord record;
  bool used = false;

  void offer(const ConditionRecord& candidate) {
    if (!used || candidate.constant > record.constant) {
      record = candidate;
      used = true;
    }
  }
};

}  // namespace

DoublingVerdict check_theorem2(const CantorConfig& config, const WordMeasureRule& rule, const CheckOptions& options) {
  validate_measure(MeasureSpec{rule}, config);
  if (options.horizon < 1) throw ValidationError("checker horizon must be >= 1");
  UniformCache cache;
  LevelTable table(config, options.horizon);
  DoublingVerdict verdict;

  std::vector<Word> classes{Word{}};
  long long checks = 0;
  for (long k = 1; k <= options.horizon; ++k) {
    const long nk = config.n_at(k);
    const auto gc = gap_context(table, k);
    const long per_class = 1 + (gc ? (nk - 1) * gc->m : 0);
    if (checks + per_class * static_cast<long long>(classes.size()) > options.budget)
      throw BudgetError("word-indexed enumeration exceeds budget of " + std::to_string(options.budget) +
                            " word-condition checks at level " + std::to_string(k) + "; largest feasible horizon is " +
                            std::to_string(k - 1),
                        k - 1);
    checks += per_class * static_cast<long long>(classes.size());

    RecordSlot vec, pair, product, pair_s;
    for (const Word& w : classes) {
      const ProbVector pw = vector_at(rule, config, w);
      const auto& rep = cache.get(pw.entries(), 1);
      vec.offer({k, ConditionKind::VectorUniform, rep.min_C, {}, {}, rep.argmax, w, {}});
      if (!gc) continue;
      for (int i = 1; i < nk; ++i) {
        Word left = w.child(i), right = w.child(i + 1);
        Rational left_prod = 1, right_prod = 1;
        for (long t = 1; t <= gc->m; ++t) {
          const ProbVector pl = vector_at(rule, config, left);
          const ProbVector pr = vector_at(rule, config, right);
          if (t < gc->m) {
            const auto& pu = cache.get(concat(pl, pr), 1);
            pair.offer({k, ConditionKind::PairUniform, pu.min_C, t, {}, pu.argmax, w, i});
            left_prod *= pl.last();
            right_prod *= pr.first();
            product.offer({k, ConditionKind::ProductRatio, symmetric_ratio(left_prod, right_prod), t, {}, {}, w, i});
          } else {
            const auto& ps = cache.get(concat(pl, pr), gc->s);
            pair_s.offer({k, ConditionKind::PairSUniform, ps.min_C, t, gc->s, ps.argmax, w, i});
          }
          left.letters.push_back(static_cast<int>(config.n_at(k + t)));
          right.letters.push_back(1);
        }
      }
    }
    for (auto* slot : {&vec, &pair, &product, &pair_s})
      if (slot->used) verdict.records.push_back(slot->record);

    std::map<std::vector<int>, bool> seen;
    std::vector<Word> next;
    for (const Word& w : classes) {
      for (int a = 1; a <= nk; ++a) {
        Word child = w.child(a);
        if (seen.emplace(rule_state(rule, child), true).second) next.push_back(std::move(child));
      }
    }
    classes = std::move(next);
  }
  verdict.checked_up_to = options.horizon;

  if (config.c().tends_to_zero() && rule_period_ratio(config, rule) != 1) {
    verdict.outcome = Outcome::NotDoubling;
    verdict.witness = diverging_witness(verdict.records);
    verdict.basis = "c_k -> 0 forces m_k -> infinity and the max/min boundary paths have period ratio " +
                    to_string(rule_period_ratio(config, rule)) + " != 1";
    return verdict;
  }
  verdict.outcome = Outcome::Unknown;
  verdict.C = verdict.sup_constant();
  verdict.basis = "finite horizon";
  return verdict;
}

}  // namespace ucantor
