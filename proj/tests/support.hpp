#pragma once

#include <algorithm>
#include <filesystem>
#include <random>
#include <vector>

#include "ucantor/config_io.hpp"

namespace ucantor::testing {

inline Rational q(long p, long d = 1) {
  Rational r(p, d);
  r.canonicalize();
  return r;
}

inline ProbVector vec(std::initializer_list<Rational> v) { return ProbVector(std::vector<Rational>(v)); }

inline ProbVector skew() { return vec({q(1, 3), q(2, 3)}); }

/// Period-1 last-letter rule: P_w = table[last letter of w], root for w empty.
inline LastLetterRule last_letter(ProbVector root, std::initializer_list<std::pair<int, ProbVector>> table) {
  LastLetterRule r{1, std::move(root), {}};
  for (const auto& [a, p] : table) r.table.emplace(std::make_pair(0L, a), p);
  return r;
}

/// n_k = 2, c_k = 4^-k.
inline CantorConfig quarter_power() {
  return CantorConfig(SequenceSpec::constant(2), SequenceSpec({}, GeometricTail{1, q(1, 4)}));
}

/// n_k = 2, c_k = 1/(2k), so n_k c_k = 1/k.
inline CantorConfig harmonic() {
  return CantorConfig(SequenceSpec::constant(2), SequenceSpec({}, PowerTail{q(1, 2), 1}));
}

inline CantorConfig tenth() { return CantorConfig::constant(2, q(1, 10)); }

inline std::vector<std::filesystem::path> corpus_files() {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(UCANTOR_CORPUS_DIR))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  return files;
}

inline std::vector<RunConfig> corpus() {
  std::vector<RunConfig> out;
  for (const auto& f : corpus_files()) out.push_back(load_run_config(f));
  return out;
}

/// All words of length k.
inline std::vector<Word> words_of_length(const CantorConfig& config, long k) {
  std::vector<Word> out{Word{}};
  for (long j = 1; j <= k; ++j) {
    std::vector<Word> next;
    for (const auto& w : out)
      for (int a = 1; a <= config.n_at(j); ++a) next.push_back(w.child(a));
    out = std::move(next);
  }
  return out;
}

}  // namespace ucantor::testing

namespace ucantor::testing {

/// delta_{k+m} <= epsilon_k < delta_{k+m-1}.
inline bool depth_sandwich(LevelTable& t, long k, long m) {
  if (m < 1) return false;
  return t.delta(k + m) <= t.epsilon(k) && t.epsilon(k) < t.delta(k + m - 1);
}

/// s delta' + (s-1) eps' <= epsilon_k < (s+1) delta' + s eps' at level k + m.
inline bool count_sandwich(LevelTable& t, long k, long m, long s) {
  if (s < 1) return false;
  const Rational& d = t.delta(k + m);
  const Rational& e = t.epsilon(k + m);
  return s * d + (s - 1) * e <= t.epsilon(k) && t.epsilon(k) < (s + 1) * d + s * e;
}

/// (m, s) satisfy both sandwiches and m +- 1, s +- 1 do not.
inline bool gap_context_unique(LevelTable& t, const GapContext& g) {
  return depth_sandwich(t, g.k, g.m) && !depth_sandwich(t, g.k, g.m - 1) && !depth_sandwich(t, g.k, g.m + 1) &&
         count_sandwich(t, g.k, g.m, g.s) && !count_sandwich(t, g.k, g.m, g.s - 1) &&
         !count_sandwich(t, g.k, g.m, g.s + 1);
}

}  // namespace ucantor::testing
