#include <doctest.h>

#include "support.hpp"
#include "ucantor/error.hpp"
#include "ucantor/uniformity.hpp"

using namespace ucantor;
using namespace ucantor::testing;

namespace {

// Direct transcription of the definition: every pair of equal-length
// windows that overlap or abut, sums recomputed from scratch.
Rational naive_constant(const std::vector<Rational>& p, long s) {
  const long k = static_cast<long>(p.size());
  Rational best = 1;
  for (long l = s; l <= k; ++l)
    for (long i = 0; i + l <= k; ++i)
      for (long j = i; j <= i + l && j + l <= k; ++j) {
        Rational a = 0, b = 0;
        for (long u = 0; u < l; ++u) {
          a += p[i + u];
          b += p[j + u];
        }
        best = max_of(best, max_of(a / b, b / a));
      }
  return best;
}

std::vector<Rational> random_vector(std::mt19937& rng, long len) {
  std::vector<long> raw(static_cast<std::size_t>(len));
  long total = 0;
  for (auto& v : raw) total += (v = static_cast<long>(rng() % 9 + 1));
  std::vector<Rational> out;
  for (long v : raw) out.emplace_back(v, total);
  for (auto& r : out) r.canonicalize();
  return out;
}

}  // namespace

TEST_CASE("hand examples") {
  const std::vector<Rational> half{q(1, 2), q(1, 2)};
  CHECK(min_uniform_constant(half, 1).min_C == 1);
  CHECK_FALSE(min_uniform_constant(half, 1).argmax.has_value());

  const std::vector<Rational> p{q(1, 3), q(2, 3)};
  const auto r = min_uniform_constant(p, 1);
  CHECK(r.min_C == 2);
  REQUIRE(r.argmax.has_value());
  CHECK(*r.argmax == WindowTriple{0, 1, 1});

  const std::vector<Rational> pp{q(1, 3), q(2, 3), q(1, 3), q(2, 3)};
  const auto r2 = min_uniform_constant(pp, 2);
  CHECK(r2.min_C == q(5, 4));
  CHECK(r2.argmax->l == 3);
}

TEST_CASE("window floor beyond the length imposes nothing") {
  const std::vector<Rational> p{q(1, 3), q(2, 3)};
  const auto r = min_uniform_constant(p, 3);
  CHECK(r.min_C == 1);
  CHECK_FALSE(r.argmax.has_value());
  CHECK_THROWS_AS(min_uniform_constant(p, 0), ValidationError);
  const std::vector<Rational> bad{q(0), q(1)};
  CHECK_THROWS_AS(min_uniform_constant(bad, 1), ValidationError);
}

TEST_CASE("matches the naive definition on random vectors") {
  std::mt19937 rng(20240601);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = random_vector(rng, static_cast<long>(rng() % 8 + 1));
    for (long s = 1; s <= 3; ++s) {
      const auto r = min_uniform_constant(p, s);
      CHECK(r.min_C == naive_constant(p, s));
      if (r.argmax) {
        // The reported windows attain the constant.
        Rational a = 0, b = 0;
        for (long u = 0; u < r.argmax->l; ++u) {
          a += p[r.argmax->i + u];
          b += p[r.argmax->j + u];
        }
        CHECK(max_of(a / b, b / a) == r.min_C);
        CHECK(r.argmax->l >= s);
      }
    }
  }
}

TEST_CASE("monotone in s and under self-concatenation") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const auto p = random_vector(rng, static_cast<long>(rng() % 6 + 2));
    Rational previous = min_uniform_constant(p, 1).min_C;
    for (long s = 2; s <= 4; ++s) {
      const Rational c = min_uniform_constant(p, s).min_C;
      CHECK(c <= previous);
      previous = c;
    }
    std::vector<Rational> doubled(p);
    doubled.insert(doubled.end(), p.begin(), p.end());
    CHECK(min_uniform_constant(doubled, 1).min_C >= min_uniform_constant(p, 1).min_C);
  }
}
