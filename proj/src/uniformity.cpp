#include "ucantor/uniformity.hpp"

#include "ucantor/error.hpp"

namespace ucantor {

UniformityReport min_uniform_constant(std::span<const Rational> p, long s) {
  if (s < 1) throw ValidationError("window floor s must be >= 1");
  for (const auto& v : p)
    if (v <= 0) throw ValidationError("uniformity needs strictly positive entries");
  const long k = static_cast<long>(p.size());
  UniformityReport report;
  if (s > k) return report;

  std::vector<Rational> prefix(static_cast<std::size_t>(k) + 1);
  for (long i = 0; i < k; ++i) prefix[i + 1] = prefix[i] + p[i];
  auto window = [&](long start, long len) { return Rational(prefix[start + len] - prefix[start]); };

  for (long l = s; l <= k; ++l) {
    for (long i = 0; i + l <= k; ++i) {
      const Rational a = window(i, l);
      // j ranges over windows starting no later than the end of window i.
      for (long j = i + 1; j <= i + l && j + l <= k; ++j) {
        const Rational ratio = symmetric_ratio(a, window(j, l));
        if (ratio > report.min_C) {
          report.min_C = ratio;
          report.argmax = WindowTriple{i, j, l};
        }
      }
    }
  }
  return report;
}

}  // namespace ucantor
