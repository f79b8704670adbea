#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ucantor/rational.hpp"

namespace ucantor {

/// Windows (i, j, l): the sums p_{i+1..i+l} and p_{j+1..j+l} with
/// 0 <= i <= j <= i + l and j + l <= size.
struct WindowTriple {
  long i = 0;
  long j = 0;
  long l = 0;
  bool operator==(const WindowTriple&) const = default;
};

struct UniformityReport {
  Rational min_C{1};
  std::optional<WindowTriple> argmax;  // absent when min_C = 1 or no window qualifies
};

/// Smallest C such that every pair of overlapping-or-adjacent equal-length
/// windows of length l >= s has sums within a factor C of each other.
/// s = 1 gives plain C-uniformness. s > size imposes no constraint.
UniformityReport min_uniform_constant(std::span<const Rational> p, long s = 1);

}  // namespace ucantor
