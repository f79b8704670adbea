#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "ucantor/rational.hpp"

namespace ucantor {

// Closed-form tails. Every rule is evaluated at the absolute index k, so a
// geometric tail with ratio 1/4 yields coefficient * 4^-k regardless of how
// long the explicit prefix is.
struct ConstantTail {
  Rational value;
  bool operator==(const ConstantTail&) const = default;
};
struct PeriodicTail {
  std::vector<Rational> values;  // value at k is values[(k - 1) % period]
  bool operator==(const PeriodicTail&) const = default;
};
struct GeometricTail {
  Rational coefficient;
  Rational ratio;  // in (0, 1)
  bool operator==(const GeometricTail&) const = default;
};
struct PowerTail {
  Rational coefficient;
  unsigned exponent = 1;  // value is coefficient * k^-exponent
  bool operator==(const PowerTail&) const = default;
};

using TailRule = std::variant<ConstantTail, PeriodicTail, GeometricTail, PowerTail>;

/// Start index and period from which a sequence repeats.
struct Periodicity {
  long start;
  long period;
};

/// A sequence indexed from k = 1: explicit prefix values, then a tail rule.
class SequenceSpec {
 public:
  SequenceSpec(std::vector<Rational> prefix, TailRule tail);

  static SequenceSpec constant(const Rational& value) { return {{}, ConstantTail{value}}; }

  Rational at(long k) const;

  const std::vector<Rational>& prefix() const { return prefix_; }
  const TailRule& tail() const { return tail_; }
  long tail_start() const { return static_cast<long>(prefix_.size()) + 1; }

  /// Set for constant and periodic tails.
  std::optional<Periodicity> periodicity() const;
  /// Value of an eventually constant sequence (constant tail, or periodic
  /// tail whose entries all agree).
  std::optional<Rational> eventual_constant() const;
  /// Geometric and power tails converge to zero.
  bool tends_to_zero() const;
  /// Largest value taken for k >= tail_start(). Geometric and power tails with
  /// positive coefficient are decreasing, so their maximum sits at the start.
  Rational tail_max() const;
  /// Largest value over all k >= 1.
  Rational max() const;

  bool operator==(const SequenceSpec&) const = default;

 private:
  std::vector<Rational> prefix_;
  TailRule tail_;
};

}  // namespace ucantor
