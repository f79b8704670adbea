#include "ucantor/sequence.hpp"

#include <algorithm>

#include "ucantor/error.hpp"

namespace ucantor {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
}  // namespace

SequenceSpec::SequenceSpec(std::vector<Rational> prefix, TailRule tail)
    : prefix_(std::move(prefix)), tail_(std::move(tail)) {
  std::visit(overloaded{
                 [](const ConstantTail&) {},
                 [](const PeriodicTail& p) {
                   if (p.values.empty()) throw ValidationError("periodic tail needs period >= 1");
                 },
                 [](const GeometricTail& g) {
                   if (g.ratio <= 0 || g.ratio >= 1)
                     throw ValidationError("geometric tail ratio must lie in (0,1), got " + to_string(g.ratio));
                 },
                 [](const PowerTail& p) {
                   if (p.exponent == 0) throw ValidationError("power tail exponent must be > 0");
                 },
             },
             tail_);
}

Rational SequenceSpec::at(long k) const {
  if (k < 1) throw ValidationError("sequence index must be >= 1, got " + std::to_string(k));
  if (k <= static_cast<long>(prefix_.size())) return prefix_[static_cast<std::size_t>(k - 1)];
  return std::visit(overloaded{
                        [](const ConstantTail& c) { return c.value; },
                        [k](const PeriodicTail& p) {
                          return p.values[static_cast<std::size_t>((k - 1) % static_cast<long>(p.values.size()))];
                        },
                        [k](const GeometricTail& g) {
                          return Rational(g.coefficient * pow(g.ratio, static_cast<unsigned long>(k)));
                        },
                        [k](const PowerTail& p) {
                          Rational d = pow(Rational(k), p.exponent);
                          return Rational(p.coefficient / d);
                        },
                    },
                    tail_);
}

std::optional<Periodicity> SequenceSpec::periodicity() const {
  if (std::holds_alternative<ConstantTail>(tail_)) return Periodicity{tail_start(), 1};
  if (const auto* p = std::get_if<PeriodicTail>(&tail_))
    return Periodicity{tail_start(), static_cast<long>(p->values.size())};
  return std::nullopt;
}

std::optional<Rational> SequenceSpec::eventual_constant() const {
  if (const auto* c = std::get_if<ConstantTail>(&tail_)) return c->value;
  if (const auto* p = std::get_if<PeriodicTail>(&tail_)) {
    const bool all_equal =
        std::all_of(p->values.begin(), p->values.end(), [&](const Rational& v) { return v == p->values.front(); });
    if (all_equal) return p->values.front();
  }
  return std::nullopt;
}

bool SequenceSpec::tends_to_zero() const {
  return std::holds_alternative<GeometricTail>(tail_) || std::holds_alternative<PowerTail>(tail_);
}

Rational SequenceSpec::tail_max() const {
  return std::visit(overloaded{
                        [](const ConstantTail& c) { return c.value; },
                        [](const PeriodicTail& p) { return *std::max_element(p.values.begin(), p.values.end()); },
                        [this](const GeometricTail& g) {
                          return g.coefficient > 0 ? at(tail_start()) : Rational(0);
                        },
                        [this](const PowerTail& p) { return p.coefficient > 0 ? at(tail_start()) : Rational(0); },
                    },
                    tail_);
}

Rational SequenceSpec::max() const {
  Rational m = tail_max();
  for (const auto& v : prefix_) m = max_of(m, v);
  return m;
}

}  // namespace ucantor
