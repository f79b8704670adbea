#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ucantor/measure.hpp"
#include "ucantor/oracle.hpp"

namespace ucantor {

/// Whether sum_k (n_k c_k)^q < infinity.
struct LpVerdict {
  Rational q{1};
  bool member = false;
  std::string reason;
};

/// Decided from the tail rule of c alone (n is eventually periodic, hence
/// bounded): constant/periodic tails never, geometric always, a * k^-e iff
/// q * e > 1.
LpVerdict lp_membership(const CantorConfig& config, const Rational& q);

struct Piece {
  Interval interval;
  Bracket density;
  /// Components carry their word; gaps do not.
  std::optional<Word> word;
};

/// Finitely many constant-density pieces tiling [0, 1].
struct PiecewiseMeasure {
  long k0 = 1;
  std::vector<Piece> pieces;
  /// Lebesgue measure of E inside one level-(k0 - 1) component.
  Bracket component_set_length;

  /// nu(I) for a closed interval, clipped to [0, 1].
  Bracket mass(const Interval& I) const;
  /// sum over component pieces of density * L(E cap piece); brackets 1.
  Bracket restricted_total() const;
  Rational max_density_upper() const;
  Rational min_density_lower() const;
};

/// Density mu(I)/L(E cap I) on every level-(k0 - 1) component, density 1 on
/// the gaps of levels < k0, k0 = ultimately_one_uniform_index. Throws
/// InapplicableError when mu is not ultimately 1-uniform or when
/// {n_k c_k} is not summable (no doubling extension exists then).
PiecewiseMeasure build_extension(const CantorConfig& config, const MeasureSpec& measure,
                                 const Rational& tolerance);

/// Bracket for nu(E cap I_w), the extension restricted to the Cantor set.
Bracket restricted_mass(const PiecewiseMeasure& nu, const CantorConfig& config, const Word& w,
                        const Rational& tolerance);

struct RestrictionCheck {
  long depth = 0;
  long components = 0;
  bool passed = true;
  std::optional<Word> failure;
};

/// Checks mu(I_w) in restricted_mass(w) for every |w| <= depth.
RestrictionCheck check_restriction(const PiecewiseMeasure& nu, const CantorConfig& config,
                                   const MeasureSpec& measure, long depth, const Rational& tolerance);

/// Ball ratios of nu over [0, 1]: centers on the grid j / 2^g plus piece
/// endpoints, radii 2^-i (i <= g) and the distances to piece endpoints
/// (also doubled and halved). One series point per g in the schedule.
std::vector<SeriesPoint> nu_sup_series(const PiecewiseMeasure& nu, const std::vector<long>& schedule);

enum class ExtensionOutcome { Extendable, NotExtendable };
const char* to_string(ExtensionOutcome outcome);

struct ExtensionVerdict {
  ExtensionOutcome outcome = ExtensionOutcome::NotExtendable;
  LpVerdict lp;
  std::optional<PiecewiseMeasure> nu;
  RestrictionCheck restriction;
  std::vector<SeriesPoint> nu_series;
  std::optional<Growth> nu_growth;  // needs a schedule of length >= 3
  Rational nu_bound{0};             // 2 * max density / min density
  bool nu_within_bound = true;
  Bracket mass;                     // restricted_total()
};

/// Extendable iff {n_k c_k} is summable; when it is, the verdict carries nu
/// together with the restriction check and ball-ratio evidence.
ExtensionVerdict check_theorem3(const CantorConfig& config, const MeasureSpec& measure,
                                const std::vector<long>& schedule, const Rational& tolerance = Rational(1, 1000000));

}  // namespace ucantor
