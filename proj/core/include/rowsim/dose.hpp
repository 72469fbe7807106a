#pragma once

#include <cstdint>
#include <vector>

#include "rowsim/geometry.hpp"

namespace rowsim {

/// Maps aggressor on-time to per-activation disturbance dose for one
/// mechanism. Piecewise linear in (log on_time, log dose): constant below the
/// first anchor, tail_slope beyond the last. Temperature enters as a
/// multiplicative factor interpolated (log-linearly) between the listed
/// temperature points and clamped outside them.
struct DoseCurve {
  struct Anchor {
    Ns on_time = 0;
    double dose = 0.0;
  };
  struct TempPoint {
    double celsius = 0.0;
    double factor = 1.0;
  };

  std::vector<Anchor> anchors;          // >= 2 unless tail_slope covers it; sorted
  double tail_slope = 0.0;              // log-log slope above the last anchor
  std::vector<TempPoint> temperature_scale;  // sorted by celsius; empty = always 1.0

  double temperature_factor(double celsius) const;
  /// Dose at (on_time, temperature). on_time must be positive.
  double evaluate(Ns on_time, double celsius) const;

  /// Throws ConfigError when anchors are unsorted/nonpositive or fewer than 1.
  void validate(const char* name) const;
};

enum class Pattern { SingleSided, DoubleSided };

/// The two-mechanism read-disturbance model: independent hammer and press
/// dose curves with separate failure thresholds, plus coupling factors for
/// victims at physical distance 1..3.
struct MechanismModel {
  DoseCurve hammer;
  DoseCurve press;
  double theta_hammer = 1000.0;  ///< dose at which the weakest hammer cell of a row flips
  double theta_press = 1000.0 / 21.0;
  double distance_coupling[3] = {1.0, 0.05, 0.01};
  Ns min_on_time = 36;  ///< = tRAS; dose is undefined for shorter on-times

  void validate() const;

  /// Per-activation dose on a distance-1 victim, per mechanism.
  double hammer_dose(Ns on_time, double celsius) const { return hammer.evaluate(on_time, celsius); }
  double press_dose(Ns on_time, double celsius) const { return press.evaluate(on_time, celsius); }

  /// Activations (not rounded) required for the first bitflip on the worst
  /// distance-1 victim at the given on-time.
  double activations_to_flip(Ns on_time, double celsius) const;
};

/// ceil(min(theta_H / h(t), theta_P / p(t))) with temperature folded into the
/// curves. The analytic oracle the characterization searches are checked
/// against. Under dose additivity the double-sided pattern needs the same
/// total activation count as single-sided (each activation of either
/// aggressor doses the shared victim at distance 1), so the pattern parameter
/// does not change the count; it is kept for call-site symmetry.
std::int64_t acmin_closed_form(const MechanismModel& model, Ns on_time, double celsius,
                               Pattern pattern = Pattern::SingleSided);

/// Default desk-scale model: hammer flat at 1.0 with theta 1000 (so AC at
/// tRAS is exactly 1000); press anchored at 36/186/7800/70200 ns with +1
/// tail, theta 1000/21, press running 1/0.55 hotter at 80C.
MechanismModel default_model();

/// Same curve shapes with both thresholds scaled by `factor`. Used for
/// chip-scale configurations where the desk normalization (theta=1000) would
/// saturate integer activation counts.
MechanismModel scaled_model(double factor);

/// Source-characterization curve behind the row-open-cap adaptation table:
/// press anchors placed so the activation count at 36/66/96/186/336/636 ns is
/// exactly 1000/809/724/619/555/419. Already worst-case temperature; no
/// further temperature scaling.
MechanismModel table2_source_model();

}  // namespace rowsim
