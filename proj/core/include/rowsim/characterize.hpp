#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "rowsim/cells.hpp"
#include "rowsim/controller.hpp"
#include "rowsim/patterns.hpp"

namespace rowsim {

struct SearchConfig {
  double accuracy = 0.01;        ///< relative termination gap, rounded up to >= 1 step
  Ns time_budget = 60'000'000;   ///< a probe may not run longer than this
  int repeats = 5;               ///< searches repeat; the minimum is reported
  double temperature_c = 50.0;
  Ns taggon_grid_step = 30;      ///< on-time search granularity
  Ns taggon_max = 30'000'000;

  void validate() const;
};

/// NoBitflip is data, not an error: the budget-maximal probe failed.
struct SearchOutcome {
  bool found = false;
  long value = 0;  // activation count, or on-time in ns
  static SearchOutcome no_bitflip() { return {}; }
  static SearchOutcome at(long v) { return {true, v}; }
  bool operator==(const SearchOutcome&) const = default;
};

/// Generic exponential-ramp + bisection over a monotone predicate on
/// [1, limit]. Returns the smallest probed value where the predicate held,
/// with |answer - true threshold| <= max(1, ceil(accuracy * answer)).
/// Outcome is NoBitflip when predicate(limit) is false.
SearchOutcome bisect_threshold(const std::function<bool(long)>& predicate, long limit,
                               double accuracy);

/// One experiment harness instance: drives generated command logs against a
/// fresh device + ledger per probe and asks the cell model for bitflips.
/// Independent instances are safe to run concurrently.
class Characterizer {
 public:
  Characterizer(const Geometry& geometry, const TimingParams& timing, const MechanismModel& model,
                const CellParams& cells, std::uint64_t seed, RowRemap remap = {});

  /// Minimum activation count inducing at least one bitflip at this on-time,
  /// or NoBitflip if the budget-maximal count fails.
  SearchOutcome find_acmin(int row, Ns t_agg_on, PatternSpec::Kind pattern,
                           const SearchConfig& cfg) const;

  /// Minimum on-time (on the 30 ns grid) inducing at least one bitflip at
  /// this activation count.
  SearchOutcome find_taggon_min(int row, long activations, PatternSpec::Kind pattern,
                                const SearchConfig& cfg) const;

  /// Highest BER over `repeats` runs of the pattern at the budget-maximal
  /// activation count. BER = flipped cells / cells per victim row, maximum
  /// over the victim rows.
  double measure_ber(const PatternSpec& spec, const SearchConfig& cfg) const;

  /// Bitflips of one probe (used by oracle tests and the overlap analysis).
  std::vector<Bitflip> probe(const PatternSpec& spec, const SearchConfig& cfg) const;

  /// Retention-only flip set: refresh disabled for `horizon` (exceeds the
  /// refresh-window convention by design; documented mode).
  std::vector<Bitflip> retention_probe(int row, Ns horizon) const;

  const CellProfile& profile() const { return profile_; }
  const MechanismModel& model() const { return model_; }
  const TimingParams& timing() const { return timing_; }

  /// The 3072-row default selection: first, middle, and last 1024 rows of
  /// the bank (clipped for small geometries).
  static std::vector<int> default_row_sample(const Geometry& geometry);

 private:
  bool flips_at(const PatternSpec& spec, const SearchConfig& cfg) const;

  Geometry geometry_;
  TimingParams timing_;
  MechanismModel model_;
  CellProfile profile_;
  RowRemap remap_;
};

/// |A ∩ B| / |A| on (row, column) cell sets. A must be nonempty.
double overlap(const std::vector<Bitflip>& a, const std::vector<Bitflip>& b);

struct EccHistogram {
  long words_1_2 = 0;
  long words_3_8 = 0;
  long words_gt8 = 0;
  int max_flips_in_word = 0;
};

/// Partitions flipped cells into consecutive words of `word_bits` columns
/// and bins the per-word flip counts.
EccHistogram ecc_word_histogram(const std::vector<Bitflip>& flips, int word_bits = 64);

}  // namespace rowsim
