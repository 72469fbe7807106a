#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <unordered_map>
#include <vector>

#include "rowsim/dose.hpp"
#include "rowsim/geometry.hpp"
#include "rowsim/timing.hpp"

namespace rowsim {

/// Misra-Gries style per-bank activation tracker. Entries estimate
/// activation counts; a shared spillover counter absorbs evicted counts, so
/// for any resident row true <= estimated <= true + spillover, and any row
/// whose true count reaches the threshold T has fired targets no later than
/// its Tth activation (given k >= ceil(window_max_acts / T)).
class GrapheneTracker {
 public:
  GrapheneTracker() = default;
  GrapheneTracker(long threshold, int table_entries, int blast_radius, Ns reset_period);

  /// Sized per the published recipe: k = ceil((tREFW / tRC) / T).
  static GrapheneTracker with_default_sizing(long threshold, int blast_radius,
                                             const TimingParams& timing);

  /// Observe one ACT of `row` at `time`. Returns the preventive-refresh
  /// targets (neighbors within the blast radius) when the row's estimated
  /// count crosses a multiple of T; empty otherwise.
  std::vector<int> observe(int row, Ns time);

  long estimated_count(int row) const;
  bool resident(int row) const { return index_.count(row) > 0; }
  long spillover() const { return spillover_; }
  long threshold() const { return threshold_; }
  int entries() const { return static_cast<int>(index_.size()); }
  int capacity() const { return capacity_; }

 private:
  /// Clears the table each reset period. Rows part-way to the threshold are
  /// swept (targets emitted) first, so an aggressor cannot bank almost-T
  /// activations on each side of the reset boundary.
  std::vector<int> reset_window(Ns time);
  std::vector<int> targets_for(int row) const;

  long threshold_ = 1000;
  int capacity_ = 1024;
  int blast_radius_ = 2;
  Ns reset_period_ = 63897600;
  Ns window_start_ = 0;

  struct Entry {
    int row = 0;
    long count = 0;
  };
  std::vector<Entry> entries_;
  std::unordered_map<int, int> index_;  // row -> slot in entries_
  std::unordered_map<long, std::vector<int>> buckets_;  // count -> slots (lazy)
  long spillover_ = 0;
};

/// Stateless probabilistic defense: each ACT independently refreshes one
/// uniformly chosen +-1 neighbor with probability p.
class ParaTracker {
 public:
  ParaTracker() = default;
  ParaTracker(double probability, std::uint64_t seed);

  std::vector<int> observe(int row);
  double probability() const { return p_; }

 private:
  double p_ = 0.0;
  std::mt19937_64 rng_{0};
};

/// In-DRAM sampler: tracks the first K distinct activated rows between
/// refreshes; on REF it refreshes the +-1 neighbors of the tracked rows and
/// clears. This is the capacity-limited behavior that dummy-row access
/// patterns defeat.
class TrrSampler {
 public:
  explicit TrrSampler(int capacity = 4) : capacity_(capacity) {}

  void observe(int row);
  std::vector<int> on_ref();

  const std::vector<int>& tracked() const { return tracked_; }
  int capacity() const { return capacity_; }

 private:
  int capacity_ = 4;
  std::vector<int> tracked_;
};

/// Row-open-cap adaptation of a hammer-threshold defense: the cap t_mro
/// bounds the per-activation dose, and the defense threshold is derated by
/// the worst-case activation-count reduction Y at that cap.
struct RpAdaptation {
  Ns t_mro = 36;
  double reduction = 0.0;         ///< Y
  long adapted_threshold = 1000;  ///< T'RH = round((1-Y) * T_RH)
};

/// Y = 1 - acmin(t_mro) / acmin(tRAS) on the source characterization curve at
/// the worst-case temperature (the most effective pattern; under dose
/// additivity single- and double-sided coincide). t_mro < tRAS is a contract
/// violation.
RpAdaptation derive_rp_config(const MechanismModel& source_curve, Ns t_mro, long t_rh,
                              double worst_case_temperature, Ns tras = 36);

/// floor(T'RH / 3): the tracker threshold derivation behind the published
/// per-cap table. Exposed as a helper, not asserted as the original recipe.
long graphene_threshold_for(long adapted_threshold);

/// Published per-cap configuration table (t_mro, T'RH, tracker T, para p).
struct Table2Row {
  Ns t_mro;
  long adapted_threshold;
  long graphene_t;
  double para_p;
};
const std::vector<Table2Row>& table2_rows();
std::optional<Table2Row> table2_row_for(Ns t_mro);

enum class MitigationKind { None, Trr, Graphene, Para, GrapheneRp, ParaRp };
const char* to_string(MitigationKind k);

struct MitigationConfig {
  MitigationKind kind = MitigationKind::None;
  Ns t_mro_ns = 36;        // *_rp kinds: row-open cap fed to the row policy
  long graphene_T = 333;
  double para_p = 0.034;
  int trr_capacity = 4;
  int blast_radius = 2;

  bool is_rp() const { return kind == MitigationKind::GrapheneRp || kind == MitigationKind::ParaRp; }
  void validate(const TimingParams& timing) const;
};

}  // namespace rowsim
