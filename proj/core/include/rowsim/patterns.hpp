#pragma once

#include <string>
#include <vector>

#include "rowsim/dram.hpp"
#include "rowsim/request.hpp"
#include "rowsim/timing.hpp"

namespace rowsim {

/// An access pattern, either driven directly as a command log (for
/// characterization, refresh disabled) or rendered as a request trace (for
/// controller-mediated attacks).
struct PatternSpec {
  enum class Kind { SingleSided, DoubleSided, OnOff, TrrBypass };
  enum class FlushVariant { Batched, Interleaved };

  Kind kind = Kind::SingleSided;
  DramAddress aggressor;   ///< first aggressor row; double-sided adds row+2, victim row+1
  Ns t_agg_on = 36;
  long activations = 1;    ///< total ACT count for direct patterns

  // onoff: tA2A = tAggON + tAggOFF, with tAggON = on_fraction*delta + tRAS
  // and tAggOFF = (1-on_fraction)*delta + tRP.
  Ns delta_ta2a = 0;
  double on_fraction = 0.0;

  // trr_bypass
  int num_aggr_acts = 2;
  int num_reads = 1;
  int num_dummy = 16;
  FlushVariant variant = FlushVariant::Batched;
  long iterations = 1;
  int dummy_distance = 100;  ///< dummy rows start at least this far from the victim
  int dummy_stride = 8;

  Ns time_budget = 60'000'000;  ///< direct patterns must fit in this window

  Ns on_time() const { return kind == Kind::OnOff ? onoff_t_on(36) : t_agg_on; }
  Ns onoff_t_on(Ns tras) const { return static_cast<Ns>(on_fraction * delta_ta2a) + tras; }
  Ns onoff_t_off(Ns trp) const {
    return delta_ta2a - static_cast<Ns>(on_fraction * delta_ta2a) + trp;
  }

  void validate(const TimingParams& timing) const;
};

/// Direct pattern did not fit the time budget.
class InfeasiblePattern : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

struct GeneratedTrace {
  RequestTrace requests;
  std::vector<std::string> warnings;
  int victim_row = 0;
  std::vector<int> aggressor_rows;
  std::vector<int> dummy_rows;
  Ns iteration_period = 0;
};

/// Command log for single_sided / double_sided / onoff: ACT, wait tAggON,
/// PRE, wait tRP (or tAggOFF), repeated; refresh disabled. The log always
/// passes validate_command. Throws InfeasiblePattern when
/// activations x cadence exceeds the time budget.
CommandLog gen_direct(const PatternSpec& spec, const TimingParams& timing);

/// Duration of a direct pattern with the given activation count.
Ns direct_duration(const PatternSpec& spec, const TimingParams& timing, long activations);

/// Largest activation count that fits the time budget (possibly 0).
long max_activations_in_budget(const PatternSpec& spec, const TimingParams& timing);

/// Refresh-synchronized sampler-bypass trace. Each iteration occupies one
/// tREFI window: the dummy phase right after the refresh slot (so a
/// capacity-limited sampler fills up on dummies), then the aggressor rounds
/// (num_reads column-distinct reads per aggressor per round) ending at the
/// window boundary. Dummy order rotates per iteration so no fixed row idles
/// open across the inter-phase gap. The interleaved_flush variant doubles the
/// read spacing, holding aggressor rows open longer.
GeneratedTrace gen_trr_bypass(const PatternSpec& spec, const AddressMap& map,
                              const TimingParams& timing, const Geometry& geometry,
                              Ns col_cycle = 15);

/// Controller-mediated onoff cadence: one aggressor burst per tA2A slot, a
/// rotating far-row read closing the aggressor between bursts.
GeneratedTrace gen_onoff_trace(const PatternSpec& spec, const AddressMap& map,
                               const TimingParams& timing, const Geometry& geometry,
                               long iterations, Ns col_cycle = 15);

}  // namespace rowsim
