#include "rowsim/patterns.hpp"

#include <algorithm>
#include <cmath>

namespace rowsim {

void PatternSpec::validate(const TimingParams& timing) const {
  if (kind == Kind::OnOff) {
    if (delta_ta2a < 0 || delta_ta2a % 4 != 0)
      throw ConfigError("pattern.delta_ta2a_ns: must be a nonnegative multiple of 4");
    const double grid[] = {0.0, 0.25, 0.5, 0.75, 1.0};
    bool ok = false;
    for (double g : grid) ok = ok || std::abs(on_fraction - g) < 1e-9;
    if (!ok) throw ConfigError("pattern.on_fraction: must be one of {0, 0.25, 0.5, 0.75, 1}");
  } else if (t_agg_on < timing.tRAS) {
    throw ConfigError("pattern.t_agg_on_ns: must be >= tRAS");
  }
  if (kind == Kind::TrrBypass) {
    if (num_aggr_acts < 1) throw ConfigError("pattern.num_aggr_acts: must be >= 1");
    if (num_reads < 1) throw ConfigError("pattern.num_reads: must be >= 1");
    if (num_dummy < 0) throw ConfigError("pattern.num_dummy: must be >= 0");
    if (dummy_distance < 100)
      throw ConfigError("pattern.dummy_distance: dummy rows must be >= 100 rows from the victim");
    if (iterations < 1) throw ConfigError("pattern.iterations: must be >= 1");
  }
  if (activations < 0) throw ConfigError("pattern.activations: must be >= 0");
}

namespace {

Ns direct_cadence(const PatternSpec& spec, const TimingParams& timing) {
  if (spec.kind == PatternSpec::Kind::OnOff)
    return spec.onoff_t_on(timing.tRAS) + spec.onoff_t_off(timing.tRP);
  return spec.t_agg_on + timing.tRP;
}

}  // namespace

Ns direct_duration(const PatternSpec& spec, const TimingParams& timing, long activations) {
  if (activations <= 0) return 0;
  // The trailing tRP (or tAggOFF) after the last PRE is idle time; still
  // counted, matching "execution time" of the whole loop.
  return direct_cadence(spec, timing) * activations;
}

long max_activations_in_budget(const PatternSpec& spec, const TimingParams& timing) {
  const Ns cadence = direct_cadence(spec, timing);
  return static_cast<long>(spec.time_budget / cadence);
}

CommandLog gen_direct(const PatternSpec& spec, const TimingParams& timing) {
  spec.validate(timing);
  if (spec.kind == PatternSpec::Kind::TrrBypass)
    throw ConfigError("gen_direct: trr_bypass is a trace pattern, not a command log");

  const Ns duration = direct_duration(spec, timing, spec.activations);
  if (duration > spec.time_budget)
    throw InfeasiblePattern("direct pattern needs " + std::to_string(duration) +
                            " ns, over the " + std::to_string(spec.time_budget) + " ns budget");

  const Ns t_on =
      spec.kind == PatternSpec::Kind::OnOff ? spec.onoff_t_on(timing.tRAS) : spec.t_agg_on;
  const Ns cadence = direct_cadence(spec, timing);

  CommandLog log;
  log.reserve(static_cast<size_t>(spec.activations) * 2);
  Ns t = 0;
  for (long i = 0; i < spec.activations; ++i) {
    DramAddress addr = spec.aggressor;
    if (spec.kind == PatternSpec::Kind::DoubleSided && (i % 2) == 1) addr.row += 2;
    log.push_back({CommandKind::ACT, addr, t});
    log.push_back({CommandKind::PRE, addr, t + t_on});
    t += cadence;
  }
  return log;
}

GeneratedTrace gen_trr_bypass(const PatternSpec& spec, const AddressMap& map,
                              const TimingParams& timing, const Geometry& geometry,
                              Ns col_cycle) {
  spec.validate(timing);
  if (spec.kind != PatternSpec::Kind::TrrBypass)
    throw ConfigError("gen_trr_bypass: pattern kind must be trr_bypass");
  const int blocks = geometry.columns / 64;
  if (spec.num_reads > blocks)
    throw ConfigError("pattern.num_reads: exceeds blocks per row (" + std::to_string(blocks) +
                      ")");

  GeneratedTrace out;
  out.victim_row = spec.aggressor.row + 1;
  out.aggressor_rows = {spec.aggressor.row, spec.aggressor.row + 2};
  for (int d = 0; d < spec.num_dummy; ++d)
    out.dummy_rows.push_back(out.victim_row + spec.dummy_distance + d * spec.dummy_stride);
  if (!out.dummy_rows.empty() && out.dummy_rows.back() >= geometry.rows)
    throw ConfigError("pattern: dummy rows fall outside the bank (move the victim row down)");
  out.iteration_period = timing.tREFI;

  const Ns read_gap = spec.variant == PatternSpec::FlushVariant::Interleaved ? 2 * col_cycle
                                                                             : col_cycle;
  // Arrival-time cost of one burst of `n` reads to one row: activation,
  // paced reads, precharge before the next row in the bank.
  auto burst_cost = [&](int n) { return timing.tRCD + static_cast<Ns>(n) * read_gap + timing.tRP; };

  const Ns dummy_phase = static_cast<Ns>(spec.num_dummy) * 4 * timing.tRC;
  const Ns aggr_phase = static_cast<Ns>(spec.num_aggr_acts) * 2 * burst_cost(spec.num_reads);
  const Ns guard = 30;
  const Ns usable = timing.tREFI - timing.tRFC - timing.tRP - guard;
  if (dummy_phase + aggr_phase > usable)
    out.warnings.push_back("iteration content (" + std::to_string(dummy_phase + aggr_phase) +
                           " ns) exceeds the refresh interval; refresh synchronization will drift");

  auto push_read = [&](Ns at, int row, int block) {
    DramAddress a = spec.aggressor;
    a.row = row;
    a.column = block * 64;
    out.requests.push_back({at, MemoryRequest::Kind::Read, a,
                            static_cast<std::uint64_t>(out.requests.size())});
  };

  for (long iter = 0; iter < spec.iterations; ++iter) {
    const Ns window = static_cast<Ns>(iter) * timing.tREFI;
    // Dummy phase right after the refresh slot; order rotated per iteration.
    Ns t = window + timing.tRFC + timing.tRP;
    for (int pass = 0; pass < 4; ++pass) {
      for (int j = 0; j < spec.num_dummy; ++j) {
        const int row = out.dummy_rows[(j + iter) % spec.num_dummy];
        push_read(t, row, 0);
        t += timing.tRC;
      }
    }
    // Aggressor phase packed against the window end.
    Ns s = window + timing.tREFI - guard - aggr_phase;
    if (s < t) s = t;  // over-long pattern: run immediately, alignment lost
    for (int round = 0; round < spec.num_aggr_acts; ++round) {
      for (int aggr : out.aggressor_rows) {
        Ns r = s + timing.tRCD;
        for (int block = 0; block < spec.num_reads; ++block) {
          push_read(r, aggr, block);
          r += read_gap;
        }
        s += burst_cost(spec.num_reads);
      }
    }
  }
  return out;
}

GeneratedTrace gen_onoff_trace(const PatternSpec& spec, const AddressMap& map,
                               const TimingParams& timing, const Geometry& geometry,
                               long iterations, Ns col_cycle) {
  (void)map;
  spec.validate(timing);
  if (spec.kind != PatternSpec::Kind::OnOff)
    throw ConfigError("gen_onoff_trace: pattern kind must be onoff");

  GeneratedTrace out;
  const int aggr = spec.aggressor.row;
  out.victim_row = aggr + 1;
  out.aggressor_rows = {aggr};
  const int far_base = aggr + 128;
  const int far_count = 16;
  for (int i = 0; i < far_count; ++i) out.dummy_rows.push_back(far_base + i * spec.dummy_stride);
  if (out.dummy_rows.back() >= geometry.rows)
    throw ConfigError("pattern: closer rows fall outside the bank");

  const Ns t_on = spec.onoff_t_on(timing.tRAS);
  const Ns ta2a = t_on + spec.onoff_t_off(timing.tRP);
  out.iteration_period = ta2a;
  const int reads = std::max<int>(
      1, static_cast<int>((t_on - timing.tRCD + col_cycle - 1) / col_cycle));
  const int blocks = geometry.columns / 64;

  auto push_read = [&](Ns at, int row, int block) {
    DramAddress a = spec.aggressor;
    a.row = row;
    a.column = (block % blocks) * 64;
    out.requests.push_back({at, MemoryRequest::Kind::Read, a,
                            static_cast<std::uint64_t>(out.requests.size())});
  };

  for (long i = 0; i < iterations; ++i) {
    const Ns base = static_cast<Ns>(i) * ta2a;
    Ns r = base + timing.tRCD;
    for (int b = 0; b < reads; ++b) {
      push_read(r, aggr, b);
      r += col_cycle;
    }
    // One read to a rotating far row forces the aggressor closed at the
    // intended on-time.
    push_read(base + t_on, out.dummy_rows[i % far_count], 0);
  }
  return out;
}

}  // namespace rowsim
