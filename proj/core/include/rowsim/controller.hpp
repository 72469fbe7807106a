#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <unordered_map>
#include <vector>

#include "rowsim/cells.hpp"
#include "rowsim/dram.hpp"
#include "rowsim/dose.hpp"
#include "rowsim/ledger.hpp"
#include "rowsim/mitigation.hpp"
#include "rowsim/request.hpp"

namespace rowsim {

/// Row-buffer management policy. capped_open(t_mro) force-precharges a row
/// exactly t_mro after it opened, even with hit requests queued;
/// capped_open(tRAS) is the minimally-open-row policy.
struct RowPolicy {
  enum class Kind { OpenPage, ClosedPage, CappedOpen };
  Kind kind = Kind::OpenPage;
  Ns t_mro = 36;

  void validate(const TimingParams& timing) const;
};

const char* to_string(RowPolicy::Kind k);

struct SimBitflip {
  int bank = 0;  // flat bank id
  Bitflip flip;
};

struct SimulationReport {
  long requests_served = 0;
  long reads = 0;
  long writes = 0;
  long row_hits = 0;
  long row_misses = 0;
  long total_acts = 0;
  long periodic_refreshes = 0;
  long postponed_refreshes = 0;
  long preventive_refreshes = 0;
  long backpressure_events = 0;

  double hit_rate = 0.0;
  double mean_latency_ns = 0.0;
  Ns p50_latency_ns = 0;
  Ns p95_latency_ns = 0;
  Ns p99_latency_ns = 0;
  Ns max_latency_ns = 0;

  /// Max per-row ACT count inside each tREFW window, and the overall max.
  std::vector<long> per_window_max_row_acts;
  long max_row_acts_per_window = 0;

  /// Measured tAggON distribution: power-of-two buckets from 32 ns.
  std::vector<long> t_agg_on_histogram;
  Ns max_t_agg_on = 0;
  double mean_t_agg_on = 0.0;

  std::vector<SimBitflip> bitflips;
  long rows_with_bitflips = 0;
  Ns end_time = 0;
};

struct ControllerConfig {
  Geometry geometry;
  TimingParams timing;
  RowPolicy policy;
  MitigationConfig mitigation;
  MechanismModel model = default_model();
  CellParams cells;
  RowRemap remap;
  double temperature_c = 50.0;
  Ns col_access_ns = 15;   ///< column access latency and read-to-read cadence
  int queue_capacity = 64; ///< per-bank scheduler window; excess arrivals stall
  std::uint64_t seed = 1;
};

/// Trace-driven memory controller: FR-FCFS scheduling (row hits first, then
/// oldest), per-bank request queues, refresh postponement up to
/// max_postponed_refs, row policies, and the configured read-disturbance
/// defense. One instance per simulation; fully deterministic given
/// (config, trace).
class Controller {
 public:
  explicit Controller(const ControllerConfig& config);

  /// Feeds the whole trace and simulates until every request is served and
  /// `duration` has elapsed. Bitflips are latched at refresh boundaries and
  /// at the end.
  SimulationReport run_trace(const RequestTrace& trace, Ns duration);

  const DisturbanceLedger& ledger(int bank_id) const { return ledgers_[bank_id]; }
  const CellProfile& profile() const { return profile_; }

 private:
  struct BankRuntime {
    std::deque<MemoryRequest> queue;
    Ns not_before = 0;       // preventive-refresh occupancy
    Ns next_rd_ok = 0;       // read/write pacing on the data path
    Ns last_rd_complete = 0; // earliest legal precharge w.r.t. in-flight data
  };

  struct RankRuntime {
    long refs_issued = 0;
  };

  struct Candidate {
    bool valid = false;
    Ns time = 0;
    int klass = 0;  // lower wins on ties
    Ns arrival = 0;
    int bank = -1;
    int rank_index = -1;
    CommandKind kind = CommandKind::ACT;
    DramAddress address;
    int request_slot = -1;  // queue position for RD/WR
  };

  // scheduling
  void enqueue(const MemoryRequest& req);
  Candidate bank_candidate(int bank_id, Ns now) const;
  Candidate refresh_candidate(int rank_index, Ns now) const;
  void issue(const Candidate& c, Ns now);
  long pending_refs(int rank_index, Ns now) const;
  bool rank_queues_empty(int rank_index) const;

  // bookkeeping
  void on_act(int bank_id, const DramAddress& addr, Ns time);
  void on_row_closed(int bank_id, const RowClosed& closed);
  void on_refresh(int rank_index, const RefreshPerformed& ref);
  void preventive_refresh(int bank_id, const std::vector<int>& physical_rows, Ns time);
  void latch_and_refresh_row(int bank_id, int physical_row, Ns time);
  void latch_row_if_flipped(int bank_id, int physical_row, Ns time);
  void note_act_for_window_stats(int bank_id, int row, Ns time);
  void roll_window_stats(Ns now);

  ControllerConfig cfg_;
  DramDevice device_;
  std::vector<BankRuntime> banks_;
  std::vector<RankRuntime> ranks_;
  std::vector<Ns> channel_next_ok_;

  // defenses, per bank
  std::vector<GrapheneTracker> graphene_;
  std::vector<ParaTracker> para_;
  std::vector<TrrSampler> trr_;

  std::vector<DisturbanceLedger> ledgers_;
  CellProfile profile_;

  // stats
  SimulationReport report_;
  std::vector<Ns> latencies_;
  std::unordered_map<std::uint64_t, long> window_acts_;
  long current_window_ = 0;
  long window_max_acts_ = 0;
  double t_agg_on_sum_ = 0.0;
  long t_agg_on_count_ = 0;
  std::unordered_map<std::uint64_t, char> flip_seen_;
};

/// Replays a generated command log straight into a device + ledger (refresh
/// and scheduling disabled): the characterization drive path.
struct DirectReplay {
  DirectReplay(const Geometry& geometry, const TimingParams& timing, const MechanismModel& model,
               const RowRemap& remap, double temperature_c);

  /// Applies the log (validating every command), accumulating dose on the
  /// ledger. Returns the end time of the log.
  Ns replay(const CommandLog& log);

  DramDevice device;
  DisturbanceLedger ledger;
  const MechanismModel* model;
  RowRemap remap;
  double temperature_c;
};

}  // namespace rowsim
