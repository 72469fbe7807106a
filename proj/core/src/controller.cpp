#include "rowsim/controller.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rowsim/errors.hpp"
#include "rowsim/rng.hpp"

namespace rowsim {

namespace {
constexpr Ns kNever = std::numeric_limits<Ns>::max() / 4;
constexpr Ns kChannelGap = 1;

// candidate classes, lower wins
enum {
  kClassForcedRefPre = 0,
  kClassForcedRef = 1,
  kClassForcedPre = 2,
  kClassHit = 3,
  kClassOldest = 4,
  kClassIdleRef = 5,
};

std::uint64_t flip_key(int bank, int row, int column) {
  return (static_cast<std::uint64_t>(bank) << 40) ^ (static_cast<std::uint64_t>(row) << 16) ^
         static_cast<std::uint64_t>(column);
}
}  // namespace

void RowPolicy::validate(const TimingParams& timing) const {
  if (kind == Kind::CappedOpen && t_mro < timing.tRAS)
    throw ConfigError("t_mro_ns: must be >= tRAS (" + std::to_string(timing.tRAS) + ")");
}

const char* to_string(RowPolicy::Kind k) {
  switch (k) {
    case RowPolicy::Kind::OpenPage: return "open_page";
    case RowPolicy::Kind::ClosedPage: return "closed_page";
    case RowPolicy::Kind::CappedOpen: return "capped_open";
  }
  return "?";
}

Controller::Controller(const ControllerConfig& config)
    : cfg_(config),
      device_(config.geometry, config.timing),
      profile_(config.cells, config.geometry.columns, config.seed) {
  cfg_.policy.validate(cfg_.timing);
  cfg_.mitigation.validate(cfg_.timing);
  cfg_.model.validate();

  const int nbanks = cfg_.geometry.total_banks();
  banks_.resize(nbanks);
  ranks_.resize(cfg_.geometry.channels * cfg_.geometry.ranks);
  channel_next_ok_.assign(cfg_.geometry.channels, 0);
  ledgers_.reserve(nbanks);
  for (int b = 0; b < nbanks; ++b) ledgers_.emplace_back(cfg_.geometry.rows);

  switch (cfg_.mitigation.kind) {
    case MitigationKind::Graphene:
    case MitigationKind::GrapheneRp:
      for (int b = 0; b < nbanks; ++b)
        graphene_.push_back(GrapheneTracker::with_default_sizing(
            cfg_.mitigation.graphene_T, cfg_.mitigation.blast_radius, cfg_.timing));
      break;
    case MitigationKind::Para:
    case MitigationKind::ParaRp:
      for (int b = 0; b < nbanks; ++b)
        para_.emplace_back(cfg_.mitigation.para_p,
                           substream_seed(cfg_.seed, "para", static_cast<std::uint64_t>(b)));
      break;
    case MitigationKind::Trr:
      for (int b = 0; b < nbanks; ++b) trr_.emplace_back(cfg_.mitigation.trr_capacity);
      break;
    case MitigationKind::None:
      break;
  }
}

long Controller::pending_refs(int rank_index, Ns now) const {
  const long due = now / cfg_.timing.tREFI;
  return due - ranks_[rank_index].refs_issued;
}

bool Controller::rank_queues_empty(int rank_index) const {
  const int per_rank = cfg_.geometry.banks_per_rank();
  for (int b = rank_index * per_rank; b < (rank_index + 1) * per_rank; ++b)
    if (!banks_[b].queue.empty()) return false;
  return true;
}

void Controller::enqueue(const MemoryRequest& req) {
  const int bank_id = req.address.bank_id(cfg_.geometry);
  auto& bank = banks_[bank_id];
  if (static_cast<int>(bank.queue.size()) >= cfg_.queue_capacity) ++report_.backpressure_events;
  bank.queue.push_back(req);
}

Controller::Candidate Controller::bank_candidate(int bank_id, Ns now) const {
  const auto& bank = banks_[bank_id];
  const Geometry& g = cfg_.geometry;
  const int per_rank = g.banks_per_rank();
  const int rank_index = bank_id / per_rank;

  DramAddress base;
  base.channel = rank_index / g.ranks;
  base.rank = rank_index % g.ranks;
  base.bankgroup = (bank_id % per_rank) / g.banks_per_group;
  base.bank = bank_id % g.banks_per_group;
  const BankState& st = device_.bank_state(base);

  const Ns chan_ok = channel_next_ok_[base.channel];
  Candidate c;
  c.bank = bank_id;
  c.rank_index = rank_index;

  const bool forcing = pending_refs(rank_index, now) >= cfg_.timing.max_postponed_refs;

  if (st.is_open()) {
    const Ns pre_ready =
        std::max({st.opened_at + cfg_.timing.tRAS, bank.last_rd_complete, bank.not_before, chan_ok});
    if (forcing) {
      // close everything so the refresh can go out
      c.valid = true;
      c.time = pre_ready;
      c.klass = kClassForcedRefPre;
      c.kind = CommandKind::PRE;
      c.address = base;
      c.address.row = *st.open_row;
      return c;
    }

    const bool capped = cfg_.policy.kind == RowPolicy::Kind::CappedOpen;
    const Ns deadline = capped ? st.opened_at + cfg_.policy.t_mro : kNever;

    // oldest hit in the scheduler window
    const int window = std::min<int>(static_cast<int>(bank.queue.size()), cfg_.queue_capacity);
    int hit_slot = -1;
    for (int i = 0; i < window; ++i) {
      if (bank.queue[i].address.row == *st.open_row) {
        hit_slot = i;
        break;
      }
    }
    if (hit_slot >= 0) {
      const Ns t_rd = std::max({now, st.opened_at + cfg_.timing.tRCD, bank.next_rd_ok,
                                bank.not_before, chan_ok});
      if (t_rd + cfg_.col_access_ns <= deadline) {
        c.valid = true;
        c.time = t_rd;
        c.klass = kClassHit;
        c.arrival = bank.queue[hit_slot].arrival_time;
        c.kind = bank.queue[hit_slot].kind == MemoryRequest::Kind::Read ? CommandKind::RD
                                                                        : CommandKind::WR;
        c.address = bank.queue[hit_slot].address;
        c.request_slot = hit_slot;
        return c;
      }
    }
    if (capped) {
      // the forced precharge lands exactly at opened_at + t_mro
      c.valid = true;
      c.time = std::max(deadline, st.opened_at + cfg_.timing.tRAS);
      c.klass = kClassForcedPre;
      c.kind = CommandKind::PRE;
      c.address = base;
      c.address.row = *st.open_row;
      return c;
    }
    if (!bank.queue.empty() || cfg_.policy.kind == RowPolicy::Kind::ClosedPage) {
      // conflict (or closed-page drain): precharge for the oldest request
      c.valid = true;
      c.time = pre_ready;
      c.klass = kClassOldest;
      c.arrival = bank.queue.empty() ? now : bank.queue.front().arrival_time;
      c.kind = CommandKind::PRE;
      c.address = base;
      c.address.row = *st.open_row;
      return c;
    }
    if (pending_refs(rank_index, now) >= 1 && rank_queues_empty(rank_index)) {
      // idle with refresh debt: close so the rank can repay on time
      c.valid = true;
      c.time = pre_ready;
      c.klass = kClassIdleRef;
      c.kind = CommandKind::PRE;
      c.address = base;
      c.address.row = *st.open_row;
      return c;
    }
    return c;  // open, idle, open-page: nothing to do
  }

  // bank closed
  if (forcing || bank.queue.empty()) return c;
  const Ns act_ready = std::max(
      {now, st.last_precharge_at >= 0 ? st.last_precharge_at + cfg_.timing.tRP : Ns{0},
       st.last_act_at >= 0 ? st.last_act_at + cfg_.timing.tRC : Ns{0}, st.busy_until,
       bank.not_before, chan_ok});
  c.valid = true;
  c.time = act_ready;
  c.klass = kClassOldest;
  c.arrival = bank.queue.front().arrival_time;
  c.kind = CommandKind::ACT;
  c.address = bank.queue.front().address;
  return c;
}

Controller::Candidate Controller::refresh_candidate(int rank_index, Ns now) const {
  Candidate c;
  const long pending = pending_refs(rank_index, now);
  if (pending <= 0) return c;
  const bool forcing = pending >= cfg_.timing.max_postponed_refs;
  if (!forcing && !rank_queues_empty(rank_index)) return c;

  const Geometry& g = cfg_.geometry;
  const int channel = rank_index / g.ranks;
  const int rank = rank_index % g.ranks;
  if (!device_.rank_all_precharged(channel, rank)) return c;  // bank PREs win first

  Ns ready = std::max(now, channel_next_ok_[channel]);
  const int per_rank = g.banks_per_rank();
  for (int b = rank_index * per_rank; b < (rank_index + 1) * per_rank; ++b) {
    DramAddress a;
    a.channel = channel;
    a.rank = rank;
    a.bankgroup = (b % per_rank) / g.banks_per_group;
    a.bank = b % g.banks_per_group;
    const BankState& st = device_.bank_state(a);
    if (st.last_precharge_at >= 0) ready = std::max(ready, st.last_precharge_at + cfg_.timing.tRP);
    ready = std::max(ready, st.busy_until);
  }
  c.valid = true;
  c.time = ready;
  c.klass = forcing ? kClassForcedRef : kClassIdleRef;
  c.rank_index = rank_index;
  c.kind = CommandKind::REF;
  c.address.channel = channel;
  c.address.rank = rank;
  return c;
}

void Controller::note_act_for_window_stats(int bank_id, int row, Ns time) {
  const long window = time / cfg_.timing.tREFW;
  if (window != current_window_) roll_window_stats(time);
  const std::uint64_t key =
      (static_cast<std::uint64_t>(bank_id) << 32) | static_cast<std::uint64_t>(row);
  const long count = ++window_acts_[key];
  window_max_acts_ = std::max(window_max_acts_, count);
}

void Controller::roll_window_stats(Ns now) {
  const long window = now / cfg_.timing.tREFW;
  while (current_window_ < window) {
    report_.per_window_max_row_acts.push_back(window_max_acts_);
    window_acts_.clear();
    window_max_acts_ = 0;
    ++current_window_;
  }
}

void Controller::latch_row_if_flipped(int bank_id, int physical_row, Ns time) {
  const auto& entry = ledgers_[bank_id].entry(physical_row);
  // cheap filter: the weakest cell multiplier is exactly 1.0
  if (entry.hammer < cfg_.model.theta_hammer && entry.press < cfg_.model.theta_press) return;
  std::vector<Bitflip> flips;
  collect_row_bitflips(entry, physical_row, profile_, cfg_.model, time, flips);
  for (const Bitflip& f : flips) {
    if (flip_seen_.emplace(flip_key(bank_id, f.row, f.column), 1).second)
      report_.bitflips.push_back({bank_id, f});
  }
}

void Controller::latch_and_refresh_row(int bank_id, int physical_row, Ns time) {
  if (physical_row < 0 || physical_row >= cfg_.geometry.rows) return;
  latch_row_if_flipped(bank_id, physical_row, time);
  ledgers_[bank_id].refresh_row(physical_row, time);
}

void Controller::preventive_refresh(int bank_id, const std::vector<int>& physical_rows, Ns time) {
  auto& bank = banks_[bank_id];
  for (int row : physical_rows) {
    if (row < 0 || row >= cfg_.geometry.rows) continue;
    latch_and_refresh_row(bank_id, row, time);
    ++report_.preventive_refreshes;
    // one ACT-equivalent bank occupancy per refreshed victim
    bank.not_before = std::max(bank.not_before, time) + cfg_.timing.tRC;
  }
}

void Controller::on_act(int bank_id, const DramAddress& addr, Ns time) {
  ++report_.total_acts;
  const int physical = cfg_.remap.to_physical(addr.row);
  note_act_for_window_stats(bank_id, physical, time);

  switch (cfg_.mitigation.kind) {
    case MitigationKind::Graphene:
    case MitigationKind::GrapheneRp:
      preventive_refresh(bank_id, graphene_[bank_id].observe(physical, time), time);
      break;
    case MitigationKind::Para:
    case MitigationKind::ParaRp:
      preventive_refresh(bank_id, para_[bank_id].observe(physical), time);
      break;
    case MitigationKind::Trr:
      trr_[bank_id].observe(physical);
      break;
    case MitigationKind::None:
      break;
  }
}

void Controller::on_row_closed(int bank_id, const RowClosed& closed) {
  const int physical = cfg_.remap.to_physical(closed.address.row);
  ledgers_[bank_id].record_activation(cfg_.model, physical, closed.t_agg_on, cfg_.temperature_c,
                                      closed.time);
  // histogram: power-of-two buckets from 32 ns
  const Ns t = closed.t_agg_on;
  int bucket = 0;
  for (Ns edge = 32; edge < t && bucket < 40; edge <<= 1) ++bucket;
  if (static_cast<int>(report_.t_agg_on_histogram.size()) <= bucket)
    report_.t_agg_on_histogram.resize(bucket + 1, 0);
  ++report_.t_agg_on_histogram[bucket];
  report_.max_t_agg_on = std::max(report_.max_t_agg_on, t);
  t_agg_on_sum_ += static_cast<double>(t);
  ++t_agg_on_count_;
}

void Controller::on_refresh(int rank_index, const RefreshPerformed& ref) {
  ++report_.periodic_refreshes;
  const int per_rank = cfg_.geometry.banks_per_rank();
  for (int b = rank_index * per_rank; b < (rank_index + 1) * per_rank; ++b) {
    for (int row = ref.first_row; row < ref.first_row + ref.row_count; ++row)
      latch_and_refresh_row(b, row, ref.time);
    if (cfg_.mitigation.kind == MitigationKind::Trr)
      preventive_refresh(b, trr_[b].on_ref(), ref.time);
  }
}

void Controller::issue(const Candidate& c, Ns now) {
  Command cmd{c.kind, c.address, c.time};
  const auto events = device_.apply_command(cmd);  // HardFault on scheduler bugs
  channel_next_ok_[c.address.channel] = c.time + kChannelGap;

  for (const Event& e : events) {
    switch (e.kind) {
      case Event::Kind::RowOpened:
        on_act(c.bank, e.opened.address, e.opened.time);
        break;
      case Event::Kind::RowClosed:
        on_row_closed(c.bank, e.closed);
        break;
      case Event::Kind::RefreshPerformed:
        on_refresh(c.rank_index, e.refresh);
        break;
    }
  }

  if (c.kind == CommandKind::REF) {
    ++ranks_[c.rank_index].refs_issued;
    if (c.klass == kClassForcedRef) ++report_.postponed_refreshes;
    return;
  }
  if (c.kind == CommandKind::RD || c.kind == CommandKind::WR) {
    auto& bank = banks_[c.bank];
    const MemoryRequest req = bank.queue[c.request_slot];
    bank.queue.erase(bank.queue.begin() + c.request_slot);
    bank.next_rd_ok = c.time + cfg_.col_access_ns;
    bank.last_rd_complete = c.time + cfg_.col_access_ns;
    const Ns latency = (c.time + cfg_.col_access_ns) - req.arrival_time;
    latencies_.push_back(latency);
    ++report_.requests_served;
    if (req.kind == MemoryRequest::Kind::Read)
      ++report_.reads;
    else
      ++report_.writes;
  }
}

SimulationReport Controller::run_trace(const RequestTrace& trace, Ns duration) {
  report_ = SimulationReport{};
  latencies_.clear();
  flip_seen_.clear();
  window_acts_.clear();
  current_window_ = 0;
  window_max_acts_ = 0;
  t_agg_on_sum_ = 0.0;
  t_agg_on_count_ = 0;

  size_t next_arrival = 0;
  Ns now = 0;
  const int nbanks = cfg_.geometry.total_banks();
  const int nranks = static_cast<int>(ranks_.size());

  auto all_served = [&] {
    if (next_arrival < trace.size()) return false;
    for (const auto& b : banks_)
      if (!b.queue.empty()) return false;
    return true;
  };

  while (true) {
    // admit arrivals
    while (next_arrival < trace.size() && trace[next_arrival].arrival_time <= now)
      enqueue(trace[next_arrival++]);

    if (all_served() && now >= duration) break;

    // pick the best issuable action
    Candidate best;
    for (int r = 0; r < nranks; ++r) {
      Candidate c = refresh_candidate(r, now);
      if (c.valid && (!best.valid || std::tie(c.time, c.klass, c.arrival) <
                                         std::tie(best.time, best.klass, best.arrival)))
        best = c;
    }
    for (int b = 0; b < nbanks; ++b) {
      Candidate c = bank_candidate(b, now);
      if (c.valid && (!best.valid || std::tie(c.time, c.klass, c.arrival) <
                                         std::tie(best.time, best.klass, best.arrival)))
        best = c;
    }

    Ns next_time = kNever;
    if (best.valid) next_time = best.time;
    if (next_arrival < trace.size())
      next_time = std::min(next_time, trace[next_arrival].arrival_time);
    // refresh debt accrues with time even when idle
    for (int r = 0; r < nranks; ++r) {
      const Ns next_due = (ranks_[r].refs_issued + 1) * cfg_.timing.tREFI;
      if (next_due > now) next_time = std::min(next_time, next_due);
    }
    if (!all_served() || now < duration) next_time = std::min(next_time, std::max(now + 1, duration));

    if (best.valid && best.time <= now) {
      issue(best, now);
      continue;
    }
    if (next_time <= now) next_time = now + 1;
    if (next_time >= kNever) {
      if (all_served() && now >= duration) break;
      now = duration;
      continue;
    }
    now = next_time;
  }

  // final accounting
  roll_window_stats(now + cfg_.timing.tREFW);  // flush the last window
  for (int b = 0; b < nbanks; ++b)
    for (int row : ledgers_[b].touched_rows()) latch_row_if_flipped(b, row, now);

  report_.end_time = now;
  report_.row_misses = report_.total_acts;
  report_.row_hits = report_.requests_served - report_.total_acts;
  if (report_.row_hits < 0) report_.row_hits = 0;
  report_.hit_rate = report_.requests_served > 0
                         ? static_cast<double>(report_.row_hits) /
                               static_cast<double>(report_.requests_served)
                         : 0.0;
  if (!latencies_.empty()) {
    std::vector<Ns> sorted = latencies_;
    std::sort(sorted.begin(), sorted.end());
    double sum = 0.0;
    for (Ns l : sorted) sum += static_cast<double>(l);
    report_.mean_latency_ns = sum / static_cast<double>(sorted.size());
    auto pct = [&](double p) {
      const size_t i = static_cast<size_t>(p * static_cast<double>(sorted.size() - 1));
      return sorted[i];
    };
    report_.p50_latency_ns = pct(0.50);
    report_.p95_latency_ns = pct(0.95);
    report_.p99_latency_ns = pct(0.99);
    report_.max_latency_ns = sorted.back();
  }
  if (t_agg_on_count_ > 0)
    report_.mean_t_agg_on = t_agg_on_sum_ / static_cast<double>(t_agg_on_count_);
  for (long m : report_.per_window_max_row_acts)
    report_.max_row_acts_per_window = std::max(report_.max_row_acts_per_window, m);

  std::unordered_map<std::uint64_t, char> rows_seen;
  for (const auto& f : report_.bitflips)
    rows_seen.emplace((static_cast<std::uint64_t>(f.bank) << 32) |
                          static_cast<std::uint64_t>(f.flip.row),
                      1);
  report_.rows_with_bitflips = static_cast<long>(rows_seen.size());
  return report_;
}

DirectReplay::DirectReplay(const Geometry& geometry, const TimingParams& timing,
                           const MechanismModel& m, const RowRemap& rm, double temp)
    : device(geometry, timing), ledger(geometry.rows), model(&m), remap(rm), temperature_c(temp) {}

Ns DirectReplay::replay(const CommandLog& log) {
  Ns end = 0;
  for (const Command& cmd : log) {
    const auto events = device.apply_command(cmd);
    for (const Event& e : events) {
      if (e.kind == Event::Kind::RowClosed)
        ledger.record_activation(*model, remap.to_physical(e.closed.address.row),
                                 e.closed.t_agg_on, temperature_c, e.closed.time);
    }
    end = std::max(end, cmd.issue_time);
  }
  return end;
}

}  // namespace rowsim
