#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rowsim/geometry.hpp"
#include "rowsim/timing.hpp"

namespace rowsim {

enum class CommandKind { ACT, PRE, RD, WR, REF };

const char* to_string(CommandKind k);

/// One DRAM command. Address granularity: row for ACT/PRE, column for RD/WR,
/// rank for REF.
struct Command {
  CommandKind kind = CommandKind::ACT;
  DramAddress address;
  Ns issue_time = 0;
};

using CommandLog = std::vector<Command>;

/// Named constraint that a command can violate, used both for validation
/// verdicts and hard-fault messages.
enum class Constraint {
  None,
  Geometry,
  IssueOrder,      // issue_time went backwards on the channel
  TRas,            // PRE before tRAS elapsed
  TRp,             // ACT before tRP elapsed after PRE
  TRc,             // ACT-to-ACT spacing below tRC
  TRcd,            // RD/WR before tRCD after ACT
  TRfc,            // command into a bank still busy with refresh
  BankAlreadyOpen, // ACT while a row is open
  RowNotOpen,      // PRE/RD/WR with no open row
  RowMismatch,     // RD/WR to a row other than the open one
  RefWithOpenBank, // REF while some bank of the rank has an open row
};

const char* to_string(Constraint c);

struct Legality {
  Constraint violated = Constraint::None;
  bool legal() const { return violated == Constraint::None; }
};

struct BankState {
  std::optional<int> open_row;
  Ns opened_at = 0;            // valid iff open_row
  Ns last_precharge_at = -1;   // -1: never precharged (treated as ready)
  Ns last_act_at = -1;
  Ns busy_until = 0;           // refresh occupancy

  bool is_open() const { return open_row.has_value(); }
  Ns t_agg_on(Ns now) const { return now - opened_at; }
};

struct RowOpened {
  DramAddress address;
  Ns time = 0;
};

struct RowClosed {
  DramAddress address;   // row granularity
  Ns time = 0;
  Ns t_agg_on = 0;       // close_time - opened_at
};

struct RefreshPerformed {
  int channel = 0;
  int rank = 0;
  Ns time = 0;
  long slot = 0;                // round-robin slice index
  int first_row = 0;            // refreshed rows: [first_row, first_row + row_count)
  int row_count = 0;
};

struct Event {
  enum class Kind { RowOpened, RowClosed, RefreshPerformed } kind;
  RowOpened opened{};
  RowClosed closed{};
  RefreshPerformed refresh{};
};

/// Round-robin refresh slicing: slot k covers rows
/// [k*rows_per_slot, ...) so that every row is refreshed exactly once per
/// tREFW when no REF is dropped. Returns {first_row, count}.
std::pair<int, int> rows_refreshed_by(long ref_slot, const Geometry& geometry,
                                      const TimingParams& timing);

/// Command-level DRAM device: per-bank state, timing legality, refresh
/// round-robin. Single-threaded; one instance per simulation.
class DramDevice {
 public:
  DramDevice() = default;
  DramDevice(const Geometry& geometry, const TimingParams& timing);

  const Geometry& geometry() const { return geometry_; }
  const TimingParams& timing() const { return timing_; }

  /// Pure check, no state change. Caller must keep per-channel issue times
  /// nondecreasing; that too is verdict-checked.
  Legality validate_command(const Command& cmd) const;

  /// Applies a command that validate_command accepted and returns the emitted
  /// events (row-opened / row-closed with measured tAggON / refresh-performed).
  /// Applying an illegal command throws HardFault.
  std::vector<Event> apply_command(const Command& cmd);

  const BankState& bank_state(const DramAddress& a) const { return banks_[a.bank_id(geometry_)]; }
  long refresh_slot(int channel, int rank) const {
    return ref_slots_[channel * geometry_.ranks + rank];
  }

  /// True iff no bank of (channel, rank) has an open row.
  bool rank_all_precharged(int channel, int rank) const;

 private:
  Geometry geometry_{};
  TimingParams timing_{};
  std::vector<BankState> banks_;
  std::vector<Ns> last_issue_;     // per channel
  std::vector<long> ref_slots_;    // per (channel, rank)
};

}  // namespace rowsim
