#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "rowsim/dose.hpp"
#include "rowsim/geometry.hpp"
#include "rowsim/ledger.hpp"

namespace rowsim {

enum class Mechanism { Hammer, Press, Retention };
enum class FlipDirection { ZeroToOne, OneToZero };

const char* to_string(Mechanism m);
const char* to_string(FlipDirection d);

struct Bitflip {
  int row = 0;
  int column = 0;
  FlipDirection direction = FlipDirection::OneToZero;
  Mechanism mechanism = Mechanism::Press;

  bool operator==(const Bitflip&) const = default;
};

/// Per-retention-cell failure budgets, nanoseconds at the reference
/// temperature. A retention cell flips once its row has gone unrefreshed
/// longer than its budget.
struct RetentionModel {
  double median_budget_ns = 2.0e9;  // seconds-scale; never fires inside a refresh window
  double sigma = 0.4;               // lognormal spread
  double min_budget_ns = 8.0e8;
};

struct CellParams {
  int press_cells = 64;
  int hammer_cells = 32;
  int retention_cells = 16;
  double multiplier_sigma = 0.2;     ///< lognormal spread of per-cell thresholds
  double overlap_hammer = 0.00013;   ///< bound on |press ∩ hammer| / |press|
  double overlap_retention = 0.0034; ///< bound on |press ∩ retention| / |press|
  int press_cluster_min = 4;         ///< press cells include one same-word cluster
  int press_cluster_max = 12;
  double anti_row_fraction = 0.0;    ///< fraction of rows laid out as anti-cells
  RetentionModel retention;

  void validate() const;
};

/// Sampled vulnerable-cell populations of one row. Multipliers are
/// normalized so the weakest cell of each mechanism sits exactly at 1.0: the
/// mechanism threshold is by definition the dose of the row's first flip.
struct RowCells {
  struct Cell {
    int column = 0;
    double multiplier = 1.0;
  };
  struct RetentionCell {
    int column = 0;
    double budget_ns = 0.0;
  };
  std::vector<Cell> press;
  std::vector<Cell> hammer;
  std::vector<RetentionCell> retention;
  bool anti_cells = false;
};

/// Deterministic per-row cell sampler: row_cells(r) is a pure function of
/// (seed, r). Shared press/hammer and press/retention members are injected at
/// half the configured overlap bound so measured overlap stays below it.
class CellProfile {
 public:
  CellProfile() = default;
  CellProfile(const CellParams& params, int columns, std::uint64_t seed);

  const RowCells& row_cells(int row) const;
  const CellParams& params() const { return params_; }
  int columns() const { return columns_; }

  FlipDirection press_direction(const RowCells& rc) const {
    return rc.anti_cells ? FlipDirection::ZeroToOne : FlipDirection::OneToZero;
  }
  FlipDirection hammer_direction(const RowCells& rc) const {
    return rc.anti_cells ? FlipDirection::OneToZero : FlipDirection::ZeroToOne;
  }
  FlipDirection retention_direction(const RowCells& rc) const {
    return rc.anti_cells ? FlipDirection::ZeroToOne : FlipDirection::OneToZero;
  }

 private:
  RowCells sample_row(int row) const;

  CellParams params_{};
  int columns_ = 8192;
  std::uint64_t seed_ = 0;
  mutable std::unordered_map<int, RowCells> cache_;
};

/// Instantaneous flip set: a cell flips iff its mechanism's row dose has
/// reached threshold x multiplier (or its retention budget is exceeded).
/// Pure function of (ledger, profile, model, now). Scans the ledger's touched
/// rows plus `extra_rows`; a cell shared between mechanisms is reported once,
/// attributed to press.
std::vector<Bitflip> collect_bitflips(const DisturbanceLedger& ledger, const CellProfile& profile,
                                      const MechanismModel& model, Ns now,
                                      const std::vector<int>& extra_rows = {});

/// Flips of a single row (same rule), appended to `out`.
void collect_row_bitflips(const DisturbanceLedger::Entry& entry, int row,
                          const CellProfile& profile, const MechanismModel& model, Ns now,
                          std::vector<Bitflip>& out);

}  // namespace rowsim
