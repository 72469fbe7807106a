#pragma once

#include <vector>

#include "rowsim/dose.hpp"
#include "rowsim/geometry.hpp"

namespace rowsim {

/// Per-victim-row disturbance dose accumulated since that row's last refresh,
/// one accumulator per mechanism. Rows are physical; one ledger per bank row
/// space. Dense storage, lazily grown.
class DisturbanceLedger {
 public:
  struct Entry {
    double hammer = 0.0;
    double press = 0.0;
    Ns last_refresh = 0;
  };

  explicit DisturbanceLedger(int rows = 0) : rows_(rows), entries_(rows) {}

  int rows() const { return rows_; }
  const Entry& entry(int row) const { return entries_[row]; }

  /// Adds distance-scaled dose to victims within +-3 physical rows of the
  /// aggressor. Called once per row-closed event; on_time is the measured
  /// tAggON of that activation.
  void record_activation(const MechanismModel& model, int aggressor_row, Ns on_time,
                         double celsius, Ns time);

  /// Zeroes both mechanism doses of one row and stamps its refresh time.
  /// Idempotent; neighbors are untouched.
  void refresh_row(int row, Ns time);

  /// Rows whose dose has been touched since construction (for fast scans).
  const std::vector<int>& touched_rows() const { return touched_; }

  void reset();

 private:
  int rows_ = 0;
  std::vector<Entry> entries_;
  std::vector<int> touched_;
  std::vector<char> touched_mark_;
};

}  // namespace rowsim
