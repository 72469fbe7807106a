#include "rowsim/ledger.hpp"

#include "rowsim/errors.hpp"

namespace rowsim {

void DisturbanceLedger::record_activation(const MechanismModel& model, int aggressor_row,
                                          Ns on_time, double celsius, Ns time) {
  (void)time;
  if (on_time < model.min_on_time)
    throw ContractViolation("record_activation: on_time below minimum row-open time");
  if (touched_mark_.empty()) touched_mark_.assign(rows_, 0);

  const double h = model.hammer_dose(on_time, celsius);
  const double p = model.press_dose(on_time, celsius);
  for (int d = 1; d <= 3; ++d) {
    const double coupling = model.distance_coupling[d - 1];
    if (coupling <= 0.0) continue;
    for (int side = -1; side <= 1; side += 2) {
      const int victim = aggressor_row + side * d;
      if (victim < 0 || victim >= rows_) continue;
      Entry& e = entries_[victim];
      e.hammer += coupling * h;
      e.press += coupling * p;
      if (!touched_mark_[victim]) {
        touched_mark_[victim] = 1;
        touched_.push_back(victim);
      }
    }
  }
}

void DisturbanceLedger::refresh_row(int row, Ns time) {
  if (row < 0 || row >= rows_) return;
  Entry& e = entries_[row];
  e.hammer = 0.0;
  e.press = 0.0;
  e.last_refresh = time;
}

void DisturbanceLedger::reset() {
  entries_.assign(rows_, Entry{});
  touched_.clear();
  touched_mark_.clear();
}

}  // namespace rowsim
