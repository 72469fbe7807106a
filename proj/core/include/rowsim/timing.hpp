#pragma once

#include "rowsim/geometry.hpp"

namespace rowsim {

/// DDR4-style timing constants (nanoseconds). Only the parameters that govern
/// row open/close/refresh behavior are modeled; bus-level constraints (tCCD,
/// tFAW, burst timing) are deliberately absent.
struct TimingParams {
  Ns tRAS = 36;           ///< minimum row-open time (ACT to PRE)
  Ns tRP = 15;            ///< precharge latency (PRE to ACT)
  Ns tRCD = 15;           ///< ACT to first RD/WR
  Ns tRC = 51;            ///< ACT to ACT, same bank; must equal tRAS + tRP
  Ns tREFI = 7800;        ///< refresh command interval
  Ns tREFW = 63897600;    ///< refresh window (= 8192 x tREFI); every row once per window
  Ns tRFC = 350;          ///< refresh cycle time (bank busy after REF)
  int max_postponed_refs = 8;

  long refresh_slots() const { return tREFW / tREFI; }

  /// Throws ConfigError naming the field when an invariant fails:
  /// tRC = tRAS + tRP, tREFW a multiple of tREFI, max_postponed_refs <= 8.
  void validate() const;
};

}  // namespace rowsim
