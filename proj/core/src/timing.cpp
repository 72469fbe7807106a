#include "rowsim/timing.hpp"

#include "rowsim/errors.hpp"

namespace rowsim {

void TimingParams::validate() const {
  if (tRAS <= 0) throw ConfigError("timing.tRAS_ns: must be positive");
  if (tRP <= 0) throw ConfigError("timing.tRP_ns: must be positive");
  if (tRCD <= 0) throw ConfigError("timing.tRCD_ns: must be positive");
  if (tRFC <= 0) throw ConfigError("timing.tRFC_ns: must be positive");
  if (tRC != tRAS + tRP)
    throw ConfigError("timing.tRC_ns: must equal tRAS + tRP (" + std::to_string(tRAS + tRP) + ")");
  if (tREFI <= 0) throw ConfigError("timing.tREFI_ns: must be positive");
  if (tREFW <= 0 || tREFW % tREFI != 0)
    throw ConfigError("timing.tREFW_ns: must be a positive integer multiple of tREFI");
  if (max_postponed_refs < 0 || max_postponed_refs > 8)
    throw ConfigError("timing.max_postponed_refs: must be in [0, 8]");
}

}  // namespace rowsim
