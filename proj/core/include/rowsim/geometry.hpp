#pragma once

#include <cstdint>
#include <string>

#include "rowsim/errors.hpp"

namespace rowsim {

using Ns = std::int64_t;  ///< simulation time, nanoseconds

/// Device organization. Defaults follow a DDR4 x8 die scale.
struct Geometry {
  int channels = 1;
  int ranks = 1;
  int bankgroups = 4;
  int banks_per_group = 4;
  int rows = 65536;     ///< rows per bank
  int columns = 8192;   ///< cells per row; requests address 64-cell blocks

  int banks_per_rank() const { return bankgroups * banks_per_group; }
  int total_banks() const { return channels * ranks * banks_per_rank(); }
  void validate() const;
};

struct DramAddress {
  int channel = 0;
  int rank = 0;
  int bankgroup = 0;
  int bank = 0;
  int row = 0;
  int column = 0;

  bool same_bank(const DramAddress& o) const {
    return channel == o.channel && rank == o.rank && bankgroup == o.bankgroup && bank == o.bank;
  }
  /// Flat bank id within the device (channel-major).
  int bank_id(const Geometry& g) const {
    return ((channel * g.ranks + rank) * g.bankgroups + bankgroup) * g.banks_per_group + bank;
  }
  bool operator==(const DramAddress&) const = default;
};

/// Checks every index against the geometry; returns the offending field name
/// or nullptr when in range.
const char* geometry_violation(const Geometry& g, const DramAddress& a);

/// Logical-to-physical row remap. Adjacency (and therefore disturbance
/// coupling) is defined on physical rows; the remap is how in-DRAM row
/// scrambling enters the model. Identity by default. The xor variant is an
/// involution, so it is its own inverse.
class RowRemap {
 public:
  enum class Kind { Identity, XorMask };

  RowRemap() = default;
  static RowRemap identity() { return RowRemap(); }
  static RowRemap xor_mask(int mask) {
    RowRemap r;
    r.kind_ = Kind::XorMask;
    r.mask_ = mask;
    return r;
  }

  int to_physical(int logical_row) const {
    return kind_ == Kind::Identity ? logical_row : (logical_row ^ mask_);
  }
  int to_logical(int physical_row) const { return to_physical(physical_row); }

  Kind kind() const { return kind_; }
  int mask() const { return mask_; }
  bool operator==(const RowRemap&) const = default;

 private:
  Kind kind_ = Kind::Identity;
  int mask_ = 0;
};

}  // namespace rowsim
