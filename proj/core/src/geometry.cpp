#include "rowsim/geometry.hpp"

namespace rowsim {

void Geometry::validate() const {
  auto positive = [](int v, const char* name) {
    if (v <= 0) throw ConfigError(std::string("geometry.") + name + ": must be positive");
  };
  positive(channels, "channels");
  positive(ranks, "ranks");
  positive(bankgroups, "bankgroups");
  positive(banks_per_group, "banks_per_group");
  positive(rows, "rows");
  positive(columns, "columns");
  if (columns % 64 != 0)
    throw ConfigError("geometry.columns: must be a multiple of 64 (block/word size)");
}

const char* geometry_violation(const Geometry& g, const DramAddress& a) {
  if (a.channel < 0 || a.channel >= g.channels) return "channel";
  if (a.rank < 0 || a.rank >= g.ranks) return "rank";
  if (a.bankgroup < 0 || a.bankgroup >= g.bankgroups) return "bankgroup";
  if (a.bank < 0 || a.bank >= g.banks_per_group) return "bank";
  if (a.row < 0 || a.row >= g.rows) return "row";
  if (a.column < 0 || a.column >= g.columns) return "column";
  return nullptr;
}

}  // namespace rowsim
