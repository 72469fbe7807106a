#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rowsim/geometry.hpp"

namespace rowsim {

/// Physical-address bit slicing. Requests address 64-byte blocks; one block
/// maps onto one 64-cell column group of a row. Default layout (low to high):
/// 6 offset bits, block-within-row, bank, bankgroup, rank, channel, row.
struct AddressMap {
  struct Field {
    int shift = 0;
    int width = 0;  // 0-width fields decode to index 0
  };
  Field column_block;  // block index; DramAddress.column = block * 64
  Field bank;
  Field bankgroup;
  Field rank;
  Field channel;
  Field row;

  static AddressMap default_layout(const Geometry& g);

  DramAddress decode(std::uint64_t physical) const;
  std::uint64_t encode(const DramAddress& a) const;

  void validate(const Geometry& g) const;
};

struct MemoryRequest {
  enum class Kind { Read, Write };
  Ns arrival_time = 0;
  Kind kind = Kind::Read;
  DramAddress address;
  std::uint64_t tag = 0;
};

using RequestTrace = std::vector<MemoryRequest>;

/// Line format: `<arrival_ns> <R|W> <hex physical address>`. Blank lines and
/// lines starting with '#' are skipped. Arrival times must be nondecreasing.
/// Throws TraceParseError with the line number on malformed input.
RequestTrace parse_trace(std::istream& in, const AddressMap& map, const Geometry& g);
RequestTrace parse_trace_file(const std::string& path, const AddressMap& map, const Geometry& g);

void write_trace(std::ostream& out, const RequestTrace& trace, const AddressMap& map);
void write_trace_file(const std::string& path, const RequestTrace& trace, const AddressMap& map);

}  // namespace rowsim
