#include "rowsim/request.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rowsim/errors.hpp"

namespace rowsim {

namespace {

int bits_for(int n) {
  int b = 0;
  while ((1 << b) < n) ++b;
  return b;
}

std::uint64_t extract(std::uint64_t v, const AddressMap::Field& f) {
  if (f.width == 0) return 0;
  return (v >> f.shift) & ((1ULL << f.width) - 1);
}

std::uint64_t place(std::uint64_t value, const AddressMap::Field& f) {
  if (f.width == 0) return 0;
  return (value & ((1ULL << f.width) - 1)) << f.shift;
}

}  // namespace

AddressMap AddressMap::default_layout(const Geometry& g) {
  AddressMap m;
  int shift = 6;  // 64B block offset
  auto next = [&shift](int count) {
    Field f{shift, bits_for(count)};
    shift += f.width;
    return f;
  };
  m.column_block = next(g.columns / 64);
  m.bank = next(g.banks_per_group);
  m.bankgroup = next(g.bankgroups);
  m.rank = next(g.ranks);
  m.channel = next(g.channels);
  m.row = next(g.rows);
  return m;
}

void AddressMap::validate(const Geometry& g) const {
  auto check = [](const Field& f, int dim, const char* name) {
    if (f.width == 0 && dim > 1)
      throw ConfigError(std::string("address_map.") + name + ": zero width but dimension > 1");
    if (f.width > 0 && (1 << f.width) < dim)
      throw ConfigError(std::string("address_map.") + name + ": width too small for geometry");
    if (f.shift < 0 || f.shift + f.width > 63)
      throw ConfigError(std::string("address_map.") + name + ": bit range out of bounds");
  };
  check(column_block, g.columns / 64, "column_block");
  check(bank, g.banks_per_group, "bank");
  check(bankgroup, g.bankgroups, "bankgroup");
  check(rank, g.ranks, "rank");
  check(channel, g.channels, "channel");
  check(row, g.rows, "row");
}

DramAddress AddressMap::decode(std::uint64_t physical) const {
  DramAddress a;
  a.column = static_cast<int>(extract(physical, column_block)) * 64;
  a.bank = static_cast<int>(extract(physical, bank));
  a.bankgroup = static_cast<int>(extract(physical, bankgroup));
  a.rank = static_cast<int>(extract(physical, rank));
  a.channel = static_cast<int>(extract(physical, channel));
  a.row = static_cast<int>(extract(physical, row));
  return a;
}

std::uint64_t AddressMap::encode(const DramAddress& a) const {
  return place(static_cast<std::uint64_t>(a.column / 64), column_block) |
         place(static_cast<std::uint64_t>(a.bank), bank) |
         place(static_cast<std::uint64_t>(a.bankgroup), bankgroup) |
         place(static_cast<std::uint64_t>(a.rank), rank) |
         place(static_cast<std::uint64_t>(a.channel), channel) |
         place(static_cast<std::uint64_t>(a.row), row);
}

RequestTrace parse_trace(std::istream& in, const AddressMap& map, const Geometry& g) {
  RequestTrace trace;
  std::string line;
  long line_no = 0;
  Ns last_arrival = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    long long arrival = 0;
    std::string kind_token, addr_token;
    if (!(fields >> arrival >> kind_token >> addr_token))
      throw TraceParseError("malformed trace line, expected '<arrival_ns> <R|W> <hex addr>'",
                            line_no);
    if (arrival < 0) throw TraceParseError("negative arrival time", line_no);
    if (arrival < last_arrival) throw TraceParseError("arrival times must be nondecreasing", line_no);
    last_arrival = arrival;

    MemoryRequest req;
    req.arrival_time = arrival;
    if (kind_token == "R" || kind_token == "r")
      req.kind = MemoryRequest::Kind::Read;
    else if (kind_token == "W" || kind_token == "w")
      req.kind = MemoryRequest::Kind::Write;
    else
      throw TraceParseError("request kind must be R or W, got '" + kind_token + "'", line_no);

    std::uint64_t physical = 0;
    const char* begin = addr_token.data();
    const char* end = begin + addr_token.size();
    if (addr_token.rfind("0x", 0) == 0 || addr_token.rfind("0X", 0) == 0) begin += 2;
    auto [ptr, ec] = std::from_chars(begin, end, physical, 16);
    if (ec != std::errc() || ptr != end)
      throw TraceParseError("bad hex address '" + addr_token + "'", line_no);

    req.address = map.decode(physical);
    if (const char* field = geometry_violation(g, req.address))
      throw TraceParseError(std::string("decoded address out of geometry (") + field + ")",
                            line_no);
    req.tag = static_cast<std::uint64_t>(trace.size());
    trace.push_back(req);
  }
  return trace;
}

RequestTrace parse_trace_file(const std::string& path, const AddressMap& map, const Geometry& g) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace file: " + path);
  return parse_trace(in, map, g);
}

void write_trace(std::ostream& out, const RequestTrace& trace, const AddressMap& map) {
  char buf[64];
  for (const auto& req : trace) {
    std::snprintf(buf, sizeof(buf), "%lld %c 0x%llx\n",
                  static_cast<long long>(req.arrival_time),
                  req.kind == MemoryRequest::Kind::Read ? 'R' : 'W',
                  static_cast<unsigned long long>(map.encode(req.address)));
    out << buf;
  }
}

void write_trace_file(const std::string& path, const RequestTrace& trace, const AddressMap& map) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open trace file for writing: " + path);
  write_trace(out, trace, map);
}

}  // namespace rowsim
