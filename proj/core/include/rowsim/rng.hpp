#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace rowsim {

// All randomness flows from one master seed through named substreams, so two
// runs with the same config byte-match regardless of evaluation order.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Seed for the substream identified by (master, name, index).
inline std::uint64_t substream_seed(std::uint64_t master, std::string_view name,
                                    std::uint64_t index = 0) {
  return splitmix64(master ^ fnv1a(name) ^ splitmix64(index * 0x9e3779b97f4a7c15ULL + 1));
}

inline std::mt19937_64 substream(std::uint64_t master, std::string_view name,
                                 std::uint64_t index = 0) {
  return std::mt19937_64(substream_seed(master, name, index));
}

}  // namespace rowsim
