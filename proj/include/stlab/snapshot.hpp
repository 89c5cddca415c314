#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "stlab/field.hpp"

namespace stlab {

/// Binary field snapshot: a 16-byte preamble ("STLB", u32 version, u32 axis
/// count, u32 reserved), one u64 node count per axis, then the box values as
/// little-endian f64 with zeros on hole nodes. Axis 0 varies fastest.
struct Snapshot {
  std::vector<std::uint64_t> counts;
  std::vector<double> values;
};

inline constexpr std::uint32_t kSnapshotVersion = 1;

class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_snapshot(std::ostream& os, const Field& u);
Snapshot read_snapshot(std::istream& is);

}  // namespace stlab
