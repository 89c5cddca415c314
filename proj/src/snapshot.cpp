#include "stlab/snapshot.hpp"

#include <array>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <type_traits>

namespace stlab {

namespace {

template <typename T>
using Bits = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;

template <typename T>
void put_le(std::ostream& os, T value) {
  std::array<unsigned char, sizeof(T)> bytes;
  Bits<T> bits;
  std::memcpy(&bits, &value, sizeof(T));
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<unsigned char>(bits >> (8 * i));
  os.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

template <typename T>
T get_le(std::istream& is) {
  std::array<unsigned char, sizeof(T)> bytes;
  if (!is.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) throw SnapshotError("snapshot: truncated input");
  Bits<T> bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) bits |= static_cast<Bits<T>>(bytes[i]) << (8 * i);
  T value;
  std::memcpy(&value, &bits, sizeof(T));
  return value;
}

}  // namespace

void write_snapshot(std::ostream& os, const Field& u) {
  const auto& grid = *u.grid;
  os.write("STLB", 4);
  put_le<std::uint32_t>(os, kSnapshotVersion);
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(grid.dimension()));
  put_le<std::uint32_t>(os, 0);
  for (std::size_t c : grid.counts()) put_le<std::uint64_t>(os, c);
  for (double v : u.to_box()) put_le<double>(os, v);
  if (!os) throw SnapshotError("snapshot: write failed");
}

Snapshot read_snapshot(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "STLB", 4) != 0) throw SnapshotError("snapshot: bad magic");
  const auto version = get_le<std::uint32_t>(is);
  if (version != kSnapshotVersion) throw SnapshotError("snapshot: unsupported version " + std::to_string(version));
  const auto axes = get_le<std::uint32_t>(is);
  get_le<std::uint32_t>(is);
  if (axes == 0 || axes > 16) throw SnapshotError("snapshot: implausible axis count");
  Snapshot s;
  std::uint64_t total = 1;
  for (std::uint32_t a = 0; a < axes; ++a) {
    s.counts.push_back(get_le<std::uint64_t>(is));
    total *= s.counts.back();
  }
  s.values.reserve(total);
  for (std::uint64_t i = 0; i < total; ++i) s.values.push_back(get_le<double>(is));
  return s;
}

}  // namespace stlab
