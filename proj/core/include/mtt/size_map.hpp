#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mtt/partition.hpp"

namespace mtt {

// Per-CTU grid at 4x4 granularity; each entry holds the (width, height) of
// the NS leaf covering that sub-block. A 128x128 CTU yields a 32x32 grid.
struct SizeMap {
  static constexpr int kGranularity = 4;

  int ctu_size = 0;
  int grid = 0;  // ctu_size / 4
  std::vector<std::pair<uint16_t, uint16_t>> entries;  // row-major (w, h)

  const std::pair<uint16_t, uint16_t>& entry(int gx, int gy) const {
    return entries[size_t(gy) * grid + gx];
  }
  bool operator==(const SizeMap&) const = default;
};

// Fills every sub-block covered by an NS leaf with that leaf's dimensions.
// A tree whose leaves do not tile the CTU exactly throws std::runtime_error.
SizeMap extract_size_map(const PartitionTree& ctu_tree);

// region is in CTU-local pixel coordinates, 4-aligned, inside the CTU.
// Returns max over covered entries of max(width, height).
int max_size_in_region(const SizeMap& map, int x, int y, int width, int height);

// Per-dimension variant: (max width entry, max height entry).
std::pair<int, int> max_dims_in_region(const SizeMap& map, int x, int y, int width,
                                       int height);

// Binary layout, little endian:
//   magic "SZMP", version u8 = 1, ctu_size u16, granularity u16, grid u16,
//   then row-major (width u16, height u16) pairs.
std::vector<uint8_t> serialize(const SizeMap& map);
SizeMap deserialize(const uint8_t* data, size_t size);
inline SizeMap deserialize(const std::vector<uint8_t>& bytes) {
  return deserialize(bytes.data(), bytes.size());
}

// "w:h" cells, one grid row per line.
std::string size_map_csv(const SizeMap& map);

}  // namespace mtt
