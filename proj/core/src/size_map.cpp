#include "mtt/size_map.hpp"

#include <cstring>
#include <sstream>
#include <stdexcept>

namespace mtt {

namespace {

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(uint8_t(v & 0xff));
  out.push_back(uint8_t(v >> 8));
}

uint16_t get_u16(const uint8_t* p) { return uint16_t(p[0] | (p[1] << 8)); }

}  // namespace

SizeMap extract_size_map(const PartitionTree& ctu_tree) {
  const CuGeom& root = ctu_tree.geom;
  if (root.width != root.height) throw std::runtime_error("size map: non-square CTU");

  SizeMap map;
  map.ctu_size = root.width;
  map.grid = root.width / SizeMap::kGranularity;
  map.entries.assign(size_t(map.grid) * map.grid, {0, 0});
  std::vector<uint8_t> written(map.entries.size(), 0);

  for_each_leaf(ctu_tree, [&](const PartitionTree& leaf) {
    const CuGeom& g = leaf.geom;
    int gx0 = (g.x - root.x) / SizeMap::kGranularity;
    int gy0 = (g.y - root.y) / SizeMap::kGranularity;
    int gw = g.width / SizeMap::kGranularity;
    int gh = g.height / SizeMap::kGranularity;
    if (gx0 < 0 || gy0 < 0 || gx0 + gw > map.grid || gy0 + gh > map.grid)
      throw std::runtime_error("size map: leaf outside CTU");
    for (int gy = gy0; gy < gy0 + gh; ++gy)
      for (int gx = gx0; gx < gx0 + gw; ++gx) {
        size_t i = size_t(gy) * map.grid + gx;
        if (written[i]) throw std::runtime_error("size map: overlapping leaves");
        written[i] = 1;
        map.entries[i] = {uint16_t(g.width), uint16_t(g.height)};
      }
  });
  for (uint8_t w : written)
    if (!w) throw std::runtime_error("size map: leaves do not tile the CTU");
  return map;
}

namespace {

void check_region(const SizeMap& map, int x, int y, int width, int height) {
  if (x < 0 || y < 0 || width <= 0 || height <= 0 ||
      x + width > map.ctu_size || y + height > map.ctu_size)
    throw std::invalid_argument("size map: region outside CTU");
  if (x % SizeMap::kGranularity || y % SizeMap::kGranularity ||
      width % SizeMap::kGranularity || height % SizeMap::kGranularity)
    throw std::invalid_argument("size map: region not 4-aligned");
}

}  // namespace

int max_size_in_region(const SizeMap& map, int x, int y, int width, int height) {
  check_region(map, x, y, width, height);
  int best = 0;
  for (int gy = y / 4; gy < (y + height) / 4; ++gy)
    for (int gx = x / 4; gx < (x + width) / 4; ++gx) {
      const auto& e = map.entry(gx, gy);
      best = std::max(best, int(std::max(e.first, e.second)));
    }
  return best;
}

std::pair<int, int> max_dims_in_region(const SizeMap& map, int x, int y, int width,
                                       int height) {
  check_region(map, x, y, width, height);
  int bw = 0, bh = 0;
  for (int gy = y / 4; gy < (y + height) / 4; ++gy)
    for (int gx = x / 4; gx < (x + width) / 4; ++gx) {
      const auto& e = map.entry(gx, gy);
      bw = std::max(bw, int(e.first));
      bh = std::max(bh, int(e.second));
    }
  return {bw, bh};
}

std::vector<uint8_t> serialize(const SizeMap& map) {
  std::vector<uint8_t> out;
  out.reserve(11 + map.entries.size() * 4);
  for (char c : {'S', 'Z', 'M', 'P'}) out.push_back(uint8_t(c));
  out.push_back(1);  // version
  put_u16(out, uint16_t(map.ctu_size));
  put_u16(out, uint16_t(SizeMap::kGranularity));
  put_u16(out, uint16_t(map.grid));
  for (const auto& [w, h] : map.entries) {
    put_u16(out, w);
    put_u16(out, h);
  }
  return out;
}

SizeMap deserialize(const uint8_t* data, size_t size) {
  if (size < 11) throw std::runtime_error("szmp: truncated header");
  if (std::memcmp(data, "SZMP", 4) != 0) throw std::runtime_error("szmp: bad magic");
  if (data[4] != 1) throw std::runtime_error("szmp: unsupported version");

  SizeMap map;
  map.ctu_size = get_u16(data + 5);
  int granularity = get_u16(data + 7);
  map.grid = get_u16(data + 9);
  if (granularity != SizeMap::kGranularity)
    throw std::runtime_error("szmp: unsupported granularity");
  if (map.grid <= 0 || map.ctu_size != map.grid * granularity)
    throw std::runtime_error("szmp: inconsistent dimensions");

  size_t n = size_t(map.grid) * map.grid;
  if (size != 11 + n * 4) throw std::runtime_error("szmp: payload length mismatch");
  map.entries.resize(n);
  const uint8_t* p = data + 11;
  for (auto& e : map.entries) {
    e.first = get_u16(p);
    e.second = get_u16(p + 2);
    p += 4;
  }
  return map;
}

std::string size_map_csv(const SizeMap& map) {
  std::ostringstream out;
  for (int gy = 0; gy < map.grid; ++gy) {
    for (int gx = 0; gx < map.grid; ++gx) {
      if (gx) out << ',';
      const auto& e = map.entry(gx, gy);
      out << e.first << ':' << e.second;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace mtt
