#include "irfuse/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace irfuse::grid {

double PatchGrid::diameter() const {
  const double dr = rows - 1, dc = cols - 1;
  return std::sqrt(dr * dr + dc * dc);
}

PatchGrid grid_from_image(int height_px, int width_px, int patch_px) {
  if (height_px <= 0 || width_px <= 0 || patch_px <= 0) {
    throw std::invalid_argument("grid_from_image: extents must be positive");
  }
  if (height_px % patch_px != 0 || width_px % patch_px != 0) {
    throw std::invalid_argument(
        "grid_from_image: patch " + std::to_string(patch_px) + " does not divide " +
        std::to_string(height_px) + "x" + std::to_string(width_px) + " (remainders " +
        std::to_string(height_px % patch_px) + ", " + std::to_string(width_px % patch_px) + ")");
  }
  return {height_px / patch_px, width_px / patch_px};
}

namespace {

int scale_axis(int p, int src_extent, int dst_extent) {
  // Patch centers sit at integer + 0.5; scale in normalized units and round
  // to the nearest destination index (half away from zero).
  const double scaled = (static_cast<double>(p) + 0.5) * static_cast<double>(dst_extent) /
                            static_cast<double>(src_extent) -
                        0.5;
  const long r = std::lround(scaled);
  return static_cast<int>(std::clamp(r, 0L, static_cast<long>(dst_extent - 1)));
}

}  // namespace

Coord map_coords(Coord p, const PatchGrid& src, const PatchGrid& dst) {
  if (!src.contains(p)) {
    throw std::invalid_argument("map_coords: (" + std::to_string(p.row) + "," +
                                std::to_string(p.col) + ") is off the source grid");
  }
  if (src == dst) return p;
  return {scale_axis(p.row, src.rows, dst.rows), scale_axis(p.col, src.cols, dst.cols)};
}

NeighborhoodTable build_neighborhood(const PatchGrid& query, const PatchGrid& key, double r) {
  if (r < 0.0) throw std::invalid_argument("build_neighborhood: radius must be >= 0");
  NeighborhoodTable table;
  table.radius = r;
  table.query_grid = query;
  table.key_grid = key;
  table.neighbors.resize(query.token_count());

  const double r2 = r * r;
  const int reach = static_cast<int>(std::floor(r));
  for (int u = 0; u < query.token_count(); ++u) {
    const Coord center = map_coords(query.coord(u), query, key);
    auto& list = table.neighbors[u];
    const int r0 = std::max(0, center.row - reach);
    const int r1 = std::min(key.rows - 1, center.row + reach);
    const int c0 = std::max(0, center.col - reach);
    const int c1 = std::min(key.cols - 1, center.col + reach);
    for (int kr = r0; kr <= r1; ++kr) {
      const double dr = kr - center.row;
      for (int kc = c0; kc <= c1; ++kc) {
        const double dc = kc - center.col;
        if (dr * dr + dc * dc <= r2) list.push_back(key.index({kr, kc}));
      }
    }
  }
  return table;
}

std::size_t NeighborhoodTable::total_pairs() const {
  std::size_t n = 0;
  for (const auto& list : neighbors) n += list.size();
  return n;
}

}  // namespace irfuse::grid
