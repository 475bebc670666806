#pragma once

#include <cstddef>
#include <vector>

namespace irfuse::grid {

struct Coord {
  int row = 0;
  int col = 0;

  bool operator==(const Coord&) const = default;
};

// The 2D lattice of encoder patch positions, enumerated in raster order.
struct PatchGrid {
  int rows = 0;
  int cols = 0;

  int token_count() const { return rows * cols; }
  Coord coord(int index) const { return {index / cols, index % cols}; }
  int index(Coord c) const { return c.row * cols + c.col; }
  bool contains(Coord c) const { return c.row >= 0 && c.row < rows && c.col >= 0 && c.col < cols; }
  // Longest distance between two patch centers, in patch units.
  double diameter() const;

  bool operator==(const PatchGrid&) const = default;
};

// rows = height/patch, cols = width/patch. Throws unless patch divides both.
PatchGrid grid_from_image(int height_px, int width_px, int patch_px);

// Maps a coordinate from src onto dst by normalized patch-center scaling
// with nearest-integer rounding, clamped to the destination grid. Identity
// when the grids match. Throws if p is off-grid.
Coord map_coords(Coord p, const PatchGrid& src, const PatchGrid& dst);

// Per-query lists of key indices within Euclidean radius r of the mapped
// query position. Lists are sorted and duplicate-free; borders truncate
// naturally (only in-grid keys appear).
struct NeighborhoodTable {
  double radius = 0.0;
  PatchGrid query_grid;
  PatchGrid key_grid;
  std::vector<std::vector<int>> neighbors;

  std::size_t total_pairs() const;
};

NeighborhoodTable build_neighborhood(const PatchGrid& query, const PatchGrid& key, double r);

}  // namespace irfuse::grid
