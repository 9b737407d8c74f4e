#pragma once

#include "marlo/core/types.hpp"

#include <deque>
#include <span>
#include <vector>

namespace marlo {

struct GridShape {
  int width = 0;
  int height = 0;

  [[nodiscard]] constexpr bool contains(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height; }
  [[nodiscard]] constexpr std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(c.x);
  }
  [[nodiscard]] constexpr std::size_t size() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  friend constexpr bool operator==(const GridShape&, const GridShape&) = default;
  [[nodiscard]] constexpr Cell cell(std::size_t i) const {
    return {static_cast<int>(i % static_cast<std::size_t>(width)), static_cast<int>(i / static_cast<std::size_t>(width))};
  }
};

inline constexpr int kUnreachable = -1;

/// Breadth-first distances from `source` over cells accepted by `passable`.
/// The source itself is always expanded.
template <class Passable>
std::vector<int> bfs_distances(GridShape shape, Cell source, Passable&& passable) {
  std::vector<int> dist(shape.size(), kUnreachable);
  if (!shape.contains(source)) return dist;
  std::deque<Cell> frontier{source};
  dist[shape.index(source)] = 0;
  while (!frontier.empty()) {
    const Cell c = frontier.front();
    frontier.pop_front();
    const int d = dist[shape.index(c)];
    for (Direction dir : kDirections) {
      const Cell n = neighbor(c, dir);
      if (!shape.contains(n) || dist[shape.index(n)] != kUnreachable || !passable(n)) continue;
      dist[shape.index(n)] = d + 1;
      frontier.push_back(n);
    }
  }
  return dist;
}

/// Simultaneous movement with a total order. Agents that do not participate are ignored.
/// Two movers into one cell: lowest slot wins. Moving into a cell whose occupant stays,
/// or swapping with another mover, leaves the mover in place. Moving into a cell being
/// vacated is allowed.
std::vector<Cell> resolve_moves(std::span<const Cell> current, std::span<const Cell> intended,
                                const std::vector<bool>& participates);

}  // namespace marlo
