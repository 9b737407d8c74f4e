#include "marlo/core/grid.hpp"

#include <stdexcept>

namespace marlo {

std::vector<Cell> resolve_moves(std::span<const Cell> current, std::span<const Cell> intended,
                                const std::vector<bool>& participates) {
  const std::size_t n = current.size();
  if (intended.size() != n || participates.size() != n) throw std::invalid_argument("resolve_moves: size mismatch");
  std::vector<Cell> final_pos(intended.begin(), intended.end());
  for (std::size_t i = 0; i < n; ++i)
    if (!participates[i]) final_pos[i] = current[i];

  auto moving = [&](std::size_t i) { return participates[i] && final_pos[i] != current[i]; };

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!moving(i)) continue;
      bool revert = false;
      for (std::size_t j = 0; j < n && !revert; ++j) {
        if (j == i || !participates[j]) continue;
        if (final_pos[j] == final_pos[i]) {
          // j holds the cell (staying) or is a lower slot contending for it
          if (!moving(j) || j < i) revert = true;
        } else if (moving(j) && final_pos[j] == current[i] && current[j] == final_pos[i]) {
          revert = true;
          final_pos[j] = current[j];
        }
      }
      if (revert) {
        final_pos[i] = current[i];
        changed = true;
      }
    }
  }
  return final_pos;
}

}  // namespace marlo
