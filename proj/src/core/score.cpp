#include "marlo/core/score.hpp"

#include <cmath>
#include <cstdlib>

namespace marlo {

Centipoints Centipoints::from_points(double points) {
  return Centipoints{static_cast<std::int64_t>(std::llround(points * 100.0))};
}

std::string Centipoints::to_decimal() const {
  const std::int64_t magnitude = value_ < 0 ? -value_ : value_;
  std::string out = value_ < 0 ? "-" : "";
  out += std::to_string(magnitude / 100);
  std::int64_t frac = magnitude % 100;
  if (frac != 0) {
    out += '.';
    out += static_cast<char>('0' + frac / 10);
    if (frac % 10 != 0) out += static_cast<char>('0' + frac % 10);
  }
  return out;
}

}  // namespace marlo
