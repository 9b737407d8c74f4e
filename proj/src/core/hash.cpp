#include "marlo/core/hash.hpp"

#include <stdexcept>

namespace marlo {

std::string hash_to_hex(std::uint64_t h) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[h & 0xF];
    h >>= 4;
  }
  return out;
}

std::uint64_t hash_from_hex(std::string_view hex) {
  if (hex.size() != 16) throw std::invalid_argument("state hash must be 16 hex digits");
  std::uint64_t h = 0;
  for (char c : hex) {
    h <<= 4;
    if (c >= '0' && c <= '9') h |= static_cast<std::uint64_t>(c - '0');
    else if (c >= 'a' && c <= 'f') h |= static_cast<std::uint64_t>(c - 'a' + 10);
    else throw std::invalid_argument("state hash contains non-hex digit");
  }
  return h;
}

}  // namespace marlo
