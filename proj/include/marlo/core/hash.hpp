#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace marlo {

inline constexpr std::string_view kHashAlgorithmId = "fnv1a64";

/// Incremental 64-bit FNV-1a over an explicit little-endian byte stream.
/// Game states feed their canonical fields through this in a fixed order.
class Fnv1a64 {
 public:
  static constexpr std::uint64_t kOffsetBasis = 14695981039346656037ULL;
  static constexpr std::uint64_t kPrime = 1099511628211ULL;

  constexpr Fnv1a64& byte(std::uint8_t b) {
    hash_ ^= b;
    hash_ *= kPrime;
    return *this;
  }
  constexpr Fnv1a64& u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) byte(static_cast<std::uint8_t>(v >> (8 * i)));
    return *this;
  }
  constexpr Fnv1a64& i64(std::int64_t v) { return u64(static_cast<std::uint64_t>(v)); }
  constexpr Fnv1a64& i32(std::int32_t v) {
    const auto u = static_cast<std::uint32_t>(v);
    for (int i = 0; i < 4; ++i) byte(static_cast<std::uint8_t>(u >> (8 * i)));
    return *this;
  }
  constexpr Fnv1a64& str(std::string_view s) {
    i32(static_cast<std::int32_t>(s.size()));
    for (char c : s) byte(static_cast<std::uint8_t>(c));
    return *this;
  }

  [[nodiscard]] constexpr std::uint64_t digest() const { return hash_; }

 private:
  std::uint64_t hash_ = kOffsetBasis;
};

std::string hash_to_hex(std::uint64_t h);
/// Throws std::invalid_argument on anything but 16 hex digits.
std::uint64_t hash_from_hex(std::string_view hex);

}  // namespace marlo
