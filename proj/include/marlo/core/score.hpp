#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace marlo {

/// Fixed-point score: 1 point = 100 centipoints, so 0.2, 0.25 and 0.5 are exact.
class Centipoints {
 public:
  constexpr Centipoints() = default;
  constexpr explicit Centipoints(std::int64_t value) : value_(value) {}

  [[nodiscard]] constexpr std::int64_t value() const { return value_; }
  [[nodiscard]] constexpr double points() const { return static_cast<double>(value_) / 100.0; }

  /// Nearest centipoint to a decimal point value (I/O boundary only).
  static Centipoints from_points(double points);

  /// Decimal rendering without trailing zeros: "1", "0.2", "-0.25".
  [[nodiscard]] std::string to_decimal() const;

  constexpr Centipoints& operator+=(Centipoints rhs) {
    value_ += rhs.value_;
    return *this;
  }
  constexpr Centipoints& operator-=(Centipoints rhs) {
    value_ -= rhs.value_;
    return *this;
  }
  friend constexpr Centipoints operator+(Centipoints a, Centipoints b) { return Centipoints{a.value_ + b.value_}; }
  friend constexpr Centipoints operator-(Centipoints a, Centipoints b) { return Centipoints{a.value_ - b.value_}; }
  friend constexpr Centipoints operator-(Centipoints a) { return Centipoints{-a.value_}; }
  friend constexpr Centipoints operator*(std::int64_t k, Centipoints a) { return Centipoints{k * a.value_}; }
  friend constexpr auto operator<=>(Centipoints, Centipoints) = default;

 private:
  std::int64_t value_ = 0;
};

}  // namespace marlo
