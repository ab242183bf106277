#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace reconf {

/// Exact non-negative rational with 64-bit parts. Comparisons cross-multiply
/// in 128-bit arithmetic, so no value is ever rounded.
class Ratio {
 public:
  constexpr Ratio() = default;
  constexpr Ratio(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    if (den <= 0) throw std::invalid_argument("Ratio: denominator must be positive");
  }

  constexpr std::int64_t num() const { return num_; }
  constexpr std::int64_t den() const { return den_; }

  Ratio reduced() const {
    const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    return g == 0 ? Ratio(0, 1) : Ratio(num_ / g, den_ / g);
  }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// "num/den" in lowest terms.
  std::string str() const {
    const Ratio r = reduced();
    return std::to_string(r.num_) + "/" + std::to_string(r.den_);
  }

  friend constexpr std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  friend constexpr bool operator==(const Ratio& a, const Ratio& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }

  friend Ratio operator+(const Ratio& a, const Ratio& b) {
    return Ratio(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_).reduced();
  }
  friend Ratio operator-(const Ratio& a, const Ratio& b) {
    return Ratio(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_).reduced();
  }
  friend Ratio operator*(const Ratio& a, const Ratio& b) {
    return Ratio(a.num_ * b.num_, a.den_ * b.den_).reduced();
  }

  friend std::ostream& operator<<(std::ostream& os, const Ratio& r) { return os << r.str(); }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace reconf
