#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace abelian {

/// An avoidance threshold: a reduced fraction p/q > 1, optionally marked
/// "plus". A plain threshold forbids ratios >= p/q, a plus threshold forbids
/// ratios > p/q. All comparisons are done on integer cross products.
class Exponent {
 public:
  /// Reduces num/den. Throws std::invalid_argument unless num > den >= 1.
  Exponent(std::uint32_t num, std::uint32_t den, bool plus = false);

  /// Accepts "p/q", "p/q+", "p" and "p+". If `normalized` is non-null it is
  /// set to true when the input fraction was not already in lowest terms.
  static Exponent parse(std::string_view text, bool* normalized = nullptr);

  constexpr std::uint32_t num() const noexcept { return num_; }
  constexpr std::uint32_t den() const noexcept { return den_; }
  constexpr bool plus() const noexcept { return plus_; }

  std::string to_string() const;

  /// Order on extended rationals: a < a+ < anything greater than a.
  friend std::strong_ordering operator<=>(const Exponent& a, const Exponent& b);
  friend bool operator==(const Exponent& a, const Exponent& b) = default;

 private:
  std::uint32_t num_;
  std::uint32_t den_;
  bool plus_;
};

/// True iff the ratio length/base reaches the threshold, i.e. a factor of
/// that length with that period is forbidden.
inline bool exponent_at_least(std::uint64_t length, std::uint64_t base,
                                 const Exponent& alpha) noexcept {
  auto lhs = static_cast<unsigned __int128>(length) * alpha.den();
  auto rhs = static_cast<unsigned __int128>(base) * alpha.num();
  return alpha.plus() ? lhs > rhs : lhs >= rhs;
}

/// Smallest t >= 0 such that exponent_at_least(fixed + t, base, alpha).
std::uint64_t min_extension(std::uint64_t base, std::uint64_t fixed,
                            const Exponent& alpha) noexcept;

}  // namespace abelian
