#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "abelian/word.hpp"

namespace abelian {

/// Letter counts of a word over a sigma-letter alphabet. Fixed capacity so
/// that hot loops never allocate.
class ParikhVector {
 public:
  explicit ParikhVector(unsigned sigma) : sigma_(sigma) {}

  static ParikhVector of(std::span<const Letter> letters, unsigned sigma);

  unsigned sigma() const noexcept { return sigma_; }

  std::uint32_t operator[](unsigned a) const noexcept { return counts_[a]; }
  std::uint32_t& operator[](unsigned a) noexcept { return counts_[a]; }

  std::uint64_t total() const noexcept;
  bool is_zero() const noexcept { return total() == 0; }

  /// Componentwise >=.
  bool dominates(const ParikhVector& other) const noexcept;

  std::vector<std::uint32_t> to_vector() const;

  friend bool operator==(const ParikhVector& a, const ParikhVector& b) noexcept;

 private:
  std::array<std::uint32_t, kMaxSigma> counts_{};
  unsigned sigma_;
};

}  // namespace abelian
