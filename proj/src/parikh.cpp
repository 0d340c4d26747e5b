#include "abelian/parikh.hpp"

namespace abelian {

ParikhVector ParikhVector::of(std::span<const Letter> letters, unsigned sigma) {
  ParikhVector p(sigma);
  for (Letter a : letters) ++p.counts_[a];
  return p;
}

std::uint64_t ParikhVector::total() const noexcept {
  std::uint64_t sum = 0;
  for (unsigned a = 0; a < sigma_; ++a) sum += counts_[a];
  return sum;
}

bool ParikhVector::dominates(const ParikhVector& other) const noexcept {
  for (unsigned a = 0; a < sigma_; ++a)
    if (counts_[a] < other.counts_[a]) return false;
  return true;
}

std::vector<std::uint32_t> ParikhVector::to_vector() const {
  return {counts_.begin(), counts_.begin() + sigma_};
}

bool operator==(const ParikhVector& a, const ParikhVector& b) noexcept {
  if (a.sigma_ != b.sigma_) return false;
  for (unsigned i = 0; i < a.sigma_; ++i)
    if (a.counts_[i] != b.counts_[i]) return false;
  return true;
}

}  // namespace abelian
