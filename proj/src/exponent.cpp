#include "abelian/exponent.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>

namespace abelian {

Exponent::Exponent(std::uint32_t num, std::uint32_t den, bool plus)
    : num_(num), den_(den), plus_(plus) {
  if (den == 0) throw std::invalid_argument("exponent denominator is zero");
  if (num <= den) throw std::invalid_argument("exponent must exceed 1");
  std::uint32_t g = std::gcd(num, den);
  num_ /= g;
  den_ /= g;
}

namespace {

std::uint32_t parse_component(std::string_view text) {
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw std::invalid_argument("malformed exponent component '" +
                                std::string(text) + "'");
  return value;
}

}  // namespace

Exponent Exponent::parse(std::string_view text, bool* normalized) {
  bool plus = false;
  if (!text.empty() && text.back() == '+') {
    plus = true;
    text.remove_suffix(1);
  }
  std::uint32_t num = 0;
  std::uint32_t den = 1;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    num = parse_component(text.substr(0, slash));
    den = parse_component(text.substr(slash + 1));
  } else {
    num = parse_component(text);
  }
  if (den == 0) throw std::invalid_argument("exponent denominator is zero");
  if (normalized) *normalized = std::gcd(num, den) != 1;
  return Exponent(num, den, plus);
}

std::string Exponent::to_string() const {
  std::string out = std::to_string(num_);
  if (den_ != 1) out += "/" + std::to_string(den_);
  if (plus_) out += "+";
  return out;
}

std::strong_ordering operator<=>(const Exponent& a, const Exponent& b) {
  auto lhs = static_cast<std::uint64_t>(a.num_) * b.den_;
  auto rhs = static_cast<std::uint64_t>(b.num_) * a.den_;
  if (auto c = lhs <=> rhs; c != 0) return c;
  return a.plus_ <=> b.plus_;
}

std::uint64_t min_extension(std::uint64_t base, std::uint64_t fixed,
                            const Exponent& alpha) noexcept {
  // (fixed + t) * q  >=  p * base   (strict for plus)
  auto need = static_cast<__int128>(base) * alpha.num() -
              static_cast<__int128>(fixed) * alpha.den();
  if (alpha.plus()) {
    if (need < 0) return 0;
    return static_cast<std::uint64_t>(need / alpha.den() + 1);
  }
  if (need <= 0) return 0;
  return static_cast<std::uint64_t>((need + alpha.den() - 1) / alpha.den());
}

}  // namespace abelian
