#pragma once

// Letters, words and their text form.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace abelian {

using Letter = std::uint8_t;

/// Largest supported alphabet.
inline constexpr unsigned kMaxSigma = 16;

/// Set of letters as a bitmask; bit a stands for letter a.
using LetterSet = std::uint16_t;

/// A finite word over {0, ..., sigma-1}, extensible and shrinkable at the
/// right end only. Positions are 1-based: at(1) is the first letter.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}

  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }

  Letter at(std::size_t pos) const { return letters_[pos - 1]; }
  Letter back() const { return letters_.back(); }

  void push(Letter a) { letters_.push_back(a); }
  Letter pop() {
    Letter a = letters_.back();
    letters_.pop_back();
    return a;
  }
  void clear() noexcept { letters_.clear(); }

  std::span<const Letter> letters() const noexcept { return letters_; }

  bool operator==(const Word&) const = default;
  auto operator<=>(const Word&) const = default;

 private:
  std::vector<Letter> letters_;
};

/// Parses 'a'..'p' into letters 0..15. Throws std::invalid_argument on any
/// other character or on a letter >= sigma.
Word parse_word(std::string_view text, unsigned sigma = kMaxSigma);

std::string to_string(const Word& w);
std::string to_string(std::span<const Letter> letters);

/// u[n] u[n-1] ... u[1]
Word reverse(const Word& u);

}  // namespace abelian
