#include "abelian/word.hpp"

#include <algorithm>
#include <stdexcept>

namespace abelian {

Word parse_word(std::string_view text, unsigned sigma) {
  std::vector<Letter> letters;
  letters.reserve(text.size());
  for (char ch : text) {
    if (ch < 'a' || ch >= static_cast<char>('a' + kMaxSigma))
      throw std::invalid_argument("invalid letter '" + std::string(1, ch) +
                                  "' in word");
    auto a = static_cast<Letter>(ch - 'a');
    if (a >= sigma)
      throw std::invalid_argument("letter '" + std::string(1, ch) +
                                  "' outside alphabet of size " +
                                  std::to_string(sigma));
    letters.push_back(a);
  }
  return Word(std::move(letters));
}

std::string to_string(std::span<const Letter> letters) {
  std::string out;
  out.reserve(letters.size());
  for (Letter a : letters) out.push_back(static_cast<char>('a' + a));
  return out;
}

std::string to_string(const Word& w) { return to_string(w.letters()); }

Word reverse(const Word& u) {
  std::vector<Letter> letters(u.letters().begin(), u.letters().end());
  std::reverse(letters.begin(), letters.end());
  return Word(std::move(letters));
}

}  // namespace abelian
