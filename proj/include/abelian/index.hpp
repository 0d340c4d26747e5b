#pragma once

// Incremental indexes over the current word of a search: prefix letter
// counts, letter positions and the dictionary of factors keyed by Parikh
// vector. Every structure supports push/pop of the last letter.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "abelian/parikh.hpp"
#include "abelian/word.hpp"

namespace abelian {

/// Position in the current word, 1-based. 0 means "none".
using Pos = std::uint32_t;

/// Row i holds the Parikh vector of u[1..i]; row 0 is all zeros.
class PrefixCountTable {
 public:
  explicit PrefixCountTable(unsigned sigma);

  unsigned sigma() const noexcept { return sigma_; }
  std::size_t length() const noexcept { return rows_.size() / sigma_ - 1; }

  /// Occurrences of a in u[1..i].
  std::uint32_t count(Letter a, std::size_t i) const noexcept {
    return rows_[i * sigma_ + a];
  }
  const std::uint32_t* row(std::size_t i) const noexcept {
    return rows_.data() + i * sigma_;
  }

  void push(Letter a);
  void pop();

  bool operator==(const PrefixCountTable&) const = default;

 private:
  unsigned sigma_;
  std::vector<std::uint32_t> rows_;
};

/// occurrence(a, k) is the position of the k-th occurrence of a (k >= 1).
class LetterPositionTable {
 public:
  explicit LetterPositionTable(unsigned sigma) : positions_(sigma) {}

  std::size_t occurrences(Letter a) const noexcept {
    return positions_[a].size();
  }
  Pos occurrence(Letter a, std::size_t k) const noexcept {
    return positions_[a][k - 1];
  }
  /// Position of the last occurrence of a, or 0.
  Pos last(Letter a) const noexcept {
    return positions_[a].empty() ? 0 : positions_[a].back();
  }

  /// occurrence(a, k) == data(a)[k - 1]
  const Pos* data(Letter a) const noexcept { return positions_[a].data(); }

  void push(Letter a, Pos position) { positions_[a].push_back(position); }
  void pop(Letter a) { positions_[a].pop_back(); }

  bool operator==(const LetterPositionTable&) const = default;

 private:
  std::vector<std::vector<Pos>> positions_;
};

/// Factors of a word grouped by Parikh vector. For every key the start
/// positions of its occurrences form an increasing list; only the last
/// element is directly addressable and each occurrence links to its
/// predecessor in O(1).
///
/// Keys are open-addressed by a linear hash of the Parikh vector
/// (sum of count * K[letter]), so a suffix's hash is updated in O(1) as the
/// suffix grows to the left. A slot stores the key's length and its last
/// occurrence; equality is confirmed against the prefix count table, so no
/// vector is stored per key.
class SuffixDictionary {
 public:
  explicit SuffixDictionary(unsigned sigma);

  static std::uint64_t letter_hash(Letter a) noexcept { return kLetterHash[a]; }

  /// Registers the occurrences u[s..end] for s = end, ..., 1.
  void add_suffixes(const Word& w, const PrefixCountTable& counts, Pos end);
  /// Removes the occurrences u[s..end]; they must be the newest of their
  /// keys, i.e. no factor ending after `end` is present.
  void remove_suffixes(const Word& w, const PrefixCountTable& counts, Pos end);

  /// Start of the last occurrence of a factor with Parikh vector p (whose
  /// hash and length are given), or 0.
  Pos last(const ParikhVector& p, std::uint64_t hash, std::uint32_t length,
           const PrefixCountTable& counts) const noexcept;

  /// Start of the previous occurrence of the same key, or 0.
  Pos previous(Pos start, std::uint32_t length) const noexcept {
    Pos end = start + length - 1;
    return pred_[offset(end) + start - 1];
  }

  std::size_t keys() const noexcept { return used_; }
  bool empty() const noexcept { return used_ == 0; }

  /// Key -> increasing start positions, restricted to occurrences ending at
  /// or before `upto`. Keys with no such occurrence are omitted.
  std::map<std::vector<std::uint32_t>, std::vector<Pos>> contents(
      const PrefixCountTable& counts, Pos upto) const;

 private:
  struct Slot {
    std::uint64_t hash = 0;
    Pos last = 0;
    std::uint32_t length = 0;  // 0 marks an empty slot
  };

  static const std::uint64_t kLetterHash[kMaxSigma];

  static std::size_t offset(Pos end) noexcept {
    return static_cast<std::size_t>(end) * (end - 1) / 2;
  }
  static std::uint64_t mix(std::uint64_t h) noexcept {
    h ^= h >> 31;
    h *= 0x7fb5d329728ea185ULL;
    h ^= h >> 27;
    h *= 0x81dadef4bc2dd44dULL;
    h ^= h >> 33;
    return h;
  }

  bool matches(const Slot& s, const ParikhVector& p, std::uint64_t hash,
               std::uint32_t length,
               const PrefixCountTable& counts) const noexcept;
  /// Slot holding the key, or the empty slot that ends its probe sequence.
  std::size_t find_slot(const ParikhVector& p, std::uint64_t hash,
                        std::uint32_t length,
                        const PrefixCountTable& counts) const noexcept;
  void erase_slot(std::size_t idx) noexcept;
  void grow();

  unsigned sigma_;
  std::vector<Slot> slots_;
  std::size_t mask_;
  std::size_t used_ = 0;
  std::vector<Pos> pred_;
};

/// The word of a search node together with all structures the detectors
/// read. Single owner; not thread-safe.
///
/// With the dictionary enabled, after a push to length n the dictionary
/// holds exactly the factors of u[1..n-1]. A pop keeps the suffixes of the
/// remaining word registered, so that testing sibling extensions costs no
/// dictionary updates; lookups through dictionary_last() never report
/// those retained occurrences.
class IncrementalIndex {
 public:
  explicit IncrementalIndex(unsigned sigma, bool with_dictionary = false);

  unsigned sigma() const noexcept { return sigma_; }
  std::size_t size() const noexcept { return word_.size(); }
  const Word& word() const noexcept { return word_; }
  Letter at(Pos i) const noexcept { return word_.at(i); }

  const PrefixCountTable& counts() const noexcept { return counts_; }
  const LetterPositionTable& positions() const noexcept { return positions_; }

  /// Throws std::invalid_argument if a >= sigma.
  void push(Letter a);
  /// Throws std::logic_error on the empty word.
  Letter pop();

  /// Parikh vector of u[i..j]; j = i - 1 gives the empty factor.
  /// Throws std::out_of_range unless 1 <= i <= j + 1 <= n + 1.
  ParikhVector parikh(Pos i, Pos j) const;

  /// Largest i with Psi(u[i..j]) >= p, or 0 if there is none.
  /// Throws std::invalid_argument for the zero vector and std::out_of_range
  /// unless 1 <= j <= n.
  Pos cover(const ParikhVector& p, Pos j) const;

  /// Unchecked cover for detector loops: p nonzero, 0 <= j <= n.
  Pos cover_unchecked(const ParikhVector& p, Pos j) const noexcept {
    const std::uint32_t* row = counts_.row(j);
    Pos best = 0;
    bool first = true;
    for (unsigned a = 0; a < sigma_; ++a) {
      std::uint32_t need = p[a];
      if (need == 0) continue;
      std::uint32_t have = row[a];
      if (have < need) return 0;
      Pos at = positions_.occurrence(static_cast<Letter>(a), have - need + 1);
      if (first || at < best) {
        best = at;
        first = false;
      }
    }
    return best;
  }

  /// Unchecked Parikh vector of u[i..j] for detector loops.
  void parikh_into(Pos i, Pos j, ParikhVector& out) const noexcept {
    const std::uint32_t* hi = counts_.row(j);
    const std::uint32_t* lo = counts_.row(i - 1);
    for (unsigned a = 0; a < sigma_; ++a) out[a] = hi[a] - lo[a];
  }

  bool has_dictionary() const noexcept { return dict_.has_value(); }
  /// Drops the dictionary and its memory; subsequent pushes skip it.
  void disable_dictionary() noexcept;

  /// Start of the last occurrence, among factors of u[1..n-1], of a factor
  /// with Parikh vector p and the given hash/length. 0 if none.
  Pos dictionary_last(const ParikhVector& p, std::uint64_t hash,
                      std::uint32_t length) const noexcept {
    Pos pos = dict_->last(p, hash, length, counts_);
    // A retained suffix of the whole word ends at n; skip it.
    if (pos != 0 && dict_end_ == size() && pos + length - 1 == size())
      pos = dict_->previous(pos, length);
    return pos;
  }
  Pos dictionary_previous(Pos start, std::uint32_t length) const noexcept {
    return dict_->previous(start, length);
  }

  /// Logical dictionary contents: factors of u[1..n-1] only.
  std::map<std::vector<std::uint32_t>, std::vector<Pos>> dictionary_contents()
      const;

 private:
  unsigned sigma_;
  Word word_;
  PrefixCountTable counts_;
  LetterPositionTable positions_;
  std::optional<SuffixDictionary> dict_;
  Pos dict_end_ = 0;  // all factors ending at or before dict_end_ are present
};

}  // namespace abelian
