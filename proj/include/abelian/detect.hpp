#pragma once

// Right-end detectors of Abelian repetitions. Each detector decides whether
// the current word of an IncrementalIndex is free, assuming every proper
// prefix already is (the search invariant). The oracle works from the
// definition of strong Abelian powers and has no such precondition.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "abelian/exponent.hpp"
#include "abelian/index.hpp"
#include "abelian/word.hpp"

namespace abelian {

enum class DetectorKind {
  SmallGeneric,  // cover jumps, 1 < alpha <= 2
  SmallDict,     // dictionary of factors, alpha < 2 depending on the patch
  BigForward,    // 2 < alpha < 3 (Abelian squares) or 3 < alpha < 4 (cubes)
  BigDual,       // same ranges, detects reversed powers
  Oracle,        // brute force from the definition
};

/// How the dictionary detector steps past overlapping occurrences.
enum class DictPatch {
  None,        // alpha <= 3/2
  Half,        // alpha = (3/2)+: skip an occurrence starting at i - len/2
  NonOverlap,  // alpha < 2: walk back to the closest non-overlapping one
};

/// Locates the forbidden suffix found by a detector, u = ... x y z with
/// x = u[x_first..x_last] and z = u[z_first..n]. For the dual detector x
/// precedes the blocks equivalent to z; otherwise x is equivalent to z.
struct SuffixFactorization {
  Pos x_first = 0;
  Pos x_last = 0;
  Pos z_first = 0;
  Pos n = 0;

  bool operator==(const SuffixFactorization&) const = default;
};

/// Work counters, accumulated across calls.
struct DetectorStats {
  std::uint64_t calls = 0;
  std::uint64_t inner_iterations = 0;
  std::uint64_t processed_suffixes = 0;
};

bool alphafree_small(const IncrementalIndex& index, const Exponent& alpha,
                     SuffixFactorization* witness = nullptr,
                     DetectorStats* stats = nullptr);

/// Requires an index built with the dictionary enabled.
bool alphafree_dict(const IncrementalIndex& index, const Exponent& alpha,
                    DictPatch patch, SuffixFactorization* witness = nullptr,
                    DetectorStats* stats = nullptr);

bool alphafree_big(const IncrementalIndex& index, const Exponent& alpha,
                   SuffixFactorization* witness = nullptr,
                   DetectorStats* stats = nullptr);

bool dual_alphafree(const IncrementalIndex& index, const Exponent& alpha,
                    SuffixFactorization* witness = nullptr,
                    DetectorStats* stats = nullptr);

/// Definition-based check: no factor of u (of reverse(u) when dual) is a
/// strong beta-A-power with beta reaching alpha. Throws std::length_error
/// when |u| > max_length.
bool oracle_freeness(const Word& u, const Exponent& alpha, bool dual,
                     std::size_t max_length = 64);

/// Same definition restricted to factors that end at the last letter of u;
/// equivalent to oracle_freeness when all proper prefixes of u are free.
bool oracle_suffix_freeness(const Word& u, const Exponent& alpha, bool dual,
                            std::size_t max_length = 64);

/// Whether letters[0..m) is a strong (m/period)-A-power.
bool is_strong_power(std::span<const Letter> letters, std::size_t period);

/// A detector bound to an exponent; construction rejects exponents outside
/// the algorithm's range with std::invalid_argument.
class Detector {
 public:
  Detector(DetectorKind kind, Exponent alpha, DictPatch patch = DictPatch::None);

  /// Brute-force detector; dual compares reversals.
  static Detector oracle(const Exponent& alpha, bool dual);

  /// Picks the fastest admissible detector for alpha.
  static Detector automatic(const Exponent& alpha, bool dual = false);

  /// Parses "small", "dict", "dict-half", "dict-nonoverlap", "big", "dual",
  /// "oracle" or "auto".
  static Detector from_name(std::string_view name, const Exponent& alpha,
                            bool dual = false);

  DetectorKind kind() const noexcept { return kind_; }
  DictPatch patch() const noexcept { return patch_; }
  const Exponent& alpha() const noexcept { return alpha_; }
  bool needs_dictionary() const noexcept {
    return kind_ == DetectorKind::SmallDict;
  }
  /// Whether the detector recognizes reversed (dual) powers.
  bool dual() const noexcept { return dual_; }
  std::string name() const;

  bool is_free(const IncrementalIndex& index,
               SuffixFactorization* witness = nullptr,
               DetectorStats* stats = nullptr) const;

  friend bool operator==(const Detector&, const Detector&) = default;

 private:
  DetectorKind kind_;
  Exponent alpha_;
  DictPatch patch_;
  bool dual_;
};

/// True iff alpha is in the detector's admissible range.
bool admissible(DetectorKind kind, const Exponent& alpha,
                DictPatch patch = DictPatch::None);

/// Number of equivalent blocks the big detectors look for: 2 for
/// 2 < alpha < 3, 3 for 3 < alpha < 4.
unsigned block_count(const Exponent& alpha);

/// Re-evaluates the defining conditions of the violation on the word.
bool witness_confirms(const Word& u, const Detector& detector,
                      const SuffixFactorization& witness);

/// Pushes a and keeps it iff the extended word is free.
bool extend_check(IncrementalIndex& index, Letter a, const Detector& detector,
                  DetectorStats* stats = nullptr);

}  // namespace abelian
