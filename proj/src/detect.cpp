#include "abelian/detect.hpp"

#include <array>
#include <bit>
#include <stdexcept>
#include <vector>

namespace abelian {

namespace {

const Exponent kTwo(2, 1);
const Exponent kThree(3, 1);
const Exponent kFour(4, 1);
const Exponent kThreeHalves(3, 2);
const Exponent kThreeHalvesPlus(3, 2, true);

void require(bool ok, DetectorKind kind, const Exponent& alpha) {
  if (ok) return;
  const char* name = "oracle";
  switch (kind) {
    case DetectorKind::SmallGeneric: name = "small"; break;
    case DetectorKind::SmallDict: name = "dict"; break;
    case DetectorKind::BigForward: name = "big"; break;
    case DetectorKind::BigDual: name = "dual"; break;
    case DetectorKind::Oracle: break;
  }
  throw std::invalid_argument("exponent " + alpha.to_string() +
                              " outside the range of detector '" + name + "'");
}

// Psi(u[first..first+z)) == ... for `parts` consecutive blocks of length z.
bool equal_blocks(const IncrementalIndex& index, Pos first, Pos z,
                  unsigned parts) {
  const PrefixCountTable& c = index.counts();
  const unsigned sigma = index.sigma();
  const std::uint32_t* r0 = c.row(first - 1);
  const std::uint32_t* r1 = c.row(first + z - 1);
  for (unsigned b = 2; b <= parts; ++b) {
    const std::uint32_t* r2 = c.row(first + b * z - 1);
    for (unsigned a = 0; a < sigma; ++a)
      if (r1[a] - r0[a] != r2[a] - r1[a]) return false;
    r0 = r1;
    r1 = r2;
  }
  return true;
}

void record(SuffixFactorization* witness, Pos x_first, Pos x_last, Pos z_first,
            Pos n) {
  if (witness) *witness = SuffixFactorization{x_first, x_last, z_first, n};
}

}  // namespace

unsigned block_count(const Exponent& alpha) {
  if (alpha > kTwo && alpha < kThree) return 2;
  if (alpha > kThree && alpha < kFour) return 3;
  return 0;
}

bool admissible(DetectorKind kind, const Exponent& alpha, DictPatch patch) {
  switch (kind) {
    case DetectorKind::SmallGeneric:
      return alpha <= kTwo;
    case DetectorKind::SmallDict:
      switch (patch) {
        case DictPatch::None: return alpha <= kThreeHalves;
        case DictPatch::Half: return alpha == kThreeHalvesPlus;
        case DictPatch::NonOverlap: return alpha < kTwo;
      }
      return false;
    case DetectorKind::BigForward:
    case DetectorKind::BigDual:
      return block_count(alpha) != 0;
    case DetectorKind::Oracle:
      return true;
  }
  return false;
}

// Scans suffixes z = u[i..n], shortest first. For each z, the shortest
// v = u[left..right] with Psi(v) >= Psi(z) is found by cover; if |v| = |z|
// then v is an x ~ z, otherwise no x ends after left + |z| - 1 and the
// right bound jumps there. The loop stops once |xyz|/|xy| drops below alpha.
bool alphafree_small(const IncrementalIndex& index, const Exponent& alpha,
                     SuffixFactorization* witness, DetectorStats* stats) {
  require(admissible(DetectorKind::SmallGeneric, alpha), DetectorKind::SmallGeneric,
          alpha);
  if (stats) ++stats->calls;
  const auto n = static_cast<Pos>(index.size());
  if (n < 2) return true;
  const unsigned sigma = index.sigma();
  const LetterPositionTable& occ = index.positions();
  const std::uint32_t* row = index.counts().row(n - 1);
  const std::uint64_t num = alpha.num(), den = alpha.den();
  const bool strict = alpha.plus();
  auto reaches = [&](std::uint64_t length, std::uint64_t base) {
    return strict ? length * den > base * num : length * den >= base * num;
  };
  // Moving from z = u[i..n] to u[i-1..n] moves the letter b = u[i-1] out of
  // the range searched by cover and into z, so only the rank of b changes.
  // rank[a] = (occurrences of a in u[1..i-1]) - |z|_a + 1, and at[a] is the
  // position of that occurrence; cover is the minimum over letters of z.
  std::array<std::int64_t, kMaxSigma> rank{};
  std::array<Pos, kMaxSigma> at{};
  std::array<const Pos*, kMaxSigma> data{};
  for (unsigned a = 0; a < sigma; ++a) {
    data[a] = occ.data(static_cast<Letter>(a));
    rank[a] = std::int64_t{row[a]} + 1;
  }
  // Letters of z in order of appearance, with their counts in z.
  std::array<Letter, kMaxSigma> letters{};
  std::array<std::uint32_t, kMaxSigma> p{};
  unsigned distinct = 0;
  const PrefixCountTable& counts = index.counts();
  std::uint64_t suffixes = 0, iterations = 0;
  auto flush = [&] {
    if (!stats) return;
    stats->processed_suffixes += suffixes;
    stats->inner_iterations += iterations;
  };

  const Pos lowest = 1 + (n + 1) / 2;
  for (Pos i = n; i >= lowest; --i) {
    const Pos len = n - i + 1;
    const Letter b = index.at(i);
    if (p[b]++ == 0) letters[distinct++] = b;
    rank[b] -= i == n ? 1 : 2;
    if (rank[b] < 1) break;
    ++suffixes;
    at[b] = data[b][rank[b] - 1];
    Pos left = n;
    for (unsigned k = 0; k < distinct; ++k) left = std::min(left, at[letters[k]]);
    Pos right = i - 1;
    while (reaches(n - left + 1, i - left)) {
      ++iterations;
      if (right - left + 1 == len) {
        record(witness, left, right, i, n);
        flush();
        return false;
      }
      right = left + len - 1;
      const std::uint32_t* have = counts.row(right);
      left = right;
      for (unsigned k = 0; k < distinct; ++k) {
        const Letter a = letters[k];
        if (have[a] < p[a]) {
          left = 0;
          break;
        }
        left = std::min(left, data[a][have[a] - p[a]]);
      }
      if (left == 0) break;
    }
  }
  flush();
  return true;
}

bool alphafree_dict(const IncrementalIndex& index, const Exponent& alpha,
                    DictPatch patch, SuffixFactorization* witness,
                    DetectorStats* stats) {
  require(admissible(DetectorKind::SmallDict, alpha, patch), DetectorKind::SmallDict,
          alpha);
  if (!index.has_dictionary())
    throw std::logic_error("dictionary detector on an index without dictionary");
  if (stats) ++stats->calls;
  const auto n = static_cast<Pos>(index.size());
  if (n < 2) return true;
  ParikhVector p(index.sigma());
  std::uint64_t hash = 0;
  const Pos lowest = 1 + (n + 1) / 2;
  for (Pos i = n; i >= lowest; --i) {
    const Pos len = n - i + 1;
    const Letter a = index.at(i);
    ++p[a];
    hash += SuffixDictionary::letter_hash(a);
    Pos pos = index.dictionary_last(p, hash, len);
    if (pos == 0) continue;
    if (patch == DictPatch::Half) {
      if (len % 2 == 0 && pos == i - len / 2)
        pos = index.dictionary_previous(pos, len);
    } else if (patch == DictPatch::NonOverlap) {
      while (pos != 0 && pos + len > i) {
        if (stats) ++stats->inner_iterations;
        pos = index.dictionary_previous(pos, len);
      }
    }
    if (pos == 0) continue;
    if (pos + len <= i && exponent_at_least(n - pos + 1, i - pos, alpha)) {
      record(witness, pos, pos + len - 1, i, n);
      return false;
    }
  }
  return true;
}

// Like alphafree_small, but a candidate x ~ z only counts when xy splits into
// `parts` Abelian-equivalent blocks. x may not reach into the first block's
// successors, so the right bound starts (parts - 1)|z| before z.
bool alphafree_big(const IncrementalIndex& index, const Exponent& alpha,
                   SuffixFactorization* witness, DetectorStats* stats) {
  require(admissible(DetectorKind::BigForward, alpha), DetectorKind::BigForward,
          alpha);
  if (stats) ++stats->calls;
  const auto n = static_cast<Pos>(index.size());
  const unsigned parts = block_count(alpha);
  ParikhVector p(index.sigma());
  for (Pos len = 1; (parts + 1) * len <= n; ++len) {
    const Pos i = n - len + 1;
    index.parikh_into(i, n, p);
    Pos right = i - 1 - (parts - 1) * len;
    Pos left = index.cover_unchecked(p, right);
    if (left == 0) break;
    while (exponent_at_least(std::uint64_t{parts} * (n - left + 1), i - left,
                             alpha)) {
      if (stats) ++stats->inner_iterations;
      if (left + len - 1 == right) {
        if ((i - left) % parts == 0 &&
            equal_blocks(index, left, (i - left) / parts, parts)) {
          record(witness, left, right, i, n);
          return false;
        }
        right -= 1;
      } else {
        right = left + len - 1;
      }
      if (right < len) break;
      left = index.cover_unchecked(p, right);
      if (left == 0) break;
    }
  }
  return true;
}

// For each suffix z, first looks for blocks y ~ z directly before it; when
// the shortest cover v of Psi(z) ending at i-1 is longer than z, no suffix
// shorter than |vz|/2 ends with an Abelian square and they are skipped.
// With the blocks found, x must end right before them and be equivalent to
// a suffix of z; candidate lengths jump by the same cover argument.
bool dual_alphafree(const IncrementalIndex& index, const Exponent& alpha,
                    SuffixFactorization* witness, DetectorStats* stats) {
  require(admissible(DetectorKind::BigDual, alpha), DetectorKind::BigDual, alpha);
  if (stats) ++stats->calls;
  const auto n = static_cast<Pos>(index.size());
  const unsigned parts = block_count(alpha);
  ParikhVector p(index.sigma());
  ParikhVector tail(index.sigma());
  Pos i = n;
  while (n >= 1) {
    const Pos len = n - i + 1;
    if (!exponent_at_least(n, len, alpha)) break;
    if (stats) ++stats->processed_suffixes;
    index.parikh_into(i, n, p);
    const Pos left = index.cover_unchecked(p, i - 1);
    if (left != 0 && left + len == i) {
      Pos blocks_start = left;
      bool blocks = true;
      for (unsigned b = 2; b < parts && blocks; ++b) {
        Pos prev = index.cover_unchecked(p, blocks_start - 1);
        if (prev != 0 && prev + len == blocks_start)
          blocks_start = prev;
        else
          blocks = false;
      }
      if (blocks) {
        Pos j = static_cast<Pos>(min_extension(len, std::uint64_t{parts} * len, alpha));
        if (j == 0) j = 1;
        while (j <= len && j < blocks_start) {
          if (stats) ++stats->inner_iterations;
          index.parikh_into(n - j + 1, n, tail);
          const Pos left1 = index.cover_unchecked(tail, blocks_start - 1);
          if (left1 == 0) break;
          if (left1 + j == blocks_start) {
            record(witness, left1, blocks_start - 1, i, n);
            return false;
          }
          j = blocks_start - left1;
        }
      }
      i -= 1;
    } else {
      if (left == 0) break;
      i = (n + left + 1) / 2;
    }
  }
  return true;
}

bool is_strong_power(std::span<const Letter> letters, std::size_t period) {
  const std::size_t m = letters.size();
  if (period == 0 || period >= m) return false;
  std::array<std::uint32_t, kMaxSigma> first{};
  for (std::size_t t = 0; t < period; ++t) ++first[letters[t]];
  const std::size_t blocks = m / period;
  for (std::size_t b = 1; b < blocks; ++b) {
    std::array<std::uint32_t, kMaxSigma> block{};
    for (std::size_t t = b * period; t < (b + 1) * period; ++t) ++block[letters[t]];
    if (block != first) return false;
  }
  const std::size_t rest = m - blocks * period;
  std::array<std::uint32_t, kMaxSigma> tail{};
  std::array<std::uint32_t, kMaxSigma> head{};
  for (std::size_t t = 0; t < rest; ++t) {
    ++head[letters[t]];
    ++tail[letters[blocks * period + t]];
  }
  return head == tail;
}

namespace {

bool factor_is_forbidden(std::span<const Letter> factor, const Exponent& alpha) {
  const std::size_t m = factor.size();
  for (std::size_t period = 1; period < m; ++period) {
    if (!exponent_at_least(m, period, alpha)) break;
    if (is_strong_power(factor, period)) return true;
  }
  return false;
}

}  // namespace

bool oracle_freeness(const Word& u, const Exponent& alpha, bool dual,
                     std::size_t max_length) {
  if (u.size() > max_length)
    throw std::length_error("oracle refuses words longer than " +
                            std::to_string(max_length));
  const Word w = dual ? reverse(u) : u;
  auto letters = w.letters();
  for (std::size_t s = 0; s < letters.size(); ++s)
    for (std::size_t m = 2; s + m <= letters.size(); ++m)
      if (factor_is_forbidden(letters.subspan(s, m), alpha)) return false;
  return true;
}

bool oracle_suffix_freeness(const Word& u, const Exponent& alpha, bool dual,
                            std::size_t max_length) {
  if (u.size() > max_length)
    throw std::length_error("oracle refuses words longer than " +
                            std::to_string(max_length));
  auto letters = u.letters();
  const std::size_t n = letters.size();
  std::vector<Letter> buffer;
  for (std::size_t m = 2; m <= n; ++m) {
    auto factor = letters.subspan(n - m, m);
    if (dual) {
      buffer.assign(factor.rbegin(), factor.rend());
      factor = buffer;
    }
    if (factor_is_forbidden(factor, alpha)) return false;
  }
  return true;
}

// Detector

Detector::Detector(DetectorKind kind, Exponent alpha, DictPatch patch)
    : kind_(kind), alpha_(alpha), patch_(patch),
      dual_(kind == DetectorKind::BigDual) {
  require(admissible(kind, alpha, patch), kind, alpha);
}

Detector Detector::oracle(const Exponent& alpha, bool dual) {
  Detector d(DetectorKind::Oracle, alpha);
  d.dual_ = dual;
  return d;
}

Detector Detector::automatic(const Exponent& alpha, bool dual) {
  if (dual) return Detector(DetectorKind::BigDual, alpha);
  if (alpha <= kThreeHalves) return Detector(DetectorKind::SmallDict, alpha);
  if (alpha == kThreeHalvesPlus)
    return Detector(DetectorKind::SmallDict, alpha, DictPatch::Half);
  if (alpha < kTwo)
    return Detector(DetectorKind::SmallDict, alpha, DictPatch::NonOverlap);
  if (alpha == kTwo) return Detector(DetectorKind::SmallGeneric, alpha);
  return Detector(DetectorKind::BigForward, alpha);
}

Detector Detector::from_name(std::string_view name, const Exponent& alpha,
                             bool dual) {
  if (name == "auto") return automatic(alpha, dual);
  if (dual && name != "dual" && name != "oracle")
    throw std::invalid_argument("detector '" + std::string(name) +
                                "' cannot detect dual powers");
  if (name == "small") return Detector(DetectorKind::SmallGeneric, alpha);
  if (name == "dict") return Detector(DetectorKind::SmallDict, alpha);
  if (name == "dict-half")
    return Detector(DetectorKind::SmallDict, alpha, DictPatch::Half);
  if (name == "dict-nonoverlap")
    return Detector(DetectorKind::SmallDict, alpha, DictPatch::NonOverlap);
  if (name == "big") return Detector(DetectorKind::BigForward, alpha);
  if (name == "dual") return Detector(DetectorKind::BigDual, alpha);
  if (name == "oracle") return oracle(alpha, dual);
  throw std::invalid_argument("unknown detector '" + std::string(name) + "'");
}

std::string Detector::name() const {
  switch (kind_) {
    case DetectorKind::SmallGeneric: return "small";
    case DetectorKind::SmallDict:
      switch (patch_) {
        case DictPatch::None: return "dict";
        case DictPatch::Half: return "dict-half";
        case DictPatch::NonOverlap: return "dict-nonoverlap";
      }
      break;
    case DetectorKind::BigForward: return "big";
    case DetectorKind::BigDual: return "dual";
    case DetectorKind::Oracle:
      return "oracle";
  }
  return "unknown";
}

bool Detector::is_free(const IncrementalIndex& index,
                       SuffixFactorization* witness,
                       DetectorStats* stats) const {
  switch (kind_) {
    case DetectorKind::SmallGeneric:
      return alphafree_small(index, alpha_, witness, stats);
    case DetectorKind::SmallDict:
      return alphafree_dict(index, alpha_, patch_, witness, stats);
    case DetectorKind::BigForward:
      return alphafree_big(index, alpha_, witness, stats);
    case DetectorKind::BigDual:
      return dual_alphafree(index, alpha_, witness, stats);
    case DetectorKind::Oracle:
      if (stats) ++stats->calls;
      return oracle_freeness(index.word(), alpha_, dual_);
  }
  return true;
}

bool witness_confirms(const Word& u, const Detector& detector,
                      const SuffixFactorization& w) {
  const std::size_t n = u.size();
  if (w.n != n || w.x_first < 1 || w.x_first > w.x_last || w.x_last >= w.z_first ||
      w.z_first > n)
    return false;
  auto letters = u.letters();
  auto psi = [&](Pos first, Pos last) {
    return ParikhVector::of(letters.subspan(first - 1, last - first + 1), kMaxSigma);
  };
  const Exponent& alpha = detector.alpha();
  const Pos x_len = w.x_last - w.x_first + 1;
  const Pos z_len = static_cast<Pos>(n) - w.z_first + 1;
  const Pos total = static_cast<Pos>(n) - w.x_first + 1;
  switch (detector.kind()) {
    case DetectorKind::SmallGeneric:
    case DetectorKind::SmallDict:
      return psi(w.x_first, w.x_last) == psi(w.z_first, static_cast<Pos>(n)) &&
             exponent_at_least(total, w.z_first - w.x_first, alpha);
    case DetectorKind::BigForward: {
      const unsigned parts = block_count(alpha);
      const Pos span = w.z_first - w.x_first;
      if (span % parts != 0) return false;
      const Pos block = span / parts;
      if (x_len > block) return false;
      if (!(psi(w.x_first, w.x_last) == psi(w.z_first, static_cast<Pos>(n))))
        return false;
      for (unsigned b = 1; b < parts; ++b)
        if (!(psi(w.x_first + b * block, w.x_first + (b + 1) * block - 1) ==
              psi(w.x_first, w.x_first + block - 1)))
          return false;
      return exponent_at_least(std::uint64_t{parts} * total, span, alpha);
    }
    case DetectorKind::BigDual: {
      const unsigned parts = block_count(alpha);
      if (w.z_first - w.x_last - 1 != (parts - 1) * z_len) return false;
      if (x_len > z_len) return false;
      const ParikhVector z = psi(w.z_first, static_cast<Pos>(n));
      for (unsigned b = 1; b < parts; ++b) {
        Pos first = w.x_last + 1 + (b - 1) * z_len;
        if (!(psi(first, first + z_len - 1) == z)) return false;
      }
      return psi(w.x_first, w.x_last) ==
                 psi(static_cast<Pos>(n) - x_len + 1, static_cast<Pos>(n)) &&
             exponent_at_least(total, z_len, alpha);
    }
    case DetectorKind::Oracle:
      return false;
  }
  return false;
}

bool extend_check(IncrementalIndex& index, Letter a, const Detector& detector,
                  DetectorStats* stats) {
  index.push(a);
  if (detector.is_free(index, nullptr, stats)) return true;
  index.pop();
  return false;
}

}  // namespace abelian
