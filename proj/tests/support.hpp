#pragma once
// Helpers shared by the unit tests and the acceptance runner.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "abelian/detect.hpp"
#include "abelian/index.hpp"

namespace abelian::testing {

/// Every detector whose admissible range contains alpha; with dual set,
/// the detectors of reversed powers.
inline std::vector<Detector> detectors_for(const Exponent& alpha, bool dual) {
  std::vector<Detector> out;
  if (dual) {
    if (admissible(DetectorKind::BigDual, alpha))
      out.emplace_back(DetectorKind::BigDual, alpha);
    return out;
  }
  if (admissible(DetectorKind::SmallGeneric, alpha))
    out.emplace_back(DetectorKind::SmallGeneric, alpha);
  for (auto patch : {DictPatch::None, DictPatch::Half, DictPatch::NonOverlap})
    if (admissible(DetectorKind::SmallDict, alpha, patch))
      out.emplace_back(DetectorKind::SmallDict, alpha, patch);
  if (admissible(DetectorKind::BigForward, alpha))
    out.emplace_back(DetectorKind::BigForward, alpha);
  return out;
}

struct SweepResult {
  std::size_t words = 0;       // words checked per detector
  std::size_t mismatches = 0;  // over all detectors
  std::size_t bad_witnesses = 0;
  std::string first_failure;
};

/// Walks all words of length <= max_length whose proper prefixes are free
/// by the definition and compares each detector with oracle_freeness.
inline SweepResult oracle_sweep(unsigned sigma, const Exponent& alpha, bool dual,
                                std::size_t max_length,
                                const std::vector<Detector>& detectors) {
  SweepResult result;
  IncrementalIndex index(sigma, true);
  std::function<void()> visit = [&] {
    if (index.size() == max_length) return;
    for (Letter a = 0; a < sigma; ++a) {
      index.push(a);
      const bool expected = oracle_freeness(index.word(), alpha, dual);
      ++result.words;
      for (const Detector& d : detectors) {
        SuffixFactorization witness;
        const bool got = d.is_free(index, &witness);
        if (got != expected) {
          if (result.mismatches++ == 0)
            result.first_failure = d.name() + " " + alpha.to_string() + " " +
                                   to_string(index.word());
        } else if (!got && !witness_confirms(index.word(), d, witness)) {
          if (result.bad_witnesses++ == 0 && result.first_failure.empty())
            result.first_failure = "witness " + d.name() + " " +
                                   to_string(index.word());
        }
      }
      if (expected) visit();
      index.pop();
    }
  };
  visit();
  return result;
}

}  // namespace abelian::testing
