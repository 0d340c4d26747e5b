#include <functional>
#include <random>
#include <stdexcept>

#include "abelian/detect.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace abelian;

namespace {

IncrementalIndex build(const std::string& text, unsigned sigma) {
  IncrementalIndex index(sigma, true);
  const Word w = parse_word(text, sigma);
  for (Letter a : w.letters()) index.push(a);
  return index;
}

bool free_by(const Detector& d, const std::string& text, unsigned sigma,
             SuffixFactorization* witness = nullptr) {
  return d.is_free(build(text, sigma), witness);
}

bool prefixes_free(const Detector& d, const std::string& text, unsigned sigma) {
  IncrementalIndex index(sigma, true);
  const Word w = parse_word(text, sigma);
  for (std::size_t i = 1; i < w.size(); ++i) {
    index.push(w.at(i));
    if (!d.is_free(index)) return false;
  }
  return true;
}

Exponent ex(const char* text) { return Exponent::parse(text); }

}  // namespace

TEST_CASE("cover-jump detector") {
  const Detector d(DetectorKind::SmallGeneric, ex("3/2"));
  SuffixFactorization w;
  CHECK_FALSE(free_by(d, "abcdebdaec", 5, &w));
  CHECK(w == SuffixFactorization{1, 5, 6, 10});
  CHECK(witness_confirms(parse_word("abcdebdaec"), d, w));
  CHECK(prefixes_free(d, "abcdebdaec", 5));
  CHECK(free_by(d, "abcdebdae", 5));
  CHECK_FALSE(free_by(d, "aa", 2));
  CHECK(free_by(d, "", 2));
  CHECK(free_by(d, "a", 2));
  CHECK_THROWS_AS(Detector(DetectorKind::SmallGeneric, ex("2+")), std::invalid_argument);
}

TEST_CASE("dictionary detector and its patches") {
  SUBCASE("half patch finds the square behind an overlapping occurrence") {
    const Detector d(DetectorKind::SmallDict, ex("3/2+"), DictPatch::Half);
    SuffixFactorization w;
    CHECK(prefixes_free(d, "abcdbadc", 4));
    CHECK_FALSE(free_by(d, "abcdbadc", 4, &w));
    CHECK(w.x_first == 1);
    CHECK(w.x_last == 4);
    CHECK(w.z_first == 5);
    CHECK(witness_confirms(parse_word("abcdbadc"), d, w));
  }
  SUBCASE("unpatched at 3/2 detects the short suffix first") {
    const Detector d(DetectorKind::SmallDict, ex("3/2"));
    SuffixFactorization w;
    CHECK_FALSE(free_by(d, "abcdbadc", 4, &w));
    CHECK(w.z_first == 7);
    CHECK(w.x_first == 3);
    CHECK(!oracle_freeness(parse_word("abcdbadc"), ex("3/2"), false));
  }
  SUBCASE("short words") {
    for (const char* a : {"6/5", "4/3+", "3/2"})
      CHECK(free_by(Detector(DetectorKind::SmallDict, ex(a)), "ab", 2));
    CHECK(free_by(Detector(DetectorKind::SmallDict, ex("9/5+"), DictPatch::NonOverlap),
                  "ab", 2));
  }
  SUBCASE("patch and exponent must match") {
    CHECK_THROWS_AS(Detector(DetectorKind::SmallDict, ex("3/2+")), std::invalid_argument);
    CHECK_THROWS_AS(Detector(DetectorKind::SmallDict, ex("3/2"), DictPatch::Half),
                    std::invalid_argument);
    CHECK_THROWS_AS(Detector(DetectorKind::SmallDict, ex("2"), DictPatch::NonOverlap),
                    std::invalid_argument);
  }
  SUBCASE("index without dictionary") {
    IncrementalIndex index(2);
    index.push(0);
    index.push(1);
    CHECK_THROWS(alphafree_dict(index, ex("3/2"), DictPatch::None));
  }
}

TEST_CASE("forward and dual detectors of big exponents") {
  const Detector big(DetectorKind::BigForward, ex("7/3"));
  const Detector dual(DetectorKind::BigDual, ex("7/3"));
  CHECK_FALSE(free_by(big, "abcbaca", 3));
  CHECK(prefixes_free(big, "abcbaca", 3));
  CHECK(free_by(big, "abcbac", 3));
  CHECK(free_by(big, "acabcba", 3));
  CHECK_FALSE(free_by(dual, "acabcba", 3));
  CHECK_FALSE(free_by(Detector(DetectorKind::BigForward, ex("5/2")), "aaa", 2));
  CHECK_FALSE(free_by(Detector(DetectorKind::BigDual, ex("5/2")), "aaa", 2));
  CHECK(block_count(ex("7/3")) == 2);
  CHECK(block_count(ex("11/3+")) == 3);
  CHECK(block_count(ex("3")) == 0);
  CHECK(block_count(ex("2")) == 0);
  CHECK_THROWS_AS(Detector(DetectorKind::BigForward, ex("2")), std::invalid_argument);
  CHECK_THROWS_AS(Detector(DetectorKind::BigDual, ex("3")), std::invalid_argument);
  CHECK_THROWS_AS(Detector(DetectorKind::BigDual, ex("4+")), std::invalid_argument);

  SuffixFactorization w;
  CHECK_FALSE(free_by(dual, "acabcba", 3, &w));
  CHECK(witness_confirms(parse_word("acabcba"), dual, w));
}

TEST_CASE("oracle") {
  CHECK_FALSE(oracle_freeness(parse_word("abcdebdaec"), ex("2"), false));
  for (const char* a : {"3/2", "2", "7/3+", "11/3"})
    for (const char* u : {"a", "b", "e"}) CHECK(oracle_freeness(parse_word(u), ex(a), false));
  CHECK(oracle_freeness(parse_word("abcbaca"), ex("7/3+"), false));
  CHECK_FALSE(oracle_freeness(parse_word("abcbaca"), ex("7/3"), false));
  CHECK(oracle_freeness(parse_word("acabcba"), ex("7/3"), false));
  CHECK_FALSE(oracle_freeness(parse_word("acabcba"), ex("7/3"), true));
  CHECK(is_strong_power(parse_word("abcbaca").letters(), 3));
  CHECK_FALSE(is_strong_power(parse_word("acabcba").letters(), 3));
  Word long_word;
  for (int i = 0; i < 65; ++i) long_word.push(static_cast<Letter>(i % 2));
  CHECK_THROWS_AS(oracle_freeness(long_word, ex("2"), false), std::length_error);
}

TEST_CASE("reversal closure up to exponent 2") {
  for (const char* a : {"3/2", "3/2+", "9/5", "2"}) {
    const Exponent alpha = ex(a);
    std::mt19937_64 rng(17);
    for (int t = 0; t < 300; ++t) {
      Word u;
      for (int i = 0; i < 12; ++i) u.push(static_cast<Letter>(rng() % 3));
      CHECK(oracle_freeness(u, alpha, false) == oracle_freeness(reverse(u), alpha, false));
      CHECK(oracle_freeness(u, alpha, false) == oracle_freeness(u, alpha, true));
    }
  }
}

TEST_CASE("detectors agree with the oracle") {
  for (unsigned sigma : {2u, 3u, 4u})
    for (const char* a : {"3/2", "3/2+", "9/5", "9/5+", "2", "2+", "7/3", "5/2",
                          "5/2+", "11/3", "11/3+"})
      for (bool dual : {false, true}) {
        const Exponent alpha = ex(a);
        const auto detectors = testing::detectors_for(alpha, dual);
        if (detectors.empty()) continue;
        const auto r = testing::oracle_sweep(sigma, alpha, dual, sigma == 4 ? 9 : 10,
                                             detectors);
        INFO(r.first_failure);
        CHECK(r.words > 0);
        CHECK(r.mismatches == 0);
        CHECK(r.bad_witnesses == 0);
      }
}

TEST_CASE("cover-jump and dictionary detectors agree") {
  std::mt19937_64 rng(23);
  for (const char* a : {"6/5+", "4/3+", "3/2", "3/2+", "8/5", "9/5+"}) {
    const Exponent alpha = ex(a);
    const Detector generic(DetectorKind::SmallGeneric, alpha);
    const Detector dict = Detector::automatic(alpha);
    REQUIRE(dict.kind() == DetectorKind::SmallDict);
    for (int t = 0; t < 40; ++t) {
      IncrementalIndex index(5, true);
      for (int step = 0; step < 200; ++step) {
        const auto letter = static_cast<Letter>(rng() % 5);
        index.push(letter);
        const bool g = generic.is_free(index);
        REQUIRE(g == dict.is_free(index));
        if (!g) index.pop();
      }
    }
  }
}

TEST_CASE("extend_check") {
  const Detector d(DetectorKind::SmallGeneric, ex("3/2"));
  IncrementalIndex index = build("abcdebdae", 5);
  CHECK_FALSE(extend_check(index, 2, d));
  CHECK(to_string(index.word()) == "abcdebdae");
  CHECK(extend_check(index, 1, Detector(DetectorKind::SmallGeneric, ex("2"))) ==
        oracle_freeness(parse_word("abcdebdaeb"), ex("2"), false));

  for (Letter a = 0; a < 3; ++a) {
    IncrementalIndex empty(3, true);
    CHECK(extend_check(empty, a, d));
    CHECK(empty.size() == 1);
  }

  // A free ternary word of length 30 at 2+, found by the oracle alone.
  const Exponent alpha = ex("2+");
  Word grown;
  std::function<bool()> grow = [&] {
    if (grown.size() == 30) return true;
    for (Letter a = 0; a < 3; ++a) {
      grown.push(a);
      if (oracle_freeness(grown, alpha, false) && grow()) return true;
      grown.pop();
    }
    return false;
  };
  REQUIRE(grow());
  IncrementalIndex replay(3);
  const Detector auto_d = Detector::automatic(alpha);
  for (Letter a : grown.letters()) CHECK(extend_check(replay, a, auto_d));
}

TEST_CASE("detector names") {
  CHECK(Detector::from_name("auto", ex("4/3+")).name() == "dict");
  CHECK(Detector::from_name("auto", ex("3/2+")).name() == "dict-half");
  CHECK(Detector::from_name("auto", ex("9/5+")).name() == "dict-nonoverlap");
  CHECK(Detector::from_name("auto", ex("2")).name() == "small");
  CHECK(Detector::from_name("auto", ex("7/3+")).name() == "big");
  CHECK(Detector::from_name("auto", ex("7/3+"), true).name() == "dual");
  CHECK(Detector::from_name("oracle", ex("7/3+"), true).dual());
  CHECK_THROWS_AS(Detector::from_name("small", ex("2"), true), std::invalid_argument);
  CHECK_THROWS_AS(Detector::from_name("fast", ex("2")), std::invalid_argument);
}

TEST_CASE("work counters") {
  DetectorStats stats;
  const Detector d(DetectorKind::SmallGeneric, ex("3/2"));
  IncrementalIndex index = build("abcdebdae", 5);
  d.is_free(index, nullptr, &stats);
  d.is_free(index, nullptr, &stats);
  CHECK(stats.calls == 2);
  CHECK(stats.processed_suffixes > 0);
}
