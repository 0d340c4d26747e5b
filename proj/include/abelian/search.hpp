#pragma once

// Explorations of the prefix tree of an Abelian-power-free language:
// randomized depth-first walks with forced backtracking, exhaustive
// (optionally lexmin) enumeration, and the three-part reduced search.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "abelian/detect.hpp"
#include "abelian/exponent.hpp"
#include "abelian/index.hpp"
#include "abelian/word.hpp"

namespace abelian {

inline LetterSet full_set(unsigned sigma) noexcept {
  return static_cast<LetterSet>((1u << sigma) - 1);
}

/// Which language is explored and how membership is decided.
struct LanguageSpec {
  unsigned sigma = 2;
  Exponent alpha{2, 1};
  std::string detector = "auto";
  bool dual = false;
  /// Words containing a factor of this many pairwise distinct letters are
  /// excluded; 0 disables the constraint.
  unsigned forbidden_permutation = 0;
  /// With the "auto" detector, the dictionary is dropped once the word
  /// reaches this length and the cover-based detector takes over.
  std::size_t dictionary_limit = 10000;
};

/// The current node of a search: the word, its index and the membership
/// test for one-letter extensions.
class Language {
 public:
  explicit Language(const LanguageSpec& spec);

  const LanguageSpec& spec() const noexcept { return spec_; }
  const Detector& detector() const noexcept { return detector_; }
  const IncrementalIndex& index() const noexcept { return index_; }
  const Word& word() const noexcept { return index_.word(); }
  std::size_t level() const noexcept { return index_.size(); }

  /// Appends a iff the extended word stays in the language.
  bool try_push(Letter a);
  /// Appends a word letter by letter; throws std::invalid_argument if some
  /// prefix leaves the language.
  void push_word(const Word& w);
  void pop();

  /// Length of the longest suffix with pairwise distinct letters.
  unsigned permutation_run() const noexcept {
    return runs_.empty() ? 0 : runs_.back();
  }

  const DetectorStats& stats() const noexcept { return stats_; }

 private:
  LanguageSpec spec_;
  Detector detector_;
  IncrementalIndex index_;
  std::vector<unsigned> runs_;
  bool may_switch_;
  DetectorStats stats_;
};

/// Run of pairwise distinct letters ending at the last letter of u.
unsigned permutation_run(const IncrementalIndex& index) noexcept;

/// Letters a such that ua is lexmin, given that u is: every letter already
/// used and the smallest unused one.
LetterSet lexmin_children(const Word& u, unsigned sigma) noexcept;

/// True iff u is lexicographically minimal among its images under the
/// permutations of the alphabet.
bool is_lexmin(const Word& u) noexcept;

/// Forced backtracking: after budget(ml) visits without raising ml, climb
/// ascent(ml) edges.
struct BacktrackPolicy {
  bool enabled = true;
  std::function<std::uint64_t(std::uint64_t)> budget = default_budget;
  std::function<std::uint64_t(std::uint64_t)> ascent = default_ascent;

  static std::uint64_t default_budget(std::uint64_t k);  // ceil(k^{3/2})
  static std::uint64_t default_ascent(std::uint64_t k);  // ceil(k^{1/2})
};

struct SearchReport {
  std::uint64_t ml = 0;
  std::uint64_t count = 0;
  std::uint64_t rejected = 0;
  std::uint64_t forced_backtracks = 0;
  /// Walk: the tree was exhausted before the node budget.
  /// Exhaustive search: every node was visited.
  bool exhausted = false;
  /// Exhaustive search aborted at the depth cap.
  bool inconclusive = false;
  /// Stopped early by stop_after; a checkpoint holds the state.
  bool interrupted = false;
  std::vector<std::uint64_t> histogram;  // nodes per length
  Word deepest;
  std::vector<std::uint32_t> trace;  // level of the i-th visited node
  DetectorStats detector_stats;
  double wall_seconds = 0;
};

/// Random depth-first walk state. remaining[l] holds the untried letters
/// of the node at level l (l = 0 .. level).
struct WalkState {
  std::vector<LetterSet> remaining;
  std::uint64_t ml = 0;
  std::uint64_t count = 1;
  std::uint64_t rejected = 0;
  std::uint64_t since_progress = 0;
  std::uint64_t forced_backtracks = 0;
  std::mt19937_64 rng;
};

/// Climbs min(ascent(ml), level) edges and resets since_progress. The
/// remaining sets of the abandoned nodes are discarded.
void forced_backtrack(Language& language, WalkState& state,
                      const BacktrackPolicy& policy);

struct CheckpointOptions {
  std::string path;                      // empty: no checkpointing
  std::uint64_t interval = 100'000'000;  // nodes between saves
  std::string resume;                    // checkpoint to continue from
  /// Stop once the node counter reaches this value, saving a checkpoint.
  std::uint64_t stop_after = 0;
};

struct WalkConfig {
  LanguageSpec language;
  std::uint64_t nodes = 1'000'000;  // N
  std::uint64_t seed = 1;
  BacktrackPolicy policy;
  bool record_trace = false;
  CheckpointOptions checkpoint;
};

SearchReport random_walk(const WalkConfig& config);

struct ExhaustiveConfig {
  LanguageSpec language;
  bool lexmin = false;
  /// The search explores the subtree of this word.
  Word prefix;
  std::uint64_t depth_cap = 1'000'000;
  /// Parallel jobs. With more than one job the subtrees of the words at
  /// split_depth are searched independently; checkpoints are not supported.
  unsigned jobs = 1;
  std::size_t split_depth = 0;  // 0: prefix length + 12
  CheckpointOptions checkpoint;
};

SearchReport exhaustive_search(const ExhaustiveConfig& config);

enum class LemmaPart { L1, L2, L3 };

LemmaPart parse_lemma_part(const std::string& text);
std::string to_string(LemmaPart part);

/// The exponent ((k-2)/(k-3))+ of the three-part search.
Exponent lemma_exponent(unsigned k);
/// 01...(k-3), 01...(k-2) or 01...(k-1).
Word lemma_prefix(unsigned k, LemmaPart part);
/// k-1, k or 0 (no constraint).
unsigned lemma_forbidden_permutation(unsigned k, LemmaPart part);

struct LemmaConfig {
  unsigned k = 6;
  LemmaPart part = LemmaPart::L1;
  /// Restrict to the smallest unused letter when extending with a letter
  /// not yet in the word (the unused letters are interchangeable).
  bool lexmin = false;
  std::string detector = "dict";
  std::uint64_t depth_cap = 1'000'000;
  unsigned jobs = 1;
  std::size_t split_depth = 0;
  CheckpointOptions checkpoint;
};

/// Throws std::invalid_argument for k < 6 or k > 16.
ExhaustiveConfig lemma_config(const LemmaConfig& config);
SearchReport lemma_search(const LemmaConfig& config);

/// Raised when a checkpoint does not belong to the requested search.
class CheckpointMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace abelian
