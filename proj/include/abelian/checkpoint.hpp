#pragma once

// Resumable search state, stored as a versioned text file.

#include <cstdint>
#include <string>
#include <vector>

#include "abelian/word.hpp"

namespace abelian {

inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  std::string mode;  // "walk" or "exhaustive"
  unsigned sigma = 0;
  std::string alpha;
  std::string detector;
  bool dual = false;
  bool lexmin = false;
  unsigned forbidden_permutation = 0;
  std::size_t base = 0;  // length of the word the search started from
  std::uint64_t nodes = 0;  // walk budget N
  std::uint64_t seed = 0;
  std::uint64_t count = 0;
  std::uint64_t ml = 0;
  std::uint64_t rejected = 0;
  std::uint64_t since_progress = 0;
  std::uint64_t forced_backtracks = 0;
  Word word;
  /// Untried letters of the nodes at levels base .. base + |remaining| - 1.
  std::vector<std::uint16_t> remaining;
  std::vector<std::uint64_t> histogram;
  Word deepest;
  std::string rng;  // engine state as written by operator<<

  bool operator==(const Checkpoint&) const = default;
};

/// Writes to a temporary file next to `path` and renames it into place.
/// Throws std::runtime_error on I/O failure.
void save_checkpoint(const std::string& path, const Checkpoint& checkpoint);

/// Throws std::runtime_error on I/O failure or malformed content.
Checkpoint load_checkpoint(const std::string& path);

std::string format_checkpoint(const Checkpoint& checkpoint);
Checkpoint parse_checkpoint(const std::string& text);

}  // namespace abelian
