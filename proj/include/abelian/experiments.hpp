#pragma once

// Batches of random walks and their statistics, the walk classifier, the
// suffix-cover gap estimator and the dual detector scaling benchmark.

#include <cstdint>
#include <string>
#include <vector>

#include "abelian/search.hpp"

namespace abelian {

struct BatchConfig {
  WalkConfig walk;  // walk.seed is ignored; run r uses seed_base + r
  std::uint64_t runs = 100;
  std::uint64_t seed_base = 1;
  unsigned jobs = 1;
};

struct BatchSummary {
  std::uint64_t runs = 0;
  std::uint64_t ml_max = 0;
  double ml_av = 0;
  std::uint64_t ml_med = 0;  // lower median
  std::uint64_t total_nodes = 0;
  double wall_seconds = 0;
  std::vector<SearchReport> reports;
};

/// Aggregates per-run reports. Throws std::invalid_argument when empty.
BatchSummary summarize(std::vector<SearchReport> reports);

/// Runs the walks, in parallel when jobs > 1. Results do not depend on jobs.
BatchSummary run_batch(const BatchConfig& config);

enum class Behaviour { FiniteLike, InfiniteLike, Inconclusive };

std::string to_string(Behaviour behaviour);

struct ClassifierConfig {
  /// Infinite-like needs a final level of at least c * count ...
  double c = 0.05;
  /// ... and a least-squares level/count slope over the last half of the
  /// trace above this floor.
  double slope_floor = 0.01;
  /// Finite-like: ml was already reached before the last plateau_fraction
  /// of the visited nodes.
  double plateau_fraction = 0.5;
};

/// Uses report.trace, read as equally spaced samples of the visited nodes
/// 1..report.count. Throws std::invalid_argument when the trace is empty.
Behaviour classify_behaviour(const SearchReport& report,
                             const ClassifierConfig& config = {});

/// Extra letters delta needed after a random prefix z of length l until the
/// following factor v dominates Psi(z): |v| = l + delta.
std::uint64_t gap_sample(unsigned sigma, std::uint64_t l, std::mt19937_64& rng);

/// Mean of gap_sample over `samples` independent draws.
double gap_estimate(unsigned sigma, std::uint64_t l, std::uint64_t samples,
                    std::uint64_t seed);

struct BenchRow {
  std::size_t n = 0;
  double mean_iterations = 0;  // suffixes processed by the dual detector
  double mean_seconds = 0;
};

/// Runs the dual detector on `samples` uniformly random words of each
/// length over `sigma` letters.
std::vector<BenchRow> dual_scaling_benchmark(
    const std::vector<std::size_t>& n_values, std::uint64_t samples,
    std::uint64_t seed, const Exponent& alpha = Exponent(7, 3, true),
    unsigned sigma = 3);

/// Node counts per length of an exhaustive search. Throws
/// std::runtime_error when the search hits the depth cap, unless
/// allow_partial is set.
std::vector<std::uint64_t> length_histogram(const ExhaustiveConfig& config,
                                            bool allow_partial = false);

/// JSON object with sigma, alpha, detector, N, runs, ml_max, ml_av, ml_med,
/// total_nodes, wall_seconds and verdict.
std::string summary_json(const LanguageSpec& language, std::uint64_t nodes,
                         const BatchSummary& summary,
                         const std::string& verdict);

}  // namespace abelian
