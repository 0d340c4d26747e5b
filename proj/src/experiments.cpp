#include "abelian/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace abelian {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

BatchSummary summarize(std::vector<SearchReport> reports) {
  if (reports.empty()) throw std::invalid_argument("no runs to summarize");
  BatchSummary s;
  s.runs = reports.size();
  std::vector<std::uint64_t> levels;
  levels.reserve(reports.size());
  double sum = 0;
  for (const auto& r : reports) {
    levels.push_back(r.ml);
    s.ml_max = std::max(s.ml_max, r.ml);
    sum += static_cast<double>(r.ml);
    s.total_nodes += r.count;
    s.wall_seconds += r.wall_seconds;
  }
  s.ml_av = sum / static_cast<double>(reports.size());
  std::sort(levels.begin(), levels.end());
  s.ml_med = levels[(levels.size() - 1) / 2];
  s.reports = std::move(reports);
  return s;
}

BatchSummary run_batch(const BatchConfig& config) {
  if (config.runs < 1) throw std::invalid_argument("runs must be >= 1");
  const auto start = Clock::now();
  std::vector<SearchReport> reports(config.runs);
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  auto worker = [&] {
    try {
      for (std::uint64_t r; !failed && (r = next++) < config.runs;) {
        WalkConfig walk = config.walk;
        walk.seed = config.seed_base + r;
        reports[r] = random_walk(walk);
      }
    } catch (...) {
      if (!failed.exchange(true)) error = std::current_exception();
    }
  };
  const auto jobs = static_cast<unsigned>(
      std::clamp<std::uint64_t>(config.jobs, 1, config.runs));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  BatchSummary s = summarize(std::move(reports));
  s.wall_seconds = seconds_since(start);
  return s;
}

std::string to_string(Behaviour behaviour) {
  switch (behaviour) {
    case Behaviour::FiniteLike: return "finite-like";
    case Behaviour::InfiniteLike: return "infinite-like";
    case Behaviour::Inconclusive: return "inconclusive";
  }
  return "?";
}

Behaviour classify_behaviour(const SearchReport& report,
                             const ClassifierConfig& config) {
  const auto& trace = report.trace;
  if (trace.empty()) throw std::invalid_argument("classification needs a trace");
  const std::size_t m = trace.size();
  const double count = static_cast<double>(std::max<std::uint64_t>(report.count, m));
  const double step = count / static_cast<double>(m);

  // Least-squares slope of level against node index over the last half.
  const std::size_t first = m / 2;
  const double k = static_cast<double>(m - first);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = first; i < m; ++i) {
    const double x = static_cast<double>(i + 1) * step;
    const double y = trace[i];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = k * sxx - sx * sx;
  const double slope = denom > 0 ? (k * sxy - sx * sy) / denom : 0.0;
  if (static_cast<double>(trace.back()) >= config.c * count &&
      slope > config.slope_floor)
    return Behaviour::InfiniteLike;

  const auto cut = static_cast<std::size_t>(
      static_cast<double>(m) * (1.0 - config.plateau_fraction));
  const std::uint32_t ml = *std::max_element(trace.begin(), trace.end());
  const std::uint32_t early =
      cut == 0 ? 0 : *std::max_element(trace.begin(), trace.begin() + cut);
  if (early == ml) return Behaviour::FiniteLike;
  return Behaviour::Inconclusive;
}

std::uint64_t gap_sample(unsigned sigma, std::uint64_t l, std::mt19937_64& rng) {
  std::uniform_int_distribution<unsigned> letter(0, sigma - 1);
  std::vector<std::uint64_t> need(sigma, 0);
  for (std::uint64_t i = 0; i < l; ++i) ++need[letter(rng)];
  std::uint64_t missing = l;
  std::uint64_t length = 0;
  while (missing > 0) {
    const unsigned a = letter(rng);
    ++length;
    if (need[a] > 0) {
      --need[a];
      --missing;
    }
  }
  return length - l;
}

double gap_estimate(unsigned sigma, std::uint64_t l, std::uint64_t samples,
                    std::uint64_t seed) {
  if (sigma < 1 || l < 1 || samples < 1)
    throw std::invalid_argument("gap estimate needs sigma, l, samples >= 1");
  std::mt19937_64 rng(seed);
  double sum = 0;
  for (std::uint64_t s = 0; s < samples; ++s)
    sum += static_cast<double>(gap_sample(sigma, l, rng));
  return sum / static_cast<double>(samples);
}

std::vector<BenchRow> dual_scaling_benchmark(
    const std::vector<std::size_t>& n_values, std::uint64_t samples,
    std::uint64_t seed, const Exponent& alpha, unsigned sigma) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<unsigned> letter(0, sigma - 1);
  std::vector<BenchRow> rows;
  for (std::size_t n : n_values) {
    if (n < 1) throw std::invalid_argument("word length must be >= 1");
    BenchRow row;
    row.n = n;
    double iterations = 0;
    double seconds = 0;
    for (std::uint64_t s = 0; s < samples; ++s) {
      IncrementalIndex index(sigma);
      for (std::size_t i = 0; i < n; ++i)
        index.push(static_cast<Letter>(letter(rng)));
      DetectorStats stats;
      const auto start = Clock::now();
      dual_alphafree(index, alpha, nullptr, &stats);
      seconds += seconds_since(start);
      iterations += static_cast<double>(stats.processed_suffixes);
    }
    row.mean_iterations = iterations / static_cast<double>(samples);
    row.mean_seconds = seconds / static_cast<double>(samples);
    rows.push_back(row);
  }
  return rows;
}

std::vector<std::uint64_t> length_histogram(const ExhaustiveConfig& config,
                                            bool allow_partial) {
  SearchReport report = exhaustive_search(config);
  if (report.inconclusive && !allow_partial)
    throw std::runtime_error("language not exhausted within the depth cap");
  return report.histogram;
}

std::string summary_json(const LanguageSpec& language, std::uint64_t nodes,
                         const BatchSummary& summary,
                         const std::string& verdict) {
  nlohmann::ordered_json j;
  j["sigma"] = language.sigma;
  j["alpha"] = language.alpha.to_string();
  j["detector"] = language.detector;
  j["N"] = nodes;
  j["runs"] = summary.runs;
  j["ml_max"] = summary.ml_max;
  j["ml_av"] = summary.ml_av;
  j["ml_med"] = summary.ml_med;
  j["total_nodes"] = summary.total_nodes;
  j["wall_seconds"] = summary.wall_seconds;
  j["verdict"] = verdict;
  return j.dump(2);
}

}  // namespace abelian
