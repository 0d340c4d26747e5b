#include "abelian/search.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include "abelian/checkpoint.hpp"

namespace abelian {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::uint64_t isqrt_ceil(std::uint64_t x) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(x)));
  while (r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r * r == x ? r : r + 1;
}

Letter nth_letter(LetterSet s, unsigned k) {
  for (; k > 0; --k) s &= static_cast<LetterSet>(s - 1);
  return static_cast<Letter>(std::countr_zero(s));
}

void add_stats(DetectorStats& into, const DetectorStats& from) {
  into.calls += from.calls;
  into.inner_iterations += from.inner_iterations;
  into.processed_suffixes += from.processed_suffixes;
}

void count_level(std::vector<std::uint64_t>& histogram, std::size_t level) {
  if (histogram.size() <= level) histogram.resize(level + 1, 0);
  ++histogram[level];
}

Checkpoint checkpoint_header(const LanguageSpec& spec, const std::string& mode) {
  Checkpoint c;
  c.mode = mode;
  c.sigma = spec.sigma;
  c.alpha = spec.alpha.to_string();
  c.detector = spec.detector;
  c.dual = spec.dual;
  c.forbidden_permutation = spec.forbidden_permutation;
  return c;
}

void require_match(bool ok, const std::string& field) {
  if (!ok)
    throw CheckpointMismatch("checkpoint does not match the requested search (" +
                             field + ")");
}

void verify_header(const Checkpoint& got, const Checkpoint& want) {
  require_match(got.mode == want.mode, "mode");
  require_match(got.sigma == want.sigma, "sigma");
  require_match(got.alpha == want.alpha, "alpha");
  require_match(got.detector == want.detector, "detector");
  require_match(got.dual == want.dual, "dual");
  require_match(got.forbidden_permutation == want.forbidden_permutation,
                "permutation");
  require_match(got.lexmin == want.lexmin, "lexmin");
  require_match(got.base == want.base, "prefix");
}

}  // namespace

// Language

Language::Language(const LanguageSpec& spec)
    : spec_(spec),
      detector_(Detector::from_name(spec.detector, spec.alpha, spec.dual)),
      index_(spec.sigma, detector_.needs_dictionary()),
      may_switch_(spec.detector == "auto" && detector_.needs_dictionary()) {}

bool Language::try_push(Letter a) {
  unsigned run = 1;
  if (!runs_.empty()) {
    const Pos last = index_.positions().last(a);
    run = runs_.back() + 1;
    if (last != 0) run = std::min<unsigned>(run, level() + 1 - last);
  }
  if (spec_.forbidden_permutation != 0 && run >= spec_.forbidden_permutation)
    return false;
  if (may_switch_ && level() + 1 > spec_.dictionary_limit) {
    index_.disable_dictionary();
    detector_ = Detector(DetectorKind::SmallGeneric, spec_.alpha);
    may_switch_ = false;
  }
  index_.push(a);
  if (!detector_.is_free(index_, nullptr, &stats_)) {
    index_.pop();
    return false;
  }
  runs_.push_back(run);
  return true;
}

void Language::push_word(const Word& w) {
  for (std::size_t i = 1; i <= w.size(); ++i)
    if (!try_push(w.at(i)))
      throw std::invalid_argument("word " + to_string(w) +
                                  " leaves the language at position " +
                                  std::to_string(i));
}

void Language::pop() {
  index_.pop();
  runs_.pop_back();
}

unsigned permutation_run(const IncrementalIndex& index) noexcept {
  const auto n = static_cast<Pos>(index.size());
  if (n == 0) return 0;
  LetterSet seen = 0;
  unsigned run = 0;
  for (Pos i = n; i >= 1; --i) {
    const auto bit = static_cast<LetterSet>(1u << index.at(i));
    if (seen & bit) break;
    seen |= bit;
    ++run;
  }
  return run;
}

LetterSet lexmin_children(const Word& u, unsigned sigma) noexcept {
  LetterSet used = 0;
  for (Letter a : u.letters()) used |= static_cast<LetterSet>(1u << a);
  const LetterSet all = full_set(sigma);
  const auto unused = static_cast<LetterSet>(all & ~used);
  if (unused == 0) return all;
  return static_cast<LetterSet>(used | (unused & -unused));
}

bool is_lexmin(const Word& u) noexcept {
  unsigned next = 0;
  for (Letter a : u.letters()) {
    if (a == next)
      ++next;
    else if (a > next)
      return false;
  }
  return true;
}

// Forced backtracking

std::uint64_t BacktrackPolicy::default_budget(std::uint64_t k) {
  return isqrt_ceil(k * k * k);
}

std::uint64_t BacktrackPolicy::default_ascent(std::uint64_t k) {
  return isqrt_ceil(k);
}

void forced_backtrack(Language& language, WalkState& state,
                      const BacktrackPolicy& policy) {
  const std::uint64_t steps =
      std::min<std::uint64_t>(policy.ascent(state.ml), language.level());
  for (std::uint64_t s = 0; s < steps; ++s) {
    language.pop();
    state.remaining.pop_back();
  }
  state.since_progress = 0;
  ++state.forced_backtracks;
}

// Random walk

SearchReport random_walk(const WalkConfig& config) {
  if (config.nodes < 1) throw std::invalid_argument("node budget must be >= 1");
  const auto start = Clock::now();
  const LanguageSpec& spec = config.language;
  Language language(spec);
  WalkState state;
  state.rng.seed(config.seed);
  state.remaining.push_back(full_set(spec.sigma));

  SearchReport report;
  Checkpoint header = checkpoint_header(spec, "walk");
  header.nodes = config.nodes;
  header.seed = config.seed;

  if (!config.checkpoint.resume.empty()) {
    Checkpoint c = load_checkpoint(config.checkpoint.resume);
    verify_header(c, header);
    require_match(c.nodes == config.nodes, "nodes");
    require_match(c.seed == config.seed, "seed");
    language.push_word(c.word);
    require_match(c.remaining.size() == c.word.size() + 1, "remaining sets");
    state.remaining.assign(c.remaining.begin(), c.remaining.end());
    state.count = c.count;
    state.ml = c.ml;
    state.rejected = c.rejected;
    state.since_progress = c.since_progress;
    state.forced_backtracks = c.forced_backtracks;
    std::istringstream rng(c.rng);
    rng >> state.rng;
    if (!rng) throw std::runtime_error("malformed checkpoint: rng state");
  } else if (config.record_trace) {
    report.trace.push_back(0);
  }

  auto save = [&] {
    Checkpoint c = header;
    c.count = state.count;
    c.ml = state.ml;
    c.rejected = state.rejected;
    c.since_progress = state.since_progress;
    c.forced_backtracks = state.forced_backtracks;
    c.word = language.word();
    c.remaining.assign(state.remaining.begin(), state.remaining.end());
    std::ostringstream rng;
    rng << state.rng;
    c.rng = rng.str();
    save_checkpoint(config.checkpoint.path, c);
  };

  const CheckpointOptions& cp = config.checkpoint;
  std::uint64_t next_save =
      cp.path.empty() || cp.interval == 0 ? UINT64_MAX : state.count + cp.interval;
  const LetterSet all = full_set(spec.sigma);

  while (state.count < config.nodes) {
    if (cp.stop_after != 0 && state.count >= cp.stop_after) {
      if (!cp.path.empty()) save();
      report.interrupted = true;
      break;
    }
    if (state.count >= next_save) {
      save();
      next_save = state.count + cp.interval;
    }
    LetterSet& untried = state.remaining.back();
    if (untried == 0) {
      if (language.level() == 0) {
        report.exhausted = true;
        break;
      }
      language.pop();
      state.remaining.pop_back();
      continue;
    }
    const auto k = static_cast<unsigned>(std::popcount(untried));
    std::uniform_int_distribution<unsigned> pick(0, k - 1);
    const Letter a = nth_letter(untried, pick(state.rng));
    untried = static_cast<LetterSet>(untried & ~(1u << a));
    if (!language.try_push(a)) {
      ++state.rejected;
      continue;
    }
    state.remaining.push_back(all);
    ++state.count;
    const std::uint64_t level = language.level();
    if (config.record_trace) report.trace.push_back(static_cast<std::uint32_t>(level));
    if (level > state.ml) {
      state.ml = level;
      state.since_progress = 0;
    } else {
      ++state.since_progress;
      if (config.policy.enabled &&
          state.since_progress >= config.policy.budget(state.ml))
        forced_backtrack(language, state, config.policy);
    }
  }

  report.ml = state.ml;
  report.count = state.count;
  report.rejected = state.rejected;
  report.forced_backtracks = state.forced_backtracks;
  report.detector_stats = language.stats();
  report.wall_seconds = seconds_since(start);
  return report;
}

// Exhaustive search

namespace {

class Explorer {
 public:
  Explorer(const ExhaustiveConfig& config, Language& language,
           std::size_t split_depth, std::vector<Word>* frontier)
      : config_(config),
        language_(language),
        base_(language.level()),
        split_(split_depth),
        frontier_(frontier) {}

  SearchReport run() {
    const CheckpointOptions& cp = config_.checkpoint;
    Checkpoint header = checkpoint_header(config_.language, "exhaustive");
    header.lexmin = config_.lexmin;
    header.base = base_;

    if (!cp.resume.empty()) {
      Checkpoint c = load_checkpoint(cp.resume);
      verify_header(c, header);
      require_match(c.word.size() >= base_ &&
                        std::equal(language_.word().letters().begin(),
                                   language_.word().letters().end(),
                                   c.word.letters().begin()),
                    "prefix");
      require_match(c.remaining.size() == c.word.size() - base_ + 1,
                    "remaining sets");
      for (std::size_t i = base_ + 1; i <= c.word.size(); ++i)
        if (!language_.try_push(c.word.at(i)))
          throw std::runtime_error("checkpoint word leaves the language");
      remaining_.assign(c.remaining.begin(), c.remaining.end());
      report_.count = c.count;
      report_.ml = c.ml;
      report_.rejected = c.rejected;
      report_.histogram = c.histogram;
      report_.deepest = c.deepest;
    } else {
      report_.count = 1;
      report_.ml = base_;
      report_.deepest = language_.word();
      count_level(report_.histogram, base_);
      remaining_.push_back(children());
    }

    auto save = [&] {
      Checkpoint c = header;
      c.count = report_.count;
      c.ml = report_.ml;
      c.rejected = report_.rejected;
      c.word = language_.word();
      c.remaining.assign(remaining_.begin(), remaining_.end());
      c.histogram = report_.histogram;
      c.deepest = report_.deepest;
      save_checkpoint(cp.path, c);
    };
    std::uint64_t next_save = cp.path.empty() || cp.interval == 0
                                  ? UINT64_MAX
                                  : report_.count + cp.interval;

    while (true) {
      if (cp.stop_after != 0 && report_.count >= cp.stop_after) {
        if (!cp.path.empty()) save();
        report_.interrupted = true;
        break;
      }
      if (report_.count >= next_save) {
        save();
        next_save = report_.count + cp.interval;
      }
      LetterSet& untried = remaining_.back();
      if (untried == 0) {
        if (remaining_.size() == 1) {
          report_.exhausted = true;
          break;
        }
        language_.pop();
        remaining_.pop_back();
        continue;
      }
      const auto a = static_cast<Letter>(std::countr_zero(untried));
      untried = static_cast<LetterSet>(untried & (untried - 1));
      if (!language_.try_push(a)) {
        ++report_.rejected;
        continue;
      }
      const std::size_t level = language_.level();
      if (level > config_.depth_cap) {
        language_.pop();
        report_.inconclusive = true;
        break;
      }
      if (frontier_ && level == split_) {
        frontier_->push_back(language_.word());
        language_.pop();
        continue;
      }
      ++report_.count;
      count_level(report_.histogram, level);
      if (level > report_.ml) {
        report_.ml = level;
        report_.deepest = language_.word();
      }
      remaining_.push_back(children());
    }
    report_.detector_stats = language_.stats();
    return report_;
  }

 private:
  LetterSet children() const {
    const unsigned sigma = config_.language.sigma;
    return config_.lexmin ? lexmin_children(language_.word(), sigma)
                          : full_set(sigma);
  }

  const ExhaustiveConfig& config_;
  Language& language_;
  std::size_t base_;
  std::size_t split_;
  std::vector<Word>* frontier_;
  std::vector<LetterSet> remaining_;
  SearchReport report_;
};

// Adds a subtree report that follows `into` in depth-first order.
void merge_after(SearchReport& into, const SearchReport& part) {
  into.count += part.count;
  into.rejected += part.rejected;
  if (into.histogram.size() < part.histogram.size())
    into.histogram.resize(part.histogram.size(), 0);
  for (std::size_t l = 0; l < part.histogram.size(); ++l)
    into.histogram[l] += part.histogram[l];
  if (part.ml > into.ml) {
    into.ml = part.ml;
    into.deepest = part.deepest;
  }
  into.exhausted = into.exhausted && part.exhausted;
  into.inconclusive = into.inconclusive || part.inconclusive;
  add_stats(into.detector_stats, part.detector_stats);
}

}  // namespace

SearchReport exhaustive_search(const ExhaustiveConfig& config) {
  const auto start = Clock::now();
  if (config.lexmin && !is_lexmin(config.prefix))
    throw std::invalid_argument("lexmin search from a prefix that is not lexmin");
  Language language(config.language);
  language.push_word(config.prefix);

  if (config.jobs <= 1) {
    Explorer explorer(config, language, 0, nullptr);
    SearchReport report = explorer.run();
    report.wall_seconds = seconds_since(start);
    return report;
  }

  if (!config.checkpoint.path.empty() || !config.checkpoint.resume.empty() ||
      config.checkpoint.stop_after != 0)
    throw std::invalid_argument("checkpoints require a single job");
  const std::size_t split =
      config.split_depth != 0 ? config.split_depth : config.prefix.size() + 12;
  if (split <= config.prefix.size())
    throw std::invalid_argument("split depth must exceed the prefix length");

  std::vector<Word> frontier;
  Explorer top(config, language, split, &frontier);
  SearchReport report = top.run();

  std::vector<SearchReport> parts(frontier.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  auto worker = [&] {
    try {
      for (std::size_t j; !failed && (j = next++) < frontier.size();) {
        Language sub(config.language);
        sub.push_word(frontier[j]);
        Explorer explorer(config, sub, 0, nullptr);
        parts[j] = explorer.run();
      }
    } catch (...) {
      if (!failed.exchange(true)) error = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  const unsigned jobs = std::min<unsigned>(
      config.jobs, static_cast<unsigned>(std::max<std::size_t>(frontier.size(), 1)));
  for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  if (!report.inconclusive)
    for (const auto& part : parts) merge_after(report, part);
  report.wall_seconds = seconds_since(start);
  return report;
}

// Three-part search

LemmaPart parse_lemma_part(const std::string& text) {
  if (text == "L1" || text == "l1" || text == "1") return LemmaPart::L1;
  if (text == "L2" || text == "l2" || text == "2") return LemmaPart::L2;
  if (text == "L3" || text == "l3" || text == "3") return LemmaPart::L3;
  throw std::invalid_argument("unknown part '" + text + "' (expected L1, L2 or L3)");
}

std::string to_string(LemmaPart part) {
  switch (part) {
    case LemmaPart::L1: return "L1";
    case LemmaPart::L2: return "L2";
    case LemmaPart::L3: return "L3";
  }
  return "?";
}

namespace {

void require_lemma_k(unsigned k) {
  if (k < 6 || k > kMaxSigma)
    throw std::invalid_argument("the three-part search needs 6 <= k <= 16, got " +
                                std::to_string(k));
}

}  // namespace

Exponent lemma_exponent(unsigned k) {
  require_lemma_k(k);
  return Exponent(k - 2, k - 3, true);
}

Word lemma_prefix(unsigned k, LemmaPart part) {
  require_lemma_k(k);
  const unsigned top = part == LemmaPart::L1 ? k - 3 : part == LemmaPart::L2 ? k - 2 : k - 1;
  Word w;
  for (unsigned a = 0; a <= top; ++a) w.push(static_cast<Letter>(a));
  return w;
}

unsigned lemma_forbidden_permutation(unsigned k, LemmaPart part) {
  require_lemma_k(k);
  switch (part) {
    case LemmaPart::L1: return k - 1;
    case LemmaPart::L2: return k;
    case LemmaPart::L3: return 0;
  }
  return 0;
}

ExhaustiveConfig lemma_config(const LemmaConfig& config) {
  ExhaustiveConfig out;
  out.language.sigma = config.k;
  out.language.alpha = lemma_exponent(config.k);
  out.language.detector = config.detector;
  out.language.forbidden_permutation =
      lemma_forbidden_permutation(config.k, config.part);
  out.lexmin = config.lexmin;
  out.prefix = lemma_prefix(config.k, config.part);
  out.depth_cap = config.depth_cap;
  out.jobs = config.jobs;
  out.split_depth = config.split_depth;
  out.checkpoint = config.checkpoint;
  return out;
}

SearchReport lemma_search(const LemmaConfig& config) {
  return exhaustive_search(lemma_config(config));
}

}  // namespace abelian
