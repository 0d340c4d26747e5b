#include "abelian/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "abelian/checkpoint.hpp"
#include "abelian/detect.hpp"
#include "abelian/experiments.hpp"
#include "abelian/search.hpp"
#include "json.hpp"

namespace abelian {

namespace {

using Json = nlohmann::ordered_json;

/// Bad input detected after parsing; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  unsigned sigma = 2;
  std::string alpha = "2";
  std::string detector = "auto";
  bool dual = false;
};

struct Paths {
  std::string trace;
  std::string histogram;
  std::string report;
  std::string checkpoint;
  std::string resume;
  std::string output;
};

std::string env_default(const char* name) {
  const char* value = std::getenv(name);
  return value ? value : "";
}

Exponent parse_alpha(const std::string& text, std::ostream& err) {
  bool normalized = false;
  Exponent alpha(2, 1);
  try {
    alpha = Exponent::parse(text, &normalized);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (normalized)
    err << "warning: exponent " << text << " normalized to " << alpha.to_string()
        << "\n";
  return alpha;
}

LanguageSpec language_spec(const Common& c, std::ostream& err) {
  LanguageSpec spec;
  spec.sigma = c.sigma;
  spec.alpha = parse_alpha(c.alpha, err);
  spec.detector = c.detector;
  spec.dual = c.dual || c.detector == "dual";
  try {
    Detector::from_name(spec.detector, spec.alpha, spec.dual);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return spec;
}

/// Opens an output file up front so that unwritable paths fail before any
/// work is done. An empty path selects `fallback`.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::trunc);
    if (!*file_) throw UsageError("cannot write " + path);
    stream_ = file_.get();
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

void check_writable(const std::string& path) {
  if (path.empty()) return;
  const std::string probe = path + ".tmp";
  std::ofstream out(probe, std::ios::app);
  if (!out) throw UsageError("cannot write " + path);
  out.close();
  std::remove(probe.c_str());
}

std::vector<std::size_t> parse_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("invalid number '" + item + "' in list");
    }
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

std::string join(const std::vector<std::string>& args) {
  std::string out;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (i > 1) out += ' ';
    out += args[i];
  }
  return out;
}

void add_common(CLI::App* cmd, Common& c, bool with_dual = true) {
  cmd->add_option("--sigma", c.sigma, "alphabet size")
      ->check(CLI::Range(2, 10))
      ->capture_default_str();
  cmd->add_option("--alpha", c.alpha, "exponent p/q, optionally followed by +")
      ->required();
  cmd->add_option("--detector", c.detector,
                  "auto, small, dict, dict-half, dict-nonoverlap, big, dual, oracle")
      ->capture_default_str();
  if (with_dual) cmd->add_flag("--dual", c.dual, "avoid reversed (dual) powers");
}

// check

int cmd_check(const Common& common, const std::string& word_text,
              const std::string& file, std::ostream& out, std::ostream& err) {
  std::string text = word_text;
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw UsageError("cannot read " + file);
    in >> text;
  }
  LanguageSpec spec = language_spec(common, err);
  Word w;
  try {
    w = parse_word(text, spec.sigma);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const Detector detector = Detector::from_name(spec.detector, spec.alpha, spec.dual);
  IncrementalIndex index(spec.sigma, detector.needs_dictionary());
  for (std::size_t i = 1; i <= w.size(); ++i) {
    index.push(w.at(i));
    SuffixFactorization f;
    if (detector.is_free(index, &f)) continue;
    out << "FORBIDDEN prefix=" << i;
    if (f.n != 0) {
      const Word& u = index.word();
      auto span = [&](Pos a, Pos b) {
        return to_string(u.letters().subspan(a - 1, b - a + 1));
      };
      out << " x=" << f.x_first << ".." << f.x_last << " ("
          << span(f.x_first, f.x_last) << ") z=" << f.z_first << ".." << f.n
          << " (" << span(f.z_first, f.n) << ")";
    }
    out << " detector=" << detector.name() << "\n";
    return 1;
  }
  out << "FREE detector=" << detector.name() << "\n";
  return 0;
}

// walk and batch

struct WalkOptions {
  std::uint64_t nodes = 1'000'000;
  std::uint64_t seed = 1;
  std::uint64_t runs = 100;
  unsigned jobs = 1;
  bool backtrack = false;
  std::uint64_t interval = 100'000'000;
  std::uint64_t stop_after = 0;
  std::size_t dictionary_limit = 10000;
};

// A resumed walk records only the nodes visited after the resume, one trace
// row per node.
std::string walk_verdict(const SearchReport& report) {
  if (report.trace.empty()) return "inconclusive";
  if (report.trace.size() == report.count) return to_string(classify_behaviour(report));
  SearchReport tail;
  tail.count = report.trace.size();
  tail.trace = report.trace;
  return to_string(classify_behaviour(tail));
}

void write_trace(std::ostream& out, const std::vector<std::uint32_t>& trace,
                 std::uint64_t first_index) {
  out << "node_index,level\n";
  for (std::size_t i = 0; i < trace.size(); ++i)
    out << first_index + i << ',' << trace[i] << '\n';
}

int cmd_walk(const Common& common, const WalkOptions& o, Paths paths,
             const std::string& command, std::ostream& out, std::ostream& err) {
  WalkConfig config;
  config.language = language_spec(common, err);
  config.language.dictionary_limit = o.dictionary_limit;
  config.nodes = o.nodes;
  config.seed = o.seed;
  config.policy.enabled = o.backtrack;
  config.record_trace = true;
  if (paths.checkpoint.empty()) paths.checkpoint = env_default("ABELIAN_CHECKPOINT");
  config.checkpoint.path = paths.checkpoint;
  config.checkpoint.interval = o.interval;
  config.checkpoint.resume = paths.resume;
  config.checkpoint.stop_after = o.stop_after;
  if (paths.report.empty()) paths.report = env_default("ABELIAN_REPORT");
  check_writable(paths.checkpoint);
  Output report_out(paths.report, out);
  std::unique_ptr<Output> trace_out;
  if (!paths.trace.empty()) trace_out = std::make_unique<Output>(paths.trace, out);

  SearchReport report = random_walk(config);
  const std::uint64_t first_index = report.count - report.trace.size() + 1;
  if (trace_out) write_trace(**trace_out, report.trace, first_index);
  const std::string verdict = walk_verdict(report);
  BatchSummary summary = summarize({report});
  Json j = Json::parse(summary_json(config.language, config.nodes, summary, verdict));
  j["seed"] = o.seed;
  j["backtrack"] = o.backtrack;
  j["rejected"] = report.rejected;
  j["forced_backtracks"] = report.forced_backtracks;
  j["exhausted"] = report.exhausted;
  j["interrupted"] = report.interrupted;
  j["final_level"] = report.trace.empty() ? 0 : report.trace.back();
  j["command"] = command;
  *report_out << j.dump(2) << "\n";
  return report.interrupted ? 1 : 0;
}

int cmd_batch(const Common& common, const WalkOptions& o, Paths paths,
              const std::string& command, std::ostream& out, std::ostream& err) {
  BatchConfig config;
  config.walk.language = language_spec(common, err);
  config.walk.language.dictionary_limit = o.dictionary_limit;
  config.walk.nodes = o.nodes;
  config.walk.policy.enabled = o.backtrack;
  config.walk.record_trace = true;
  config.runs = o.runs;
  config.seed_base = o.seed;
  config.jobs = o.jobs;
  if (paths.report.empty()) paths.report = env_default("ABELIAN_REPORT");
  Output report_out(paths.report, out);
  std::unique_ptr<Output> runs_out;
  if (!paths.output.empty()) runs_out = std::make_unique<Output>(paths.output, out);

  BatchSummary summary = run_batch(config);
  std::map<std::string, std::uint64_t> verdicts;
  for (const auto& r : summary.reports) ++verdicts[walk_verdict(r)];
  std::string verdict = "inconclusive";
  std::uint64_t best = 0;
  for (const auto& [name, n] : verdicts)
    if (n * 2 > summary.runs && n > best) {
      verdict = name;
      best = n;
    }
  if (runs_out) {
    **runs_out << "run,seed,ml,final_level,count,verdict\n";
    for (std::size_t r = 0; r < summary.reports.size(); ++r) {
      const auto& rep = summary.reports[r];
      **runs_out << r << ',' << o.seed + r << ',' << rep.ml << ','
                 << (rep.trace.empty() ? 0 : rep.trace.back()) << ',' << rep.count
                 << ',' << walk_verdict(rep) << '\n';
    }
  }
  Json j = Json::parse(
      summary_json(config.walk.language, config.walk.nodes, summary, verdict));
  j["seed_base"] = o.seed;
  j["backtrack"] = o.backtrack;
  j["verdicts"] = verdicts;
  j["command"] = command;
  *report_out << j.dump(2) << "\n";
  return 0;
}

// exhaust and lemma

struct ExhaustOptions {
  bool lexmin = false;
  std::uint64_t depth_cap = 1'000'000;
  unsigned jobs = 1;
  std::size_t split_depth = 0;
  std::uint64_t interval = 100'000'000;
  std::uint64_t stop_after = 0;
  std::string prefix;
};

Json exhaust_json(const LanguageSpec& spec, const SearchReport& r) {
  Json j;
  j["sigma"] = spec.sigma;
  j["alpha"] = spec.alpha.to_string();
  j["detector"] = spec.detector;
  j["total_nodes"] = r.count;
  j["max_length"] = r.ml;
  j["deepest"] = to_string(r.deepest);
  j["rejected"] = r.rejected;
  j["wall_seconds"] = r.wall_seconds;
  j["verdict"] = r.inconclusive ? "inconclusive"
                 : r.interrupted ? "interrupted"
                 : r.exhausted   ? "finite"
                                 : "incomplete";
  return j;
}

void write_histogram(std::ostream& out, const std::vector<std::uint64_t>& h) {
  out << "length,count\n";
  for (std::size_t l = 0; l < h.size(); ++l) out << l << ',' << h[l] << '\n';
}

void apply_exhaust_options(ExhaustiveConfig& c, const ExhaustOptions& o,
                           Paths& paths) {
  c.depth_cap = o.depth_cap;
  c.jobs = o.jobs;
  c.split_depth = o.split_depth;
  if (paths.checkpoint.empty() && o.jobs <= 1)
    paths.checkpoint = env_default("ABELIAN_CHECKPOINT");
  c.checkpoint.path = paths.checkpoint;
  c.checkpoint.interval = o.interval;
  c.checkpoint.resume = paths.resume;
  c.checkpoint.stop_after = o.stop_after;
  if (o.jobs > 1 && (!paths.checkpoint.empty() || !paths.resume.empty() ||
                     o.stop_after != 0))
    throw UsageError("checkpoints require --jobs 1");
  check_writable(paths.checkpoint);
}

int finish_exhaust(const SearchReport& r, Json j, const Paths& paths,
                   const std::string& command, std::ostream& out) {
  Output report_out(paths.report, out);
  if (!paths.histogram.empty()) {
    Output h(paths.histogram, out);
    write_histogram(*h, r.histogram);
  }
  j["command"] = command;
  *report_out << j.dump(2) << "\n";
  return r.exhausted && !r.inconclusive ? 0 : 1;
}

int cmd_exhaust(const Common& common, const ExhaustOptions& o, Paths paths,
                const std::string& command, std::ostream& out, std::ostream& err) {
  ExhaustiveConfig config;
  config.language = language_spec(common, err);
  config.lexmin = o.lexmin;
  try {
    config.prefix = parse_word(o.prefix, config.language.sigma);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  apply_exhaust_options(config, o, paths);
  if (paths.report.empty()) paths.report = env_default("ABELIAN_REPORT");
  Output probe_report(paths.report, out);
  if (!paths.histogram.empty()) Output probe(paths.histogram, out);

  SearchReport r = exhaustive_search(config);
  Json j = exhaust_json(config.language, r);
  j["lexmin"] = o.lexmin;
  return finish_exhaust(r, std::move(j), paths, command, out);
}

int cmd_lemma(unsigned k, const std::string& part_text, const std::string& detector,
              const ExhaustOptions& o, Paths paths, const std::string& command,
              std::ostream& out) {
  LemmaConfig lc;
  lc.k = k;
  lc.lexmin = o.lexmin;
  lc.detector = detector;
  ExhaustiveConfig config;
  try {
    lc.part = parse_lemma_part(part_text);
    config = lemma_config(lc);
    Detector::from_name(detector, config.language.alpha, false);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  apply_exhaust_options(config, o, paths);
  if (paths.report.empty()) paths.report = env_default("ABELIAN_REPORT");
  Output probe_report(paths.report, out);
  if (!paths.histogram.empty()) Output probe(paths.histogram, out);

  SearchReport r = exhaustive_search(config);
  Json j = exhaust_json(config.language, r);
  j["part"] = to_string(lc.part);
  j["prefix"] = to_string(config.prefix);
  j["forbidden_permutation"] = config.language.forbidden_permutation;
  j["lexmin"] = o.lexmin;
  return finish_exhaust(r, std::move(j), paths, command, out);
}

// gap and bench

int cmd_gap(unsigned sigma, const std::string& lengths, std::uint64_t samples,
            std::uint64_t seed, const Paths& paths, std::ostream& out) {
  const auto ls = parse_list(lengths);
  for (auto l : ls)
    if (l < 1) throw UsageError("l must be >= 1");
  Output csv(paths.output, out);
  *csv << "l,mean_delta\n";
  for (auto l : ls) *csv << l << ',' << gap_estimate(sigma, l, samples, seed) << '\n';
  return 0;
}

int cmd_bench(unsigned sigma, const std::string& alpha_text,
              const std::string& lengths, std::uint64_t samples, std::uint64_t seed,
              const Paths& paths, std::ostream& out, std::ostream& err) {
  const Exponent alpha = parse_alpha(alpha_text, err);
  if (!admissible(DetectorKind::BigDual, alpha))
    throw UsageError("exponent " + alpha.to_string() +
                     " outside the range of the dual detector");
  const auto ns = parse_list(lengths);
  for (auto n : ns)
    if (n < 1) throw UsageError("n must be >= 1");
  Output csv(paths.output, out);
  *csv << "n,mean_iterations,mean_seconds\n";
  for (const auto& row : dual_scaling_benchmark(ns, samples, seed, alpha, sigma))
    *csv << row.n << ',' << row.mean_iterations << ',' << row.mean_seconds << '\n';
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Search tools for Abelian-power-free languages"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "help for every subcommand");

  Common common;
  Paths paths;
  WalkOptions walk;
  ExhaustOptions exhaust;

  auto* check = app.add_subcommand("check", "decide whether a word is free");
  add_common(check, common);
  std::string word_text;
  std::string word_file;
  auto* word_opt = check->add_option("--word", word_text, "word over a, b, c, ...");
  auto* file_opt = check->add_option("--file", word_file, "file holding the word");
  word_opt->excludes(file_opt);

  auto add_walk_options = [&](CLI::App* cmd) {
    add_common(cmd, common);
    cmd->add_option("--nodes,-N", walk.nodes, "visited nodes per walk")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--seed", walk.seed, "random seed")->capture_default_str();
    cmd->add_flag("--backtrack", walk.backtrack, "enable forced backtracking");
    cmd->add_option("--dictionary-limit", walk.dictionary_limit,
                    "length at which auto drops the dictionary")
        ->capture_default_str();
    cmd->add_option("--report", paths.report, "JSON summary path (default stdout)");
  };

  auto* walk_cmd = app.add_subcommand("walk", "one random depth-first walk");
  add_walk_options(walk_cmd);
  walk_cmd->add_option("--trace", paths.trace, "CSV of node_index,level");
  walk_cmd->add_option("--checkpoint", paths.checkpoint, "checkpoint file");
  walk_cmd->add_option("--checkpoint-every", walk.interval, "nodes between checkpoints")
      ->capture_default_str();
  walk_cmd->add_option("--resume", paths.resume, "continue from a checkpoint");
  walk_cmd->add_option("--stop-after", walk.stop_after,
                       "stop at this node count, saving a checkpoint");

  auto* batch_cmd = app.add_subcommand("batch", "independent random walks");
  add_walk_options(batch_cmd);
  batch_cmd->add_option("--runs", walk.runs, "number of walks")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  batch_cmd->add_option("--jobs", walk.jobs, "parallel walks")->capture_default_str();
  batch_cmd->add_option("--runs-csv", paths.output, "per-run CSV");

  auto add_exhaust_options = [&](CLI::App* cmd) {
    cmd->add_flag("--lexmin", exhaust.lexmin, "enumerate lexmin words only");
    cmd->add_option("--histogram", paths.histogram, "CSV of length,count");
    cmd->add_option("--depth-cap", exhaust.depth_cap, "abort beyond this length")
        ->capture_default_str();
    cmd->add_option("--jobs", exhaust.jobs, "parallel subtree jobs")
        ->capture_default_str();
    cmd->add_option("--split-depth", exhaust.split_depth,
                    "length of the words rooting the parallel jobs");
    cmd->add_option("--checkpoint", paths.checkpoint, "checkpoint file");
    cmd->add_option("--checkpoint-every", exhaust.interval,
                    "nodes between checkpoints")
        ->capture_default_str();
    cmd->add_option("--resume", paths.resume, "continue from a checkpoint");
    cmd->add_option("--stop-after", exhaust.stop_after,
                    "stop at this node count, saving a checkpoint");
    cmd->add_option("--report", paths.report, "JSON report path (default stdout)");
  };

  auto* exhaust_cmd = app.add_subcommand("exhaust", "exhaustive depth-first search");
  add_common(exhaust_cmd, common);
  exhaust_cmd->add_option("--prefix", exhaust.prefix, "search below this word");
  add_exhaust_options(exhaust_cmd);

  auto* lemma_cmd = app.add_subcommand(
      "lemma", "search one of the three reduced languages for k letters");
  unsigned k = 6;
  std::string part = "L1";
  std::string lemma_detector = "dict";
  lemma_cmd->add_option("--sigma,-k", k, "alphabet size k >= 6")
      ->check(CLI::Range(6, 10))
      ->capture_default_str();
  lemma_cmd->add_option("--part", part, "L1, L2 or L3")->capture_default_str();
  lemma_cmd->add_option("--detector", lemma_detector, "detector name")
      ->capture_default_str();
  add_exhaust_options(lemma_cmd);

  auto* gap_cmd = app.add_subcommand("gap", "estimate the mean suffix-cover gap");
  unsigned gap_sigma = 2;
  std::string gap_l = "10000";
  std::uint64_t samples = 10000;
  std::uint64_t seed = 1;
  gap_cmd->add_option("--sigma", gap_sigma, "alphabet size")
      ->check(CLI::Range(2, 10))
      ->capture_default_str();
  gap_cmd->add_option("--l", gap_l, "prefix lengths, comma separated")
      ->capture_default_str();
  gap_cmd->add_option("--samples", samples, "random words per length")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gap_cmd->add_option("--seed", seed, "random seed")->capture_default_str();
  gap_cmd->add_option("--output", paths.output, "CSV path (default stdout)");

  auto* bench_cmd = app.add_subcommand("bench", "dual detector work on random words");
  unsigned bench_sigma = 3;
  std::string bench_alpha = "7/3+";
  std::string bench_n = "1000,4000,16000";
  std::uint64_t bench_samples = 1000;
  bench_cmd->add_option("--sigma", bench_sigma, "alphabet size")
      ->check(CLI::Range(2, 10))
      ->capture_default_str();
  bench_cmd->add_option("--alpha", bench_alpha, "exponent")->capture_default_str();
  bench_cmd->add_option("--n", bench_n, "word lengths, comma separated")
      ->capture_default_str();
  bench_cmd->add_option("--samples", bench_samples, "random words per length")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--seed", seed, "random seed")->capture_default_str();
  bench_cmd->add_option("--output", paths.output, "CSV path (default stdout)");

  std::vector<const char*> argv;
  argv.push_back(args.empty() ? "abelian" : args[0].c_str());
  for (std::size_t i = 1; i < args.size(); ++i) argv.push_back(args[i].c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const std::string command = join(args);
  try {
    if (*check) {
      if (word_text.empty() && word_file.empty())
        throw UsageError("check needs --word or --file");
      return cmd_check(common, word_text, word_file, out, err);
    }
    if (*walk_cmd) return cmd_walk(common, walk, paths, command, out, err);
    if (*batch_cmd) return cmd_batch(common, walk, paths, command, out, err);
    if (*exhaust_cmd) return cmd_exhaust(common, exhaust, paths, command, out, err);
    if (*lemma_cmd)
      return cmd_lemma(k, part, lemma_detector, exhaust, paths, command, out);
    if (*gap_cmd) return cmd_gap(gap_sigma, gap_l, samples, seed, paths, out);
    if (*bench_cmd)
      return cmd_bench(bench_sigma, bench_alpha, bench_n, bench_samples, seed, paths,
                       out, err);
  } catch (const std::exception& e) {
    // Usage, configuration, checkpoint and I/O errors alike.
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace abelian
