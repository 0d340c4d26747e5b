#include <cmath>
#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

#include "abelian/experiments.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace abelian;

namespace {

SearchReport with_ml(std::uint64_t ml, std::uint64_t count = 10) {
  SearchReport r;
  r.ml = ml;
  r.count = count;
  return r;
}

SearchReport with_trace(std::vector<std::uint32_t> trace) {
  SearchReport r;
  r.count = trace.size();
  r.trace = std::move(trace);
  r.ml = *std::max_element(r.trace.begin(), r.trace.end());
  return r;
}

// Exact mean of delta from the distribution of the letters still missing
// from v, advanced one letter at a time until the unabsorbed mass is
// negligible.
double exact_gap(unsigned sigma, std::uint64_t l) {
  using Need = std::vector<std::uint64_t>;
  std::map<Need, double> dist{{Need(sigma, 0), 1.0}};
  for (std::uint64_t i = 0; i < l; ++i) {
    std::map<Need, double> next;
    for (const auto& [need, p] : dist)
      for (unsigned a = 0; a < sigma; ++a) {
        Need n = need;
        ++n[a];
        next[n] += p / sigma;
      }
    dist = std::move(next);
  }
  double mean = 0;
  double alive = 1;
  for (std::uint64_t step = 1; alive > 1e-15; ++step) {
    std::map<Need, double> next;
    for (const auto& [need, p] : dist)
      for (unsigned a = 0; a < sigma; ++a) {
        Need n = need;
        if (n[a] > 0) --n[a];
        if (std::all_of(n.begin(), n.end(), [](auto x) { return x == 0; })) {
          mean += p / sigma * static_cast<double>(step - l);
          alive -= p / sigma;
        } else {
          next[n] += p / sigma;
        }
      }
    dist = std::move(next);
  }
  return mean;
}

}  // namespace

TEST_CASE("batch statistics") {
  const BatchSummary s = summarize({with_ml(3), with_ml(1), with_ml(4), with_ml(2)});
  CHECK(s.runs == 4);
  CHECK(s.ml_max == 4);
  CHECK(s.ml_av == doctest::Approx(2.5));
  CHECK(s.ml_med == 2);
  CHECK(s.total_nodes == 40);
  CHECK(s.reports.size() == 4);

  const BatchSummary odd = summarize({with_ml(9), with_ml(1), with_ml(5)});
  CHECK(odd.ml_med == 5);

  const BatchSummary one = summarize({with_ml(7)});
  CHECK(one.ml_max == 7);
  CHECK(one.ml_av == doctest::Approx(7.0));
  CHECK(one.ml_med == 7);
  CHECK_THROWS_AS(summarize({}), std::invalid_argument);
}

TEST_CASE("batches are seeded per run and independent of jobs") {
  BatchConfig config;
  config.walk.language.sigma = 4;
  config.walk.language.alpha = Exponent(9, 5, true);
  config.walk.nodes = 5'000;
  config.runs = 4;
  config.seed_base = 20;
  const BatchSummary serial = run_batch(config);
  config.jobs = 3;
  const BatchSummary parallel = run_batch(config);
  REQUIRE(serial.reports.size() == 4);
  for (std::size_t r = 0; r < 4; ++r) {
    WalkConfig walk = config.walk;
    walk.seed = 20 + r;
    const SearchReport single = random_walk(walk);
    CHECK(serial.reports[r].ml == single.ml);
    CHECK(serial.reports[r].rejected == single.rejected);
    CHECK(parallel.reports[r].ml == single.ml);
    CHECK(parallel.reports[r].rejected == single.rejected);
  }
  CHECK(serial.ml_med == parallel.ml_med);
  CHECK(serial.total_nodes == 20'000);
  config.runs = 0;
  CHECK_THROWS_AS(run_batch(config), std::invalid_argument);
}

TEST_CASE("walk classifier") {
  CHECK(classify_behaviour(with_trace(std::vector<std::uint32_t>(1000, 50))) ==
        Behaviour::FiniteLike);

  std::vector<std::uint32_t> growing(1000);
  for (std::size_t i = 0; i < growing.size(); ++i)
    growing[i] = static_cast<std::uint32_t>(i / 2);
  CHECK(classify_behaviour(with_trace(growing)) == Behaviour::InfiniteLike);

  // Rises early, then oscillates below its maximum.
  std::vector<std::uint32_t> plateau(1000);
  for (std::size_t i = 0; i < plateau.size(); ++i)
    plateau[i] = i < 200 ? static_cast<std::uint32_t>(i / 4) : 45 + (i % 5);
  CHECK(classify_behaviour(with_trace(plateau)) == Behaviour::FiniteLike);

  // Slow growth: new maxima late, far below the proportional level.
  std::vector<std::uint32_t> slow(1000);
  for (std::size_t i = 0; i < slow.size(); ++i)
    slow[i] = static_cast<std::uint32_t>(std::sqrt(static_cast<double>(i)));
  CHECK(classify_behaviour(with_trace(slow)) == Behaviour::Inconclusive);

  // The last new maximum is at node 962 of 1000.
  ClassifierConfig short_plateau;
  short_plateau.plateau_fraction = 0.05;
  CHECK(classify_behaviour(with_trace(slow), short_plateau) == Behaviour::Inconclusive);
  short_plateau.plateau_fraction = 0.01;
  CHECK(classify_behaviour(with_trace(slow), short_plateau) == Behaviour::FiniteLike);

  // A sampled trace is scaled to the visited-node count.
  SearchReport sampled = with_trace(growing);
  sampled.count = 1000 * 100;
  CHECK(classify_behaviour(sampled) == Behaviour::Inconclusive);

  CHECK_THROWS_AS(classify_behaviour(SearchReport{}), std::invalid_argument);
  CHECK(to_string(Behaviour::FiniteLike) == "finite-like");
  CHECK(to_string(Behaviour::InfiniteLike) == "infinite-like");
  CHECK(to_string(Behaviour::Inconclusive) == "inconclusive");
}

TEST_CASE("walk in a language with long words looks infinite") {
  WalkConfig config;
  config.language.sigma = 5;
  config.language.alpha = Exponent(3, 2, true);
  config.nodes = 5'000;
  config.record_trace = true;
  const SearchReport r = random_walk(config);
  CHECK(classify_behaviour(r) == Behaviour::InfiniteLike);
}

TEST_CASE("gap estimator against exact expectations") {
  CHECK(exact_gap(2, 1) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(exact_gap(3, 1) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(exact_gap(2, 2) == doctest::Approx(1.5).epsilon(1e-9));
  for (auto [sigma, l] : {std::pair{2u, 1u}, {3u, 1u}, {2u, 3u}, {3u, 4u}}) {
    const double want = exact_gap(sigma, l);
    const double got = gap_estimate(sigma, l, 200'000, 5);
    CHECK(got == doctest::Approx(want).epsilon(0.02));
  }
  CHECK(gap_estimate(2, 100, 1000, 1) == gap_estimate(2, 100, 1000, 1));
  CHECK(gap_estimate(3, 1000, 2000, 1) >= gap_estimate(2, 1000, 2000, 1));
  CHECK_THROWS_AS(gap_estimate(2, 0, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(gap_estimate(2, 10, 0, 1), std::invalid_argument);
}

TEST_CASE("dual detector benchmark") {
  const auto a = dual_scaling_benchmark({1, 100, 400}, 50, 3);
  const auto b = dual_scaling_benchmark({1, 100, 400}, 50, 3);
  REQUIRE(a.size() == 3);
  CHECK(a[0].n == 1);
  CHECK(a[0].mean_iterations <= 1.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(a[i].mean_iterations == b[i].mean_iterations);
  CHECK(a[2].mean_iterations > a[1].mean_iterations);
  CHECK_THROWS_AS(dual_scaling_benchmark({10}, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(dual_scaling_benchmark({0}, 5, 1), std::invalid_argument);
}

TEST_CASE("length histograms") {
  ExhaustiveConfig config;
  config.language.sigma = 2;
  config.language.alpha = Exponent(2, 1);
  config.language.detector = "small";
  CHECK(length_histogram(config) == std::vector<std::uint64_t>{1, 2, 2, 2});
  config.lexmin = true;
  CHECK(length_histogram(config) == std::vector<std::uint64_t>{1, 1, 1, 1});

  config.language.alpha = Exponent(4, 1);
  config.language.detector = "oracle";
  config.depth_cap = 12;
  CHECK_THROWS_AS(length_histogram(config), std::runtime_error);
  CHECK(length_histogram(config, true).size() == 13);
}

TEST_CASE("summary json") {
  LanguageSpec language;
  language.sigma = 6;
  language.alpha = Exponent(4, 3, true);
  const BatchSummary s = summarize({with_ml(3, 100), with_ml(5, 100)});
  const auto j = nlohmann::ordered_json::parse(summary_json(language, 100, s, "finite-like"));
  std::vector<std::string> keys;
  for (const auto& [key, value] : j.items()) keys.push_back(key);
  CHECK(keys == std::vector<std::string>{"sigma", "alpha", "detector", "N", "runs",
                                         "ml_max", "ml_av", "ml_med", "total_nodes",
                                         "wall_seconds", "verdict"});
  CHECK(j["alpha"] == "4/3+");
  CHECK(j["ml_max"] == 5);
  CHECK(j["ml_med"] == 3);
  CHECK(j["total_nodes"] == 200);
  CHECK(j["verdict"] == "finite-like");
}
