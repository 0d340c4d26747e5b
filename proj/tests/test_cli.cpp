#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "abelian/cli.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace abelian;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "abelian");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() /
          ("abelian_cli_" + std::to_string(::getpid()) + "_" + name))
      .string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.rfind(prefix, 0) == 0;
}

}  // namespace

TEST_CASE("check") {
  Run r = run({"check", "--sigma", "5", "--alpha", "3/2", "--word", "abcdebdaec"});
  CHECK(r.code == 1);
  CHECK(r.out ==
        "FORBIDDEN prefix=10 x=1..5 (abcde) z=6..10 (bdaec) detector=dict\n");

  r = run({"check", "--sigma", "3", "--alpha", "7/3", "--dual", "--word", "acabcba"});
  CHECK(r.code == 1);
  CHECK(starts_with(r.out, "FORBIDDEN prefix=7"));

  r = run({"check", "--sigma", "3", "--alpha", "7/3", "--word", "acabcba"});
  CHECK(r.code == 0);
  CHECK(r.out == "FREE detector=big\n");

  r = run({"check", "--sigma", "2", "--alpha", "2", "--word", "a"});
  CHECK(r.code == 0);
  CHECK(r.out == "FREE detector=small\n");

  r = run({"check", "--sigma", "4", "--alpha", "3/2+", "--detector", "small", "--word",
           "abcdbadc"});
  CHECK(r.code == 1);
  CHECK(r.out == "FORBIDDEN prefix=8 x=1..4 (abcd) z=5..8 (badc) detector=small\n");

  const std::string file = temp_path("word.txt");
  std::ofstream(file) << "abcbaca\n";
  r = run({"check", "--sigma", "3", "--alpha", "7/3", "--file", file});
  CHECK(r.code == 1);
  std::filesystem::remove(file);
}

TEST_CASE("exponent warnings and usage errors") {
  Run r = run({"check", "--sigma", "2", "--alpha", "4/2", "--word", "ab"});
  CHECK(r.code == 0);
  CHECK(r.err.find("normalized to 2") != std::string::npos);

  CHECK(run({"check", "--sigma", "2", "--alpha", "1/2", "--word", "ab"}).code == 2);
  CHECK(run({"check", "--sigma", "2", "--alpha", "2", "--word", "abc"}).code == 2);
  CHECK(run({"check", "--sigma", "2", "--alpha", "2", "--word", "a", "--detector",
             "big"}).code == 2);
  CHECK(run({"check", "--sigma", "11", "--alpha", "2", "--word", "a"}).code == 2);
  CHECK(run({"check", "--word", "a"}).code == 2);
  CHECK(run({"check", "--sigma", "2", "--alpha", "2", "--file", temp_path("none")})
            .code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"walk", "--alpha", "3/2+", "--sigma", "5", "--report",
             "/nonexistent/dir/r.json"}).code == 2);
}

TEST_CASE("walk") {
  const std::string trace = temp_path("trace.csv");
  Run r = run({"walk", "--sigma", "5", "--alpha", "3/2+", "--nodes", "1", "--trace", trace});
  CHECK(r.code == 0);
  CHECK(slurp(trace) == "node_index,level\n1,0\n");
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["N"] == 1);
  CHECK(j["ml_max"] == 0);
  CHECK(j["runs"] == 1);

  r = run({"walk", "--sigma", "5", "--alpha", "3/2+", "--nodes", "2000", "--seed", "3",
           "--trace", trace});
  CHECK(r.code == 0);
  const auto k = nlohmann::json::parse(r.out);
  CHECK(k["verdict"] == "infinite-like");
  std::istringstream rows(slurp(trace));
  std::string line;
  std::size_t lines = 0;
  while (std::getline(rows, line)) ++lines;
  CHECK(lines == 2001);
  std::filesystem::remove(trace);
}

TEST_CASE("walk checkpoints") {
  const std::string ckpt = temp_path("walk.ckpt");
  const std::vector<std::string> base = {"walk", "--sigma", "4", "--alpha", "9/5+",
                                         "--nodes", "5000", "--seed", "2", "--backtrack"};
  const Run whole = run(base);
  REQUIRE(whole.code == 0);

  auto args = base;
  args.insert(args.end(), {"--checkpoint", ckpt, "--stop-after", "2000"});
  const Run first = run(args);
  CHECK(first.code == 1);
  CHECK(nlohmann::json::parse(first.out)["interrupted"] == true);

  args = base;
  args.insert(args.end(), {"--resume", ckpt});
  const Run rest = run(args);
  CHECK(rest.code == 0);
  const auto a = nlohmann::json::parse(whole.out);
  const auto b = nlohmann::json::parse(rest.out);
  CHECK(a["ml_max"] == b["ml_max"]);
  CHECK(a["rejected"] == b["rejected"]);
  CHECK(a["final_level"] == b["final_level"]);

  args = {"walk", "--sigma", "4", "--alpha", "2", "--nodes", "5000", "--seed", "2",
          "--resume", ckpt};
  const Run mismatch = run(args);
  CHECK(mismatch.code == 2);
  CHECK(mismatch.err.find("does not match") != std::string::npos);
  std::filesystem::remove(ckpt);
}

TEST_CASE("batch") {
  const std::string csv = temp_path("runs.csv");
  Run r = run({"batch", "--sigma", "4", "--alpha", "9/5+", "--nodes", "3000", "--runs",
               "3", "--backtrack", "--runs-csv", csv});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["runs"] == 3);
  CHECK(j["total_nodes"] == 9000);
  CHECK(j.contains("verdicts"));
  CHECK(starts_with(slurp(csv), "run,seed,ml,final_level,count,verdict\n0,1,"));
  std::filesystem::remove(csv);
}

TEST_CASE("exhaust") {
  const std::string hist = temp_path("hist.csv");
  Run r = run({"exhaust", "--sigma", "2", "--alpha", "2", "--histogram", hist});
  CHECK(r.code == 0);
  CHECK(slurp(hist) == "length,count\n0,1\n1,2\n2,2\n3,2\n");
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["max_length"] == 3);
  CHECK(j["total_nodes"] == 7);
  CHECK(j["verdict"] == "finite");

  r = run({"exhaust", "--sigma", "2", "--alpha", "4", "--detector", "oracle",
           "--depth-cap", "20"});
  CHECK(r.code == 1);
  CHECK(nlohmann::json::parse(r.out)["verdict"] == "inconclusive");

  // Interrupted and resumed runs give the same histogram.
  const std::string ckpt = temp_path("exhaust.ckpt");
  const std::string hist2 = temp_path("hist2.csv");
  const std::vector<std::string> base = {"exhaust", "--sigma", "4", "--alpha", "3/2+",
                                         "--lexmin"};
  auto args = base;
  args.insert(args.end(), {"--histogram", hist});
  REQUIRE(run(args).code == 0);
  args = base;
  args.insert(args.end(), {"--checkpoint", ckpt, "--stop-after", "100"});
  CHECK(run(args).code == 1);
  args = base;
  args.insert(args.end(), {"--resume", ckpt, "--histogram", hist2});
  CHECK(run(args).code == 0);
  CHECK(slurp(hist) == slurp(hist2));

  args = {"exhaust", "--sigma", "4", "--alpha", "3/2+", "--resume", ckpt};
  CHECK(run(args).code == 2);
  CHECK(run({"exhaust", "--sigma", "4", "--alpha", "3/2+", "--jobs", "2", "--checkpoint",
             ckpt}).code == 2);
  std::filesystem::remove(ckpt);
  std::filesystem::remove(hist);
  std::filesystem::remove(hist2);
}

TEST_CASE("lemma") {
  Run r = run({"lemma", "--sigma", "8", "--part", "L1", "--detector", "small"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["alpha"] == "6/5+");
  CHECK(j["prefix"] == "abcdef");
  CHECK(j["forbidden_permutation"] == 7);
  CHECK(j["verdict"] == "finite");
  CHECK(run({"lemma", "--sigma", "5"}).code == 2);
  CHECK(run({"lemma", "--sigma", "8", "--part", "L4"}).code == 2);
}

TEST_CASE("gap and bench") {
  Run r = run({"gap", "--sigma", "2", "--l", "1,5", "--samples", "1000"});
  CHECK(r.code == 0);
  CHECK(starts_with(r.out, "l,mean_delta\n1,"));
  CHECK(r.out.find("\n5,") != std::string::npos);
  CHECK(run({"gap", "--l", "0"}).code == 2);
  CHECK(run({"gap", "--l", "x"}).code == 2);

  r = run({"bench", "--n", "10,40", "--samples", "5"});
  CHECK(r.code == 0);
  CHECK(starts_with(r.out, "n,mean_iterations,mean_seconds\n10,"));
  CHECK(run({"bench", "--alpha", "2"}).code == 2);
}
