#include "abelian/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace abelian {

namespace {

const char* kMagic = "abelian-checkpoint";

std::string word_field(const Word& w) { return w.empty() ? "-" : to_string(w); }

Word parse_word_field(const std::string& text) {
  return text == "-" ? Word() : parse_word(text);
}

[[noreturn]] void malformed(const std::string& what) {
  throw std::runtime_error("malformed checkpoint: " + what);
}

}  // namespace

std::string format_checkpoint(const Checkpoint& c) {
  std::ostringstream out;
  out << kMagic << ' ' << kCheckpointVersion << '\n';
  out << "mode " << c.mode << '\n';
  out << "sigma " << c.sigma << '\n';
  out << "alpha " << c.alpha << '\n';
  out << "detector " << c.detector << '\n';
  out << "dual " << c.dual << '\n';
  out << "lexmin " << c.lexmin << '\n';
  out << "permutation " << c.forbidden_permutation << '\n';
  out << "base " << c.base << '\n';
  out << "nodes " << c.nodes << '\n';
  out << "seed " << c.seed << '\n';
  out << "count " << c.count << '\n';
  out << "ml " << c.ml << '\n';
  out << "rejected " << c.rejected << '\n';
  out << "since_progress " << c.since_progress << '\n';
  out << "forced_backtracks " << c.forced_backtracks << '\n';
  out << "word " << word_field(c.word) << '\n';
  out << "remaining " << c.remaining.size() << std::hex;
  for (auto s : c.remaining) out << ' ' << s;
  out << std::dec << '\n';
  out << "histogram " << c.histogram.size();
  for (auto h : c.histogram) out << ' ' << h;
  out << '\n';
  out << "deepest " << word_field(c.deepest) << '\n';
  out << "rng " << (c.rng.empty() ? "-" : c.rng) << '\n';
  out << "end\n";
  return out.str();
}

Checkpoint parse_checkpoint(const std::string& text) {
  std::istringstream in(text);
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != kMagic) malformed("bad header");
  if (version != kCheckpointVersion)
    throw std::runtime_error("unsupported checkpoint version " +
                             std::to_string(version));
  Checkpoint c;
  std::string key;
  bool ended = false;
  while (in >> key) {
    if (key == "end") {
      ended = true;
      break;
    }
    std::string rest;
    if (key == "remaining") {
      std::size_t m = 0;
      in >> m >> std::hex;
      c.remaining.resize(m);
      for (auto& s : c.remaining) in >> s;
      in >> std::dec;
    } else if (key == "histogram") {
      std::size_t m = 0;
      in >> m;
      c.histogram.resize(m);
      for (auto& h : c.histogram) in >> h;
    } else if (key == "rng") {
      std::getline(in, rest);
      if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
      c.rng = rest == "-" ? "" : rest;
    } else if (key == "mode") {
      in >> c.mode;
    } else if (key == "sigma") {
      in >> c.sigma;
    } else if (key == "alpha") {
      in >> c.alpha;
    } else if (key == "detector") {
      in >> c.detector;
    } else if (key == "dual") {
      in >> c.dual;
    } else if (key == "lexmin") {
      in >> c.lexmin;
    } else if (key == "permutation") {
      in >> c.forbidden_permutation;
    } else if (key == "base") {
      in >> c.base;
    } else if (key == "nodes") {
      in >> c.nodes;
    } else if (key == "seed") {
      in >> c.seed;
    } else if (key == "count") {
      in >> c.count;
    } else if (key == "ml") {
      in >> c.ml;
    } else if (key == "rejected") {
      in >> c.rejected;
    } else if (key == "since_progress") {
      in >> c.since_progress;
    } else if (key == "forced_backtracks") {
      in >> c.forced_backtracks;
    } else if (key == "word" || key == "deepest") {
      in >> rest;
      try {
        (key == "word" ? c.word : c.deepest) = parse_word_field(rest);
      } catch (const std::invalid_argument& e) {
        malformed(e.what());
      }
    } else {
      malformed("unknown field '" + key + "'");
    }
    if (!in) malformed("bad value for '" + key + "'");
  }
  if (!ended) malformed("truncated file");
  return c;
}

void save_checkpoint(const std::string& path, const Checkpoint& checkpoint) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write checkpoint " + tmp);
    out << format_checkpoint(checkpoint);
    out.flush();
    if (!out) throw std::runtime_error("cannot write checkpoint " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename checkpoint to " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read checkpoint " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_checkpoint(text.str());
}

}  // namespace abelian
