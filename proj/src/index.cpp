#include "abelian/index.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace abelian {

// PrefixCountTable

PrefixCountTable::PrefixCountTable(unsigned sigma)
    : sigma_(sigma), rows_(sigma, 0) {}

void PrefixCountTable::push(Letter a) {
  std::size_t base = rows_.size() - sigma_;
  rows_.resize(rows_.size() + sigma_);
  std::copy_n(rows_.begin() + static_cast<std::ptrdiff_t>(base), sigma_,
              rows_.begin() + static_cast<std::ptrdiff_t>(base + sigma_));
  ++rows_[base + sigma_ + a];
}

void PrefixCountTable::pop() { rows_.resize(rows_.size() - sigma_); }

// SuffixDictionary

const std::uint64_t SuffixDictionary::kLetterHash[kMaxSigma] = {
    0x9e3779b97f4a7c15ULL, 0xbf58476d1ce4e5b9ULL, 0x94d049bb133111ebULL,
    0xd6e8feb86659fd93ULL, 0xa0761d6478bd642fULL, 0xe7037ed1a0b428dbULL,
    0x8ebc6af09c88c6e3ULL, 0x589965cc75374cc3ULL, 0x1d8e4e27c47d124fULL,
    0xc2b2ae3d27d4eb4fULL, 0x165667b19e3779f9ULL, 0x85ebca77c2b2ae63ULL,
    0x27d4eb2f165667c5ULL, 0xff51afd7ed558ccdULL, 0xc4ceb9fe1a85ec53ULL,
    0x2545f4914f6cdd1dULL};

SuffixDictionary::SuffixDictionary(unsigned sigma)
    : sigma_(sigma), slots_(1024), mask_(1023) {}

bool SuffixDictionary::matches(const Slot& s, const ParikhVector& p,
                               std::uint64_t hash, std::uint32_t length,
                               const PrefixCountTable& counts) const noexcept {
  if (s.hash != hash || s.length != length) return false;
  const std::uint32_t* hi = counts.row(s.last + length - 1);
  const std::uint32_t* lo = counts.row(s.last - 1);
  for (unsigned a = 0; a < sigma_; ++a)
    if (hi[a] - lo[a] != p[a]) return false;
  return true;
}

std::size_t SuffixDictionary::find_slot(const ParikhVector& p,
                                        std::uint64_t hash,
                                        std::uint32_t length,
                                        const PrefixCountTable& counts) const
    noexcept {
  std::size_t idx = mix(hash) & mask_;
  while (slots_[idx].length != 0 &&
         !matches(slots_[idx], p, hash, length, counts))
    idx = (idx + 1) & mask_;
  return idx;
}

Pos SuffixDictionary::last(const ParikhVector& p, std::uint64_t hash,
                           std::uint32_t length,
                           const PrefixCountTable& counts) const noexcept {
  return slots_[find_slot(p, hash, length, counts)].last;
}

void SuffixDictionary::grow() {
  std::vector<Slot> old = std::move(slots_);
  slots_.assign(old.size() * 2, Slot{});
  mask_ = slots_.size() - 1;
  for (const Slot& s : old) {
    if (s.length == 0) continue;
    std::size_t idx = mix(s.hash) & mask_;
    while (slots_[idx].length != 0) idx = (idx + 1) & mask_;
    slots_[idx] = s;
  }
}

void SuffixDictionary::erase_slot(std::size_t idx) noexcept {
  // Backward-shift deletion keeps probe sequences gap-free.
  std::size_t hole = idx;
  std::size_t j = (idx + 1) & mask_;
  while (slots_[j].length != 0) {
    std::size_t home = mix(slots_[j].hash) & mask_;
    if (((j - home) & mask_) >= ((j - hole) & mask_)) {
      slots_[hole] = slots_[j];
      hole = j;
    }
    j = (j + 1) & mask_;
  }
  slots_[hole] = Slot{};
  --used_;
}

void SuffixDictionary::add_suffixes(const Word& w,
                                    const PrefixCountTable& counts, Pos end) {
  if (end == 0) return;
  std::size_t base = offset(end);
  pred_.resize(base + end);
  if ((used_ + end) * 2 > slots_.size()) {
    while ((used_ + end) * 2 > slots_.size()) grow();
  }
  ParikhVector p(sigma_);
  std::uint64_t hash = 0;
  for (Pos s = end; s >= 1; --s) {
    Letter a = w.at(s);
    ++p[a];
    hash += kLetterHash[a];
    std::uint32_t length = end - s + 1;
    std::size_t idx = find_slot(p, hash, length, counts);
    Slot& slot = slots_[idx];
    if (slot.length != 0) {
      pred_[base + s - 1] = slot.last;
      slot.last = s;
    } else {
      pred_[base + s - 1] = 0;
      slot = Slot{hash, s, length};
      ++used_;
    }
  }
}

void SuffixDictionary::remove_suffixes(const Word& w,
                                       const PrefixCountTable& counts,
                                       Pos end) {
  if (end == 0) return;
  std::size_t base = offset(end);
  ParikhVector p(sigma_);
  std::uint64_t hash = 0;
  for (Pos s = end; s >= 1; --s) {
    Letter a = w.at(s);
    ++p[a];
    hash += kLetterHash[a];
    std::size_t idx = find_slot(p, hash, end - s + 1, counts);
    Pos prev = pred_[base + s - 1];
    if (prev != 0)
      slots_[idx].last = prev;
    else
      erase_slot(idx);
  }
  pred_.resize(base);
}

std::map<std::vector<std::uint32_t>, std::vector<Pos>>
SuffixDictionary::contents(const PrefixCountTable& counts, Pos upto) const {
  std::map<std::vector<std::uint32_t>, std::vector<Pos>> out;
  for (const Slot& s : slots_) {
    if (s.length == 0) continue;
    std::vector<Pos> starts;
    for (Pos pos = s.last; pos != 0; pos = previous(pos, s.length))
      if (pos + s.length - 1 <= upto) starts.push_back(pos);
    if (starts.empty()) continue;
    std::reverse(starts.begin(), starts.end());
    const std::uint32_t* hi = counts.row(s.last + s.length - 1);
    const std::uint32_t* lo = counts.row(s.last - 1);
    std::vector<std::uint32_t> key(sigma_);
    for (unsigned a = 0; a < sigma_; ++a) key[a] = hi[a] - lo[a];
    out.emplace(std::move(key), std::move(starts));
  }
  return out;
}

// IncrementalIndex

IncrementalIndex::IncrementalIndex(unsigned sigma, bool with_dictionary)
    : sigma_(sigma), counts_(sigma), positions_(sigma) {
  if (sigma < 1 || sigma > kMaxSigma)
    throw std::invalid_argument("alphabet size must be in [1, 16]");
  if (with_dictionary) dict_.emplace(sigma);
}

void IncrementalIndex::push(Letter a) {
  if (a >= sigma_)
    throw std::invalid_argument("letter " + std::to_string(a) +
                                " outside alphabet of size " +
                                std::to_string(sigma_));
  if (dict_ && dict_end_ < size()) {
    dict_->add_suffixes(word_, counts_, static_cast<Pos>(size()));
    dict_end_ = static_cast<Pos>(size());
  }
  word_.push(a);
  counts_.push(a);
  positions_.push(a, static_cast<Pos>(size()));
}

Letter IncrementalIndex::pop() {
  if (word_.empty()) throw std::logic_error("pop on the empty word");
  auto n = static_cast<Pos>(size());
  if (dict_ && dict_end_ == n) {
    dict_->remove_suffixes(word_, counts_, n);
    dict_end_ = n - 1;
  }
  Letter a = word_.pop();
  counts_.pop();
  positions_.pop(a);
  return a;
}

ParikhVector IncrementalIndex::parikh(Pos i, Pos j) const {
  if (i < 1 || i > size() + 1 || j > size())
    throw std::out_of_range("factor bounds outside the word");
  ParikhVector p(sigma_);
  if (j >= i) parikh_into(i, j, p);
  return p;
}

Pos IncrementalIndex::cover(const ParikhVector& p, Pos j) const {
  if (p.is_zero()) throw std::invalid_argument("cover of the zero vector");
  if (j < 1 || j > size())
    throw std::out_of_range("cover right bound outside the word");
  return cover_unchecked(p, j);
}

void IncrementalIndex::disable_dictionary() noexcept {
  dict_.reset();
  dict_end_ = 0;
}

std::map<std::vector<std::uint32_t>, std::vector<Pos>>
IncrementalIndex::dictionary_contents() const {
  if (!dict_ || word_.empty()) return {};
  return dict_->contents(counts_, static_cast<Pos>(size() - 1));
}

}  // namespace abelian
