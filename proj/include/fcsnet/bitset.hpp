#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "fcsnet/common.hpp"

namespace fcsnet {

/// Fixed-length bit vector for feature-selection chromosomes and used-feature
/// sets. Word-packed so popcount and set operations stay cheap at GWAS widths.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  std::size_t size() const { return n_; }

  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1ULL; }

  void set(std::size_t i, bool v = true) {
    if (v)
      words_[i >> 6] |= 1ULL << (i & 63);
    else
      words_[i >> 6] &= ~(1ULL << (i & 63));
  }

  void flip(std::size_t i) { words_[i >> 6] ^= 1ULL << (i & 63); }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  std::vector<std::uint32_t> ones() const {
    std::vector<std::uint32_t> out;
    out.reserve(count());
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      std::uint64_t w = words_[wi];
      while (w) {
        int b = std::countr_zero(w);
        out.push_back(static_cast<std::uint32_t>(wi * 64 + b));
        w &= w - 1;
      }
    }
    return out;
  }

  bool is_subset_of(const Bitset& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~other.words_[i]) return false;
    return true;
  }

  Bitset& operator|=(const Bitset& other) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    return *this;
  }

  Bitset& operator&=(const Bitset& other) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
    return *this;
  }

  friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
  friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }

  bool operator==(const Bitset& other) const = default;

  bool any() const {
    for (auto w : words_)
      if (w) return true;
    return false;
  }

  std::uint64_t hash() const {
    std::uint64_t h = fnv1a64(words_.data(), words_.size() * sizeof(std::uint64_t));
    return splitmix64(h ^ n_);
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace fcsnet
