#pragma once

#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace posim {

// Fixed-size dynamic bitset used for down-set rows of the transitive closure.
// A partial order on n candidates keeps n of these, so the closure costs
// n^2/8 bytes (~512 KB at n = 2047).
class DynBitset {
 public:
  DynBitset() = default;
  explicit DynBitset(std::size_t nbits)
      : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

  std::size_t size() const { return nbits_; }

  void set(std::size_t i) {
    assert(i < nbits_);
    words_[i >> 6] |= std::uint64_t{1} << (i & 63);
  }

  void reset(std::size_t i) {
    assert(i < nbits_);
    words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }

  bool test(std::size_t i) const {
    assert(i < nbits_);
    return (words_[i >> 6] >> (i & 63)) & 1;
  }

  void clear() { words_.assign(words_.size(), 0); }

  bool any() const {
    for (std::uint64_t w : words_)
      if (w) return true;
    return false;
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (std::uint64_t w : words_) c += std::popcount(w);
    return c;
  }

  DynBitset& operator|=(const DynBitset& o) {
    assert(nbits_ == o.nbits_);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }

  DynBitset& operator&=(const DynBitset& o) {
    assert(nbits_ == o.nbits_);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }

  bool operator==(const DynBitset& o) const {
    return nbits_ == o.nbits_ && words_ == o.words_;
  }

  bool subset_of(const DynBitset& o) const {
    assert(nbits_ == o.nbits_);
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }

  // Calls fn(i) for every set bit, ascending.
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      std::uint64_t w = words_[wi];
      while (w) {
        fn(static_cast<int>((wi << 6) + std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  friend std::size_t and_count(const DynBitset& a, const DynBitset& b) {
    assert(a.nbits_ == b.nbits_);
    std::size_t c = 0;
    for (std::size_t i = 0; i < a.words_.size(); ++i)
      c += std::popcount(a.words_[i] & b.words_[i]);
    return c;
  }

 private:
  std::size_t nbits_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace posim
