#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace ifp {

/// Growable bitset used for edge-incidence masks.
class Bits {
 public:
  Bits() = default;
  explicit Bits(std::size_t size) : size_(size), w_((size + 63) / 64, 0) {}

  std::size_t size() const noexcept { return size_; }
  void set(std::size_t i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }

  int count() const {
    int c = 0;
    for (auto x : w_) c += std::popcount(x);
    return c;
  }
  /// |this \ other|.
  int count_minus(const Bits& other) const {
    int c = 0;
    for (std::size_t i = 0; i < w_.size(); ++i) c += std::popcount(w_[i] & ~other.w_[i]);
    return c;
  }
  int count_and(const Bits& other) const {
    int c = 0;
    for (std::size_t i = 0; i < w_.size(); ++i) c += std::popcount(w_[i] & other.w_[i]);
    return c;
  }
  bool intersects(const Bits& other) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & other.w_[i]) return true;
    return false;
  }
  bool none() const {
    for (auto x : w_)
      if (x) return false;
    return true;
  }
  Bits& operator|=(const Bits& other) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= other.w_[i];
    return *this;
  }
  Bits& operator&=(const Bits& other) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= other.w_[i];
    return *this;
  }
  friend bool operator==(const Bits&, const Bits&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> w_;
};

}  // namespace ifp
