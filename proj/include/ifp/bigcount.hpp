#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace ifp {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact nonnegative integer with a natural-log view.
class BigCount {
 public:
  BigCount() = default;
  BigCount(BigInt v);  // NOLINT: implicit on purpose
  BigCount(std::uint64_t v) : BigCount(BigInt(v)) {}
  BigCount(int v) : BigCount(BigInt(v)) {}

  const BigInt& value() const noexcept { return value_; }
  /// Natural log; -inf for zero.
  double log() const;
  double to_double() const;
  std::string str() const { return value_.str(); }
  bool is_zero() const { return value_.is_zero(); }

  friend bool operator==(const BigCount& a, const BigCount& b) { return a.value_ == b.value_; }
  friend auto operator<=>(const BigCount& a, const BigCount& b) {
    return a.value_ < b.value_ ? std::strong_ordering::less
           : b.value_ < a.value_ ? std::strong_ordering::greater
                                 : std::strong_ordering::equal;
  }

 private:
  BigInt value_;
};

/// Natural log of a nonnegative big integer (-inf for zero).
double log_big(const BigInt& v);

/// Exact binomial coefficient; zero when k > n or k < 0.
BigInt binom(std::int64_t n, std::int64_t k);

/// log binom(n, k) via lgamma; -inf when the coefficient is zero.
double log_binom(double n, double k);

/// Row cache of exact binomials binom(m, j) for m <= n_max, j <= k_max.
class BinomialTable {
 public:
  BinomialTable(int n_max, int k_max);

  const BigInt& operator()(int m, int j) const;
  int n_max() const noexcept { return n_max_; }
  int k_max() const noexcept { return k_max_; }

 private:
  int n_max_;
  int k_max_;
  std::vector<BigInt> table_;
  BigInt zero_;
};

/// Exact quotient as a double, accurate even when both operands overflow double.
double ratio(const BigInt& num, const BigInt& den);

}  // namespace ifp
