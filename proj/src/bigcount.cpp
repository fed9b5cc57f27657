#include "ifp/bigcount.hpp"

#include "ifp/error.hpp"

#include <cmath>
#include <limits>

namespace ifp {

BigCount::BigCount(BigInt v) : value_(std::move(v)) {
  if (value_ < 0) throw Error(ErrorCode::OutOfRange, "BigCount must be nonnegative");
}

double log_big(const BigInt& v) {
  if (v.is_zero()) return -std::numeric_limits<double>::infinity();
  const auto bits = static_cast<long>(boost::multiprecision::msb(v)) + 1;
  if (bits <= 1000) return std::log(v.convert_to<double>());
  // Keep the top 64 bits and add back the shifted-out magnitude.
  const long shift = bits - 64;
  const BigInt top = v >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

double BigCount::log() const { return log_big(value_); }

double BigCount::to_double() const { return value_.convert_to<double>(); }

BigInt binom(std::int64_t n, std::int64_t k) {
  if (n < 0) throw Error(ErrorCode::OutOfRange, "binom with negative n");
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

double log_binom(double n, double k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

BinomialTable::BinomialTable(int n_max, int k_max)
    : n_max_(n_max), k_max_(k_max),
      table_(static_cast<std::size_t>(n_max + 1) * static_cast<std::size_t>(k_max + 1)) {
  const auto w = static_cast<std::size_t>(k_max + 1);
  for (int m = 0; m <= n_max; ++m) {
    table_[m * w] = 1;
    for (int j = 1; j <= k_max; ++j) {
      if (m == 0) continue;
      table_[m * w + j] = table_[(m - 1) * w + j] + table_[(m - 1) * w + j - 1];
    }
  }
}

const BigInt& BinomialTable::operator()(int m, int j) const {
  if (m < 0 || j < 0 || j > m) return zero_;
  if (m > n_max_ || j > k_max_) throw Error(ErrorCode::OutOfRange, "binomial table lookup out of range");
  return table_[static_cast<std::size_t>(m) * static_cast<std::size_t>(k_max_ + 1) + j];
}

double ratio(const BigInt& num, const BigInt& den) {
  if (den.is_zero()) throw Error(ErrorCode::InvalidArgument, "ratio with zero denominator");
  if (num.is_zero()) return 0.0;
  if (boost::multiprecision::msb(num) < 1000 && boost::multiprecision::msb(den) < 1000)
    return num.convert_to<double>() / den.convert_to<double>();
  return std::exp(log_big(num) - log_big(den));
}

}  // namespace ifp
