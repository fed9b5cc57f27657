#include "ifp/stats.hpp"

#include "ifp/error.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ifp {

double chi_square_sf(double statistic, int df) {
  if (df <= 0) return 1.0;
  boost::math::chi_squared_distribution<double> dist(df);
  return boost::math::cdf(boost::math::complement(dist, std::max(statistic, 0.0)));
}

ChiSquare chi_square_gof(const std::vector<double>& observed, const std::vector<double>& probs) {
  if (observed.size() != probs.size() || observed.empty())
    throw Error(ErrorCode::InvalidArgument, "observed and expected bins differ");
  const double total = std::accumulate(observed.begin(), observed.end(), 0.0);
  const double mass = std::accumulate(probs.begin(), probs.end(), 0.0);
  ChiSquare res;
  int bins = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (probs[i] <= 0) {
      if (observed[i] > 0) {
        res.statistic = INFINITY;
        res.p_value = 0;
        res.df = static_cast<int>(observed.size()) - 1;
        return res;
      }
      continue;
    }
    const double e = total * probs[i] / mass;
    res.statistic += (observed[i] - e) * (observed[i] - e) / e;
    ++bins;
  }
  res.df = bins - 1;
  res.p_value = chi_square_sf(res.statistic, res.df);
  return res;
}

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double denom = 1 + z * z / n;
  const double center = (p + z * z / (2 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw Error(ErrorCode::InvalidArgument, "quantile of an empty sample");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  return v[lo] + (v[hi] - v[lo]) * (pos - static_cast<double>(lo));
}

double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

}  // namespace ifp
