#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace ifp {

struct ChiSquare {
  double statistic = 0;
  int df = 0;
  double p_value = 1;
};

/// Pearson goodness of fit of counts against probabilities over the same bins.
/// Probabilities are renormalized to the listed bins; zero-probability bins must
/// have zero counts.
ChiSquare chi_square_gof(const std::vector<double>& observed, const std::vector<double>& probs);

/// Upper tail of the chi-square distribution.
double chi_square_sf(double statistic, int df);

/// Wilson score interval for a binomial proportion.
std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.96);

double median(std::vector<double> v);
double quantile(std::vector<double> v, double q);

}  // namespace ifp
