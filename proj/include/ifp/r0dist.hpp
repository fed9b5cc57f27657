#pragma once

#include "ifp/bigcount.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ifp {

/// a_r = sum_{m=1}^{floor(r/2)} r! / ((r-2m)! m! (2c^3)^m). May overflow to inf for large r.
double hazard_ratio(int r, double c);
/// log a_r (-inf when r < 2).
double log_hazard_ratio(int r, double c);
/// Exact a_r given c^3 as a rational.
Rational hazard_ratio_exact(int r, const Rational& c_cubed);

/// Small-denominator rational p/q with |x - p/q| <= tol, if one with q <= max_den exists.
std::optional<Rational> rational_approx(double x, std::int64_t max_den = 1000, double tol = 1e-12);

struct HazardTable {
  double c = 0;
  std::vector<double> a;    // a_r, r = 0..r_max
  std::vector<double> h;    // a_r / (1 + a_r)
  std::vector<double> pmf;  // pmf[r] = P(r0 = r + 1)
  double tail = 0;          // P(r0 > r_max + 1)
  std::optional<Rational> c_cubed;          // set in exact mode
  std::vector<Rational> a_exact, pmf_exact;  // exact mode only

  /// P(r0 = value); zero outside the table.
  double prob(int r0) const;
  /// Columns r, a_r, h_r, pmf_r.
  std::string csv() const;
};

/// Distribution of r0. Exact rational arithmetic is used when c^3 is a
/// small-denominator rational and r_max <= exact_limit.
HazardTable r0_pmf(double c, int r_max, int exact_limit = 60);
HazardTable r0_pmf_exact(const Rational& c_cubed, int r_max);

/// Taylor coefficients t_r of e^x (e^{x^2/(2c^3)} - 1), r = 0..r_max.
std::vector<double> egf_coeffs(double c, int r_max);
std::vector<Rational> egf_coeffs_exact(const Rational& c_cubed, int r_max);

struct R0Report {
  std::uint64_t traces = 0;
  std::uint64_t resolved = 0;
  std::map<int, std::uint64_t> histogram;
  double chi_square = 0;
  int df = 0;
  double p_value = 1;

  /// Fraction of all traces (resolved or not) with r0 == value.
  double p_hat(int r0) const;
};

/// Histogram of resolved r0 values and chi-square against the table on the observed support.
R0Report empirical_r0(const std::vector<std::optional<int>>& r0_values, const HazardTable& table);

}  // namespace ifp
