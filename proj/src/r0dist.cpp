#include "ifp/r0dist.hpp"

#include "ifp/error.hpp"
#include "ifp/stats.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace ifp {

namespace {

void check_args(int r, double c) {
  if (r < 0) throw Error(ErrorCode::InvalidArgument, "r must be nonnegative");
  if (!(c > 0)) throw Error(ErrorCode::InvalidArgument, "c must be positive");
}

// Neumaier-compensated running sum.
struct Compensated {
  double sum = 0;
  double comp = 0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) comp += (sum - t) + x;
    else comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace

double log_hazard_ratio(int r, double c) {
  check_args(r, c);
  if (r < 2) return -std::numeric_limits<double>::infinity();
  // log of the m-th term, summed by log-sum-exp.
  const double l2c3 = std::log(2.0) + 3.0 * std::log(c);
  std::vector<double> terms;
  for (int m = 1; 2 * m <= r; ++m)
    terms.push_back(std::lgamma(r + 1.0) - std::lgamma(r - 2.0 * m + 1.0) - std::lgamma(m + 1.0) - m * l2c3);
  double mx = -std::numeric_limits<double>::infinity();
  for (double t : terms) mx = std::max(mx, t);
  double acc = 0;
  for (double t : terms) acc += std::exp(t - mx);
  return mx + std::log(acc);
}

double hazard_ratio(int r, double c) {
  check_args(r, c);
  if (r < 2) return 0.0;
  const double two_c3 = 2.0 * c * c * c;
  double term = 1.0;
  Compensated s;
  for (int m = 1; 2 * m <= r; ++m) {
    term *= static_cast<double>(r - 2 * m + 2) * static_cast<double>(r - 2 * m + 1) / (m * two_c3);
    s.add(term);
  }
  return s.value();
}

Rational hazard_ratio_exact(int r, const Rational& c_cubed) {
  if (r < 0) throw Error(ErrorCode::InvalidArgument, "r must be nonnegative");
  if (c_cubed <= 0) throw Error(ErrorCode::InvalidArgument, "c^3 must be positive");
  Rational term = 1;
  Rational sum = 0;
  const Rational two_c3 = 2 * c_cubed;
  for (int m = 1; 2 * m <= r; ++m) {
    term *= Rational((r - 2 * m + 2) * (r - 2 * m + 1)) / (two_c3 * m);
    sum += term;
  }
  return sum;
}

std::optional<Rational> rational_approx(double x, std::int64_t max_den, double tol) {
  if (!std::isfinite(x) || x <= 0) return std::nullopt;
  // Continued-fraction convergents.
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double y = x;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(y);
    if (a > 1e15) break;
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t p2 = ai * p1 + p0;
    const std::int64_t q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    if (std::abs(x - static_cast<double>(p2) / static_cast<double>(q2)) <= tol * std::max(1.0, std::abs(x)))
      return Rational(p2, q2);
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double frac = y - a;
    if (frac < 1e-15) break;
    y = 1.0 / frac;
  }
  return std::nullopt;
}

double HazardTable::prob(int r0) const {
  const int idx = r0 - 1;
  if (idx < 0 || idx >= static_cast<int>(pmf.size())) return 0.0;
  return pmf[static_cast<std::size_t>(idx)];
}

std::string HazardTable::csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "# ifplab r0dist v1\nr,a_r,h_r,pmf_r\n";
  for (std::size_t r = 0; r < a.size(); ++r) out << r << ',' << a[r] << ',' << h[r] << ',' << pmf[r] << '\n';
  return out.str();
}

HazardTable r0_pmf(double c, int r_max, int exact_limit) {
  check_args(0, c);
  if (r_max < 0 || r_max > 200) throw Error(ErrorCode::OutOfRange, "r_max must lie in [0, 200]");
  if (r_max <= exact_limit)
    if (auto cc = rational_approx(c * c * c)) {
      auto t = r0_pmf_exact(*cc, r_max);
      t.c = c;
      return t;
    }
  HazardTable t;
  t.c = c;
  double log_surv = 0;  // log prod_{j<r} (1 - h_j)
  Compensated mass;
  for (int r = 0; r <= r_max; ++r) {
    const double la = log_hazard_ratio(r, c);
    const double a = std::exp(la);
    t.a.push_back(a);
    // h = a / (1 + a) and log(1 - h) = -log1p(a), evaluated without overflow.
    const double log_h = r < 2 ? -std::numeric_limits<double>::infinity()
                               : (la > 0 ? -std::log1p(std::exp(-la)) : la - std::log1p(a));
    const double log_1mh = la > 0 ? -(la + std::log1p(std::exp(-la))) : -std::log1p(a);
    t.h.push_back(std::exp(log_h));
    const double p = std::exp(log_surv + log_h);
    t.pmf.push_back(p);
    mass.add(p);
    log_surv += log_1mh;
  }
  t.tail = std::exp(log_surv);
  return t;
}

HazardTable r0_pmf_exact(const Rational& c_cubed, int r_max) {
  if (r_max < 0 || r_max > 200) throw Error(ErrorCode::OutOfRange, "r_max must lie in [0, 200]");
  if (c_cubed <= 0) throw Error(ErrorCode::InvalidArgument, "c^3 must be positive");
  HazardTable t;
  t.c = std::cbrt(c_cubed.convert_to<double>());
  t.c_cubed = c_cubed;
  Rational surv = 1;
  for (int r = 0; r <= r_max; ++r) {
    const Rational a = hazard_ratio_exact(r, c_cubed);
    const Rational h = a / (1 + a);
    const Rational p = surv * h;
    t.a_exact.push_back(a);
    t.pmf_exact.push_back(p);
    t.a.push_back(a.convert_to<double>());
    t.h.push_back(h.convert_to<double>());
    t.pmf.push_back(p.convert_to<double>());
    surv *= 1 - h;
  }
  t.tail = surv.convert_to<double>();
  return t;
}

std::vector<double> egf_coeffs(double c, int r_max) {
  check_args(0, c);
  if (r_max < 0 || r_max > 200) throw Error(ErrorCode::OutOfRange, "r_max must lie in [0, 200]");
  // e = exp(x + x^2/(2c^3)) satisfies n e_n = e_{n-1} + e_{n-2} / c^3.
  const double inv_c3 = 1.0 / (c * c * c);
  std::vector<double> e(static_cast<std::size_t>(r_max) + 1);
  std::vector<double> inv_fact(static_cast<std::size_t>(r_max) + 1);
  e[0] = 1;
  inv_fact[0] = 1;
  for (int n = 1; n <= r_max; ++n) {
    const double prev2 = n >= 2 ? e[static_cast<std::size_t>(n) - 2] : 0.0;
    e[static_cast<std::size_t>(n)] = (e[static_cast<std::size_t>(n) - 1] + prev2 * inv_c3) / n;
    inv_fact[static_cast<std::size_t>(n)] = inv_fact[static_cast<std::size_t>(n) - 1] / n;
  }
  std::vector<double> t(static_cast<std::size_t>(r_max) + 1);
  for (int n = 0; n <= r_max; ++n) t[static_cast<std::size_t>(n)] = e[static_cast<std::size_t>(n)] - inv_fact[static_cast<std::size_t>(n)];
  return t;
}

std::vector<Rational> egf_coeffs_exact(const Rational& c_cubed, int r_max) {
  if (r_max < 0 || r_max > 200) throw Error(ErrorCode::OutOfRange, "r_max must lie in [0, 200]");
  if (c_cubed <= 0) throw Error(ErrorCode::InvalidArgument, "c^3 must be positive");
  const Rational inv_c3 = 1 / c_cubed;
  std::vector<Rational> e(static_cast<std::size_t>(r_max) + 1);
  Rational inv_fact = 1;
  std::vector<Rational> t(static_cast<std::size_t>(r_max) + 1);
  e[0] = 1;
  t[0] = 0;
  for (int n = 1; n <= r_max; ++n) {
    const Rational prev2 = n >= 2 ? e[static_cast<std::size_t>(n) - 2] : Rational(0);
    e[static_cast<std::size_t>(n)] = (e[static_cast<std::size_t>(n) - 1] + prev2 * inv_c3) / n;
    inv_fact /= n;
    t[static_cast<std::size_t>(n)] = e[static_cast<std::size_t>(n)] - inv_fact;
  }
  return t;
}

double R0Report::p_hat(int r0) const {
  if (traces == 0) return 0.0;
  auto it = histogram.find(r0);
  return it == histogram.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(traces);
}

R0Report empirical_r0(const std::vector<std::optional<int>>& r0_values, const HazardTable& table) {
  R0Report rep;
  rep.traces = r0_values.size();
  for (const auto& v : r0_values)
    if (v) {
      ++rep.resolved;
      ++rep.histogram[*v];
    }
  if (rep.resolved == 0) throw Error(ErrorCode::NoResolvedTraces, "no trace resolved r0");
  std::vector<double> obs, probs;
  for (const auto& [r0, count] : rep.histogram) {
    obs.push_back(static_cast<double>(count));
    probs.push_back(table.prob(r0));
  }
  if (obs.size() >= 2) {
    const auto cs = chi_square_gof(obs, probs);
    rep.chi_square = cs.statistic;
    rep.df = cs.df;
    rep.p_value = cs.p_value;
  }
  return rep;
}

}  // namespace ifp
