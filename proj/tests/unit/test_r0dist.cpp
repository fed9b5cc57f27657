#include "doctest.h"

#include "ifp/error.hpp"
#include "ifp/r0dist.hpp"
#include "ifp/sampler.hpp"
#include "ifp/structure.hpp"

#include <cmath>
#include <functional>

using namespace ifp;

namespace {

// Number of m-edge matchings in K_r by direct enumeration of edge subsets.
std::vector<std::uint64_t> matching_counts(int r) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j) edges.emplace_back(i, j);
  std::vector<std::uint64_t> count(static_cast<std::size_t>(r / 2) + 1, 0);
  std::function<void(std::size_t, std::uint32_t, int)> rec = [&](std::size_t i, std::uint32_t used, int m) {
    if (i == edges.size()) {
      ++count[static_cast<std::size_t>(m)];
      return;
    }
    rec(i + 1, used, m);
    auto [a, b] = edges[i];
    if (!(used >> a & 1) && !(used >> b & 1)) rec(i + 1, used | 1u << a | 1u << b, m + 1);
  };
  rec(0, 0, 0);
  return count;
}

}  // namespace

TEST_CASE("hazard_ratio examples") {
  CHECK(hazard_ratio(2, 1.0) == doctest::Approx(1.0));
  CHECK(hazard_ratio(3, 1.0) == doctest::Approx(3.0));
  CHECK(hazard_ratio(4, 1.0) == doctest::Approx(9.0));
  CHECK(hazard_ratio(5, 1.0) == doctest::Approx(25.0));
  CHECK(hazard_ratio(0, 1.0) == 0.0);
  CHECK(hazard_ratio(1, 2.0) == 0.0);
  CHECK(hazard_ratio_exact(4, Rational(1)) == 9);
  CHECK(std::exp(log_hazard_ratio(7, 0.8)) == doctest::Approx(hazard_ratio(7, 0.8)).epsilon(1e-12));
}

TEST_CASE("hazard_ratio counts weighted matchings of K_r") {
  for (int r = 0; r <= 9; ++r) {
    auto counts = matching_counts(r);
    for (double c : {0.5, 1.0, 1.7}) {
      double expect = 0;
      for (std::size_t m = 1; m < counts.size(); ++m) expect += counts[m] * std::pow(c, -3.0 * static_cast<double>(m));
      CHECK(hazard_ratio(r, c) == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("r0_pmf closed forms") {
  auto t = r0_pmf(1.0, 40);
  REQUIRE(t.c_cubed.has_value());
  CHECK(t.pmf_exact[2] == Rational(1, 2));
  CHECK(t.pmf_exact[3] == Rational(3, 8));
  CHECK(t.prob(3) == doctest::Approx(0.5));
  CHECK(t.prob(4) == doctest::Approx(0.375));

  for (Rational c3 : {Rational(1, 8), Rational(1), Rational(8), Rational(27, 5)}) {
    auto e = r0_pmf_exact(c3, 10);
    CHECK(e.pmf_exact[2] == 1 / (1 + c3));
    CHECK(e.pmf_exact[2] + e.pmf_exact[3] == 1 / (1 + c3) + (3 / (c3 + 3)) * (c3 / (1 + c3)));
    Rational total = 0;
    for (const auto& p : e.pmf_exact) total += p;
    CHECK(total <= 1);
  }
  CHECK(r0_pmf(50.0, 10).prob(3) < 1e-5);
  CHECK(r0_pmf(1.0, 10).prob(1) == 0.0);
  CHECK(r0_pmf(1.0, 10).prob(2) == 0.0);
}

TEST_CASE("r0_pmf double mode") {
  for (double c : {0.37, 1.3, 2.9}) {
    auto t = r0_pmf(c, 200);
    CHECK_FALSE(t.c_cubed.has_value());
    CHECK(t.prob(3) == doctest::Approx(1.0 / (1.0 + c * c * c)).epsilon(1e-12));
    double total = t.tail;
    for (double p : t.pmf) {
      CHECK(p >= 0.0);
      total += p;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    // h = a/(1+a) saturates in double once a passes 1e16; check a itself, in log space.
    for (int r = 3; r <= 100; ++r) {
      CHECK(log_hazard_ratio(r, c) > log_hazard_ratio(r - 1, c));
      CHECK(t.h[static_cast<std::size_t>(r)] >= t.h[static_cast<std::size_t>(r) - 1]);
    }
  }
  CHECK_THROWS_AS(r0_pmf(1.0, 201), Error);
}

TEST_CASE("EGF coefficients reproduce the hazard sums") {
  for (double c : {0.5, 1.0, 2.0}) {
    auto t = egf_coeffs(c, 20);
    CHECK(t[0] == 0.0);
    CHECK(t[1] == doctest::Approx(0.0));
    double fact = 1;
    for (int r = 2; r <= 20; ++r) {
      fact *= r;
      const double a = hazard_ratio(r, c);
      CHECK(std::abs(fact * t[static_cast<std::size_t>(r)] - a) / a <= 1e-9);
    }
    auto cc = rational_approx(c * c * c);
    REQUIRE(cc.has_value());
    auto exact = egf_coeffs_exact(*cc, 20);
    Rational f = 1;
    for (int r = 1; r <= 20; ++r) {
      f *= r;
      CHECK(f * exact[static_cast<std::size_t>(r)] == hazard_ratio_exact(r, *cc));
    }
  }
  CHECK(egf_coeffs(1.0, 2)[2] * 2 == doctest::Approx(1.0));
}

TEST_CASE("rational recovery of c^3") {
  CHECK(*rational_approx(0.125) == Rational(1, 8));
  CHECK(*rational_approx(8.0) == Rational(8));
  CHECK_FALSE(rational_approx(std::sqrt(2.0)).has_value());
}

TEST_CASE("empirical_r0") {
  auto t = r0_pmf(1.0, 30);
  CHECK_THROWS_AS(empirical_r0({std::nullopt, std::nullopt}, t), Error);
  try {
    empirical_r0({std::nullopt}, t);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoResolvedTraces);
  }
  std::vector<std::optional<int>> v;
  for (int i = 0; i < 500; ++i) v.push_back(3);
  for (int i = 0; i < 375; ++i) v.push_back(4);
  for (int i = 0; i < 125; ++i) v.push_back(std::nullopt);
  auto rep = empirical_r0(v, t);
  CHECK(rep.traces == 1000);
  CHECK(rep.resolved == 875);
  CHECK(rep.p_hat(3) == doctest::Approx(0.5));
  CHECK(rep.p_hat(4) == doctest::Approx(0.375));
  CHECK(rep.df == 1);
  CHECK(rep.p_value > 0.9);
  CHECK(t.csv().find("r,a_r,h_r,pmf_r") != std::string::npos);
}

namespace {

// Exact P(r0 = 3) at finite n: condition on j = |E1 ∩ E2|; the third edge is
// uniform over the open sets and makes a degree-3 vertex iff it meets E1 ∩ E2.
double finite_p_r0_3(int n, int k) {
  auto C = [](int a, int b) { return Rational(binom(a, b)); };
  const Rational open2 = C(n, k) - C(n - k, k) - 1;
  Rational total = 0;
  for (int j = 1; j < k; ++j) {
    const Rational pj = C(k, j) * C(n - k, k - j) / open2;
    const Rational through = C(n, k) - C(n - j, k) - 2;
    const int a = k - j;
    const Rational elsewhere = C(n - j, k) - 2 * C(n - j - a, k) + C(n - j - 2 * a, k);
    total += pj * through / (through + elsewhere);
  }
  return static_cast<double>(total);
}

}  // namespace

TEST_CASE("finite-n P(r0 = 3) from simulated traces") {
  const double p = finite_p_r0_3(1000, 10);
  CHECK(p == doctest::Approx(0.6035).epsilon(1e-3));
  CHECK(finite_p_r0_3(27000, 30) < finite_p_r0_3(8000, 20));
  CHECK(finite_p_r0_3(8000, 20) < p);

  const ProcessParams params(1000, 10);
  EarlyOptions opts;
  opts.label_steps = false;
  opts.stop_at_degree = 3;
  const int runs = 3000;
  int hits = 0;
  for (int i = 0; i < runs; ++i) {
    Rng rng(stream_seed(31, static_cast<std::uint64_t>(i)));
    const auto st = hitting_times(run_process_early(params, 6, rng, opts));
    hits += st.r0 == 3;
  }
  CHECK(std::abs(hits / double(runs) - p) < 4 * std::sqrt(p * (1 - p) / runs));
}
