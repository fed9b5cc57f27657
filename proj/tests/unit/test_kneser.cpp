#include "doctest.h"

#include "ifp/error.hpp"
#include "ifp/kneser.hpp"
#include "ifp/stats.hpp"

#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <set>

using namespace ifp;

namespace {

// Exact law of the final independent set size on a graph of at most 20
// vertices, by recursion over the available set.
std::map<int, double> exact_final_size(const Graph& g) {
  const int N = static_cast<int>(g.size());
  std::vector<std::uint32_t> closed_nbhd(static_cast<std::size_t>(N));
  for (int v = 0; v < N; ++v) {
    closed_nbhd[static_cast<std::size_t>(v)] = 1u << v;
    for (auto u : g.neighbors(v)) closed_nbhd[static_cast<std::size_t>(v)] |= 1u << u;
  }
  std::map<std::uint32_t, std::map<int, double>> memo;
  std::function<std::map<int, double>(std::uint32_t)> rec = [&](std::uint32_t avail) {
    if (avail == 0) return std::map<int, double>{{0, 1.0}};
    if (auto it = memo.find(avail); it != memo.end()) return it->second;
    std::map<int, double> out;
    const double p = 1.0 / std::popcount(avail);
    for (std::uint32_t a = avail; a; a &= a - 1) {
      const int v = std::countr_zero(a);
      for (auto [s, q] : rec(avail & ~closed_nbhd[static_cast<std::size_t>(v)])) out[s + 1] += p * q;
    }
    memo[avail] = out;
    return out;
  };
  return rec(N == 32 ? ~0u : (1u << N) - 1);
}

// Available set after each step, rebuilt from the chosen order.
std::vector<std::vector<std::uint8_t>> replay_available(const Graph& g, const GreedyTrace& tr) {
  std::vector<std::uint8_t> avail(static_cast<std::size_t>(g.size()), 1);
  std::vector<std::vector<std::uint8_t>> out{avail};
  for (auto v : tr.chosen) {
    avail[static_cast<std::size_t>(v)] = 0;
    for (auto u : g.neighbors(v)) avail[static_cast<std::size_t>(u)] = 0;
    out.push_back(avail);
  }
  return out;
}

std::int64_t brute_codegree(const KSet& a, const KSet& b, int n, int k) {
  std::set<Vertex> u(a.vertices().begin(), a.vertices().end());
  u.insert(b.vertices().begin(), b.vertices().end());
  return static_cast<std::int64_t>(binom(n - static_cast<std::int64_t>(u.size()), k));
}

}  // namespace

TEST_CASE("build_kneser examples") {
  const auto pet = build_kneser(5, 2);
  CHECK(pet.size() == 10);
  CHECK(pet.regular_degree() == 3);
  const auto g = build_kneser(16, 6);
  CHECK(g.size() == 8008);
  CHECK(g.regular_degree() == 210);
  const auto pm = build_kneser(8, 4);
  CHECK(pm.regular_degree() == 1);
  for (std::int64_t v = 0; v < pm.size(); ++v) {
    const auto u = pm.neighbors(v)[0];
    CHECK(intersection_size(pm.label(v).vertices(), pm.label(u).vertices()) == 0);
  }
  CHECK_THROWS_WITH_AS(build_kneser(40, 10), doctest::Contains("TooLarge"), Error);
}

TEST_CASE("Kneser adjacency is disjointness") {
  for (auto [n, k] : std::vector<std::pair<int, int>>{{7, 3}, {9, 2}, {8, 3}}) {
    const auto g = build_kneser(n, k);
    for (std::int64_t u = 0; u < g.size(); ++u)
      for (std::int64_t v = 0; v < g.size(); ++v) {
        const bool disjoint = !intersects(g.label(u), g.label(v));
        CHECK(g.adjacent(u, v) == disjoint);
      }
  }
}

TEST_CASE("greedy on complete and empty graphs") {
  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    auto tr = greedy_independent(Graph::complete(12), rng);
    CHECK(tr.steps() == 1);
    CHECK(tr.v_size == std::vector<std::int64_t>{12, 0});
  }
  const auto e = Graph::empty(30);
  auto tr = greedy_independent(e, rng);
  CHECK(tr.steps() == 30);
  CHECK(tr.d == 0);
  for (std::size_t r = 0; r <= 30; ++r) {
    CHECK(tr.v_size[r] == 30 - static_cast<std::int64_t>(r));
    CHECK(tr.t(r) == 0.0);
  }
  // Degenerate envelope check: t stays 0, so the V deviation is r/N.
  const auto params = kneser_params(16, 6);
  const auto rep = trajectory_check(tr, params);
  for (std::size_t r = 0; r <= 30; ++r) CHECK(rep.dev_v[r] == doctest::Approx(r / 30.0));
  CHECK(rep.dev_v[0] == 0.0);
}

TEST_CASE("Petersen graph final size law") {
  const auto pet = build_kneser(5, 2);
  const auto exact = exact_final_size(pet);
  CHECK(exact.size() == 2);
  CHECK(exact.count(3) == 1);
  CHECK(exact.count(4) == 1);
  Rng rng(10);
  const int runs = 100000;
  int fours = 0;
  for (int i = 0; i < runs; ++i) {
    auto tr = greedy_independent(pet, rng, {0, std::nullopt});
    REQUIRE((tr.steps() == 3 || tr.steps() == 4));
    fours += tr.steps() == 4;
  }
  CHECK(std::abs(fours / double(runs) - exact.at(4)) < 0.01);
}

TEST_CASE("greedy output is maximal independent and intersecting") {
  Rng rng(21);
  for (auto [n, k] : std::vector<std::pair<int, int>>{{9, 3}, {11, 4}, {12, 3}}) {
    const auto g = build_kneser(n, k);
    for (int run = 0; run < 20; ++run) {
      auto tr = greedy_independent(g, rng);
      CHECK(is_maximal_independent(g, tr.chosen));
      for (std::size_t i = 0; i < tr.chosen.size(); ++i)
        for (std::size_t j = i + 1; j < tr.chosen.size(); ++j) CHECK(intersects(g.label(tr.chosen[i]), g.label(tr.chosen[j])));
      for (std::size_t r = 0; r < tr.v_size.size(); ++r) {
        CHECK(tr.v_size[r] == tr.N - static_cast<std::int64_t>(r) - tr.closed[r]);
        if (r > 0) {
          CHECK(tr.v_size[r] < tr.v_size[r - 1]);
          CHECK(tr.t(r) > tr.t(r - 1));
        }
      }
    }
  }
  CHECK_FALSE(is_maximal_independent(build_kneser(5, 2), {0}));
}

TEST_CASE("D, B and C bookkeeping against recomputation") {
  const int n = 9, k = 3;
  const auto g = build_kneser(n, k);
  Rng rng(8);
  for (double thr : {1.0, 4.0}) {
    for (int run = 0; run < 10; ++run) {
      auto tr = greedy_independent(g, rng, {20, thr});
      const auto avail = replay_available(g, tr);
      std::vector<std::uint8_t> in_b(static_cast<std::size_t>(g.size()), 0);
      for (std::size_t r = 0; r < avail.size(); ++r) {
        // B is sticky: once some chosen vertex has high codegree with w, it stays.
        if (r > 0) {
          const auto u = tr.chosen[r - 1];
          for (std::int64_t w = 0; w < g.size(); ++w)
            if (avail[r][static_cast<std::size_t>(w)] && brute_codegree(g.label(u), g.label(w), n, k) >= thr) in_b[static_cast<std::size_t>(w)] = 1;
        }
        std::int64_t b = 0;
        for (std::int64_t w = 0; w < g.size(); ++w) b += avail[r][static_cast<std::size_t>(w)] && in_b[static_cast<std::size_t>(w)];
        CHECK(tr.b_size[r] == b);
        for (std::size_t i = 0; i < tr.tracked.size(); ++i) {
          const auto v = tr.tracked[i];
          if (!avail[r][static_cast<std::size_t>(v)]) {
            CHECK(tr.D[r][i] == -1);
            continue;
          }
          int dv = 0, cv = 0;
          for (auto u : g.neighbors(v)) {
            dv += avail[r][static_cast<std::size_t>(u)];
            cv += avail[r][static_cast<std::size_t>(u)] && in_b[static_cast<std::size_t>(u)];
          }
          CHECK(tr.D[r][i] == dv);
          CHECK(tr.C[r][i] == cv);
        }
      }
    }
  }
}

TEST_CASE("entropy exponents") {
  for (double c = 0.01; c < 0.5; c += 0.01) {
    CHECK(p_d(c) < p_N(c));
    CHECK(p_1(c, 0) == doctest::Approx(p_d(c)));
    CHECK(p_2(c, 0) == doctest::Approx(0.0));
    const double h = 1e-6;
    CHECK((p_1(c, h) - p_1(c, 0)) / h == doctest::Approx(-std::log(1 - c) + std::log(1 - 2 * c)).epsilon(1e-3));
  }
  CHECK(p_N(0.25) - p_d(0.25) > 0);
  // Stirling: log binom(n, cn) / n approaches p_N(c).
  const double c = 0.25;
  for (int n : {400, 4000}) {
    const double lnN = log_big(binom(n, static_cast<std::int64_t>(c * n))) / n;
    CHECK(std::abs(lnN - p_N(c)) < 2 * std::log(n) / n);
  }
}

TEST_CASE("kneser_params") {
  const auto p = kneser_params(16, 6);
  CHECK(p.gamma == doctest::Approx(210.0 / 8008.0).epsilon(1e-12));
  CHECK(p.N.value() == 8008);
  CHECK(p.d.value() == 210);
  CHECK(p.delta == doctest::Approx(0.9 * 6 / 16.0));
  CHECK(p.epsilon == std::min(p.eps1, p.eps2));
  CHECK(p.epsilon > 0);

  // The golden-section maximizer against a fine grid.
  for (auto [n, k] : std::vector<std::pair<int, int>>{{16, 6}, {100, 25}, {1000, 100}}) {
    const auto q = kneser_params(n, k);
    const double c = q.c, hi = std::min(c, 1 - 2 * c);
    double best = -1e9;
    for (int i = 0; i <= 20000; ++i) {
      const double dl = hi * i / 20000;
      best = std::max(best, std::min(p_d(c) - p_1(c, dl), p_d(c) - p_2(c, dl)) / p_N(c));
    }
    CHECK(q.eps2 >= best - 1e-9);
    CHECK(q.eps2 <= best + 1e-4);
  }

  // Small-c regime: log gamma is about -c^2 n.
  const auto s = kneser_params(10000, 300);
  CHECK(std::abs(s.log_gamma / (-s.c * s.c * s.n) - 1) < 0.05);
  // At fixed c^2 n the O(c) correction shrinks with c.
  const auto s2 = kneser_params(40000, 600);
  CHECK(std::abs(s2.log_gamma / (-s2.c * s2.c * s2.n) - 1) < std::abs(s.log_gamma / (-s.c * s.c * s.n) - 1));

  CHECK_THROWS_WITH_AS(kneser_params(10, 5), doctest::Contains("DegenerateRegime"), Error);
  CHECK_THROWS_AS(kneser_params(10, 7), Error);
}

TEST_CASE("r_end formulas") {
  const auto p = kneser_params(16, 6);
  const double small = p.r_end_value(KneserRegime::SmallK);
  CHECK(small == doctest::Approx(0.001 * (8008.0 / 210) * std::log(8008.0 / 210)));
  CHECK(small == doctest::Approx(0.1389).epsilon(1e-3));
  CHECK(r_end(p, KneserRegime::SmallK) == 0);
  const double cc = p.r_end_value(KneserRegime::ConstantC);
  CHECK(cc == doctest::Approx(p.epsilon / 1000 * 8008.0 / 210 * std::log(8008.0)));
  // With gamma = d/N the two differ by eps log N against log(1/gamma).
  CHECK(cc / small == doctest::Approx(p.epsilon * p.log_N / -p.log_gamma));
  const auto big = kneser_params(10000, 300);
  CHECK(r_end(big, KneserRegime::SmallK) == static_cast<std::int64_t>(std::floor(big.r_end_value(KneserRegime::SmallK))));
  CHECK(r_end(big, KneserRegime::SmallK) > 0);
}

TEST_CASE("codegree profile") {
  const auto prof = codegree_profile(16, 6);
  REQUIRE(prof.rows.size() == 6);
  CHECK(prof.formula_verified);
  CHECK(prof.rows[0].codegree.value() == binom(16 - 12, 6));
  CHECK(prof.rows[5].codegree.value() == 84);
  std::int64_t total = 0;
  for (const auto& r : prof.rows) total += r.vertices;
  CHECK(total == 8007);
  MESSAGE("high-codegree vertices " << prof.high_codegree_vertices << " vs threshold " << prof.threshold);

  const auto small = codegree_profile(9, 3);
  CHECK(small.formula_verified);
  CHECK(small.rows[0].codegree.value() == binom(3, 3));

  // Explicit common neighbourhoods for random pairs.
  const auto g = build_kneser(12, 4);
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    const auto u = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(g.size())));
    const auto v = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(g.size())));
    CHECK(g.codegree(u, v) == brute_codegree(g.label(u), g.label(v), 12, 4));
  }
  CHECK_THROWS_AS(codegree_profile(40, 10), Error);
}

TEST_CASE("trajectory at n=16, k=6") {
  const auto g = build_kneser(16, 6);
  const auto p = kneser_params(16, 6);
  const double floor_size = 8008.0 / 211.0;
  Rng rng(99);
  std::vector<double> sup, sizes;
  for (int run = 0; run < 60; ++run) {
    auto tr = greedy_independent(g, rng);
    const auto rep = trajectory_check(tr, p);
    CHECK(rep.dev_v[0] == 0.0);
    CHECK(static_cast<double>(tr.steps()) > floor_size);
    sup.push_back(rep.sup_dev_v);
    sizes.push_back(static_cast<double>(tr.steps()));
  }
  CHECK(median(sup) < 0.10);
  CHECK(median(sizes) >= 2 * floor_size);
}

TEST_CASE("trajectory csv") {
  Rng rng(1);
  const auto tr = greedy_independent(build_kneser(7, 3), rng);
  const auto csv = tr.csv();
  CHECK(csv.rfind("# ifplab kneser-trajectory v1\nr,t,V_size,mean_D,B_size,max_C\n0,0,35,", 0) == 0);
}
