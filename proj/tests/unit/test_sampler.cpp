#include "doctest.h"
#include "oracles.hpp"

#include "ifp/error.hpp"
#include "ifp/sampler.hpp"
#include "ifp/stats.hpp"
#include "ifp/structure.hpp"

#include <chrono>
#include <functional>

using namespace ifp;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an ifp::Error");
  return ErrorCode::InvalidArgument;
}

// Chi-square p-value of `draws` exact samples against the enumeration oracle.
double exactness_p(const Hypergraph& h, int draws, std::uint64_t seed) {
  ProcessParams p(h.n(), h.k());
  auto dist = oracle_step_distribution(h, p);
  std::map<KSet, double> counts;
  for (const auto& [e, pr] : dist) counts[e] = 0;
  OpenCounter counter(h.n(), h.k());
  Rng rng(seed);
  for (int i = 0; i < draws; ++i) {
    auto e = sample_open_edge_exact(h, counter, rng);
    REQUIRE(counts.count(e) == 1);
    counts[e] += 1;
  }
  std::vector<double> obs, probs;
  for (const auto& [e, pr] : dist) {
    obs.push_back(counts[e]);
    probs.push_back(static_cast<double>(pr));
  }
  if (obs.size() == 1) return 1.0;
  return chi_square_gof(obs, probs).p_value;
}

}  // namespace

TEST_CASE("uniform big-integer draws") {
  Rng rng(1);
  const BigInt bound = BigInt(1) << 100;
  for (int i = 0; i < 1000; ++i) {
    auto x = uniform_below(rng, bound + 7);
    CHECK(x >= 0);
    CHECK(x < bound + 7);
  }
  // Small bound through the big-integer path: the top bit is balanced.
  std::vector<double> obs(3, 0);
  for (int i = 0; i < 30000; ++i) obs[uniform_below(rng, BigInt(3)).convert_to<int>()] += 1;
  CHECK(chi_square_gof(obs, {1, 1, 1}).p_value > 1e-3);
}

TEST_CASE("oracle_step_distribution") {
  auto d0 = oracle_step_distribution(Hypergraph(7, 3), ProcessParams(7, 3));
  CHECK(d0.size() == 35);
  for (const auto& [e, p] : d0) CHECK(p == Rational(1, 35));
  Hypergraph h(8, 3, {make_kset({1, 2, 3}, 8)});
  auto d = oracle_step_distribution(h, ProcessParams(8, 3));
  CHECK(d.size() == 45);
  CHECK(BigInt(d.size()) == count_open(h).value() - h.r());
  CHECK(code_of([] { oracle_step_distribution(Hypergraph(60, 10), ProcessParams(60, 10)); }) ==
        ErrorCode::InstanceTooLarge);
}

TEST_CASE("exact sampler: empty hypergraph is uniform") {
  CHECK(exactness_p(Hypergraph(7, 3), 100000, 17) >= 1e-3);
}

TEST_CASE("exact sampler: fixture from the acceptance suite") {
  Hypergraph h(8, 3, {make_kset({1, 2, 3}, 8), make_kset({1, 4, 5}, 8)});
  CHECK(exactness_p(h, 100000, 23) >= 1e-3);
}

TEST_CASE("exact sampler: twenty random fixtures") {
  Rng rng(404);
  int done = 0;
  while (done < 20) {
    const int n = 7 + static_cast<int>(rng.below(6));
    const int k = 2 + static_cast<int>(rng.below(2));
    if (binom(n, k) > 10000) continue;
    auto h = oracle::random_intersecting(n, k, 1 + static_cast<int>(rng.below(4)), rng);
    if (count_open(h).value() <= h.r()) continue;
    CHECK(exactness_p(h, 100000, 1000 + done) >= 1e-3);
    ++done;
  }
}

TEST_CASE("exact sampler: single open edge and exhaustion") {
  Hypergraph h(5, 2, {make_kset({1, 2}, 5), make_kset({1, 3}, 5), make_kset({1, 4}, 5)});
  Rng rng(9);
  for (int i = 0; i < 50; ++i) CHECK(sample_open_edge_exact(h, ProcessParams(5, 2), rng) == make_kset({1, 5}, 5));
  Hypergraph tri(5, 2, {make_kset({1, 2}, 5), make_kset({1, 3}, 5), make_kset({2, 3}, 5)});
  CHECK(code_of([&] { sample_open_edge_exact(tri, ProcessParams(5, 2), rng); }) == ErrorCode::NoOpenEdge);
}

TEST_CASE("rejection sampler") {
  Rng rng(12);
  ProcessParams p(1000, 10);
  auto first = sample_open_edge_rejection(Hypergraph(1000, 10), p, rng, 1);
  CHECK(first.edge.has_value());
  CHECK(first.tries == 1);

  Hypergraph one(1000, 10, {make_kset({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, 1000)});
  std::uint64_t accepted = 0;
  const int tries = 100000;
  for (int i = 0; i < tries; ++i) accepted += sample_open_edge_rejection(one, p, rng, 1).edge.has_value();
  const double expect = 1.0 - ratio(binom(990, 10), binom(1000, 10));
  CHECK(std::abs(static_cast<double>(accepted) / tries - expect) <= 0.01);

  // Five edges meeting pairwise in distinct vertices: acceptance is about 1e-4,
  // so 10^4 tries come back empty a large fraction of the time.
  auto simple = oracle::simple_deg2(5, 10);
  Hypergraph h5(1000, 10);
  for (const auto& e : simple.edges()) h5.append(make_kset(e.vertices(), 1000));
  const double acc = ratio(count_open(h5).value() - 5, binom(1000, 10));
  CHECK(acc < 2e-4);
  const double p_exhaust = std::pow(1 - acc, 10000.0);
  int exhausted = 0;
  const int trials = 40;
  for (int t = 0; t < trials; ++t) {
    Rng r2(100 + t);
    exhausted += !sample_open_edge_rejection(h5, p, r2, 10000).edge.has_value();
  }
  const double sd = std::sqrt(p_exhaust * (1 - p_exhaust) / trials);
  CHECK(std::abs(exhausted / static_cast<double>(trials) - p_exhaust) <= 4 * sd);
  CHECK(exhausted > 0);
}

TEST_CASE("early runs") {
  ProcessParams p(1000, 10);
  Rng rng(5);
  CHECK(run_process_early(p, 0, rng).edges.empty());
  Rng a(77), b(77);
  auto ta = run_process_early(p, 6, a);
  auto tb = run_process_early(p, 6, b);
  CHECK(ta.str() == tb.str());
  CHECK(ta.edges.size() == 6);
  CHECK(ta.quality.size() == 6);
  CHECK(ta.hypergraph().pairwise_intersecting());
  auto back = ProcessTrace::parse(ta.str());
  CHECK(back.str() == ta.str());
  CHECK(code_of([&] { run_process_early(p, 26, rng); }) == ErrorCode::TooManyEdges);
}

namespace {

// Exact probability that the process on K(5,2) ends in a triangle, by recursion
// over the chosen sets.
double triangle_probability() {
  std::vector<std::vector<Vertex>> all;
  oracle::for_each_kset(5, 2, [&](const std::vector<Vertex>& s) { all.push_back(s); });
  std::function<double(std::vector<int>&)> rec = [&](std::vector<int>& chosen) -> double {
    std::vector<int> valid;
    for (int i = 0; i < static_cast<int>(all.size()); ++i) {
      if (std::find(chosen.begin(), chosen.end(), i) != chosen.end()) continue;
      bool ok = true;
      for (int c : chosen) ok = ok && oracle::meets(all[i], all[c]);
      if (ok) valid.push_back(i);
    }
    if (valid.empty()) return chosen.size() == 3 ? 1.0 : 0.0;
    double acc = 0;
    for (int i : valid) {
      chosen.push_back(i);
      acc += rec(chosen);
      chosen.pop_back();
    }
    return acc / static_cast<double>(valid.size());
  };
  std::vector<int> chosen;
  return rec(chosen);
}

}  // namespace

TEST_CASE("full runs on K(5,2) match the exact tree") {
  const double p_tri = triangle_probability();
  CHECK(p_tri > 0);
  ProcessParams p(5, 2);
  int tri = 0, star = 0;
  const int runs = 100000;
  for (int i = 0; i < runs; ++i) {
    Rng rng(stream_seed(3, static_cast<std::uint64_t>(i)));
    auto res = run_process_full(p, rng);
    REQUIRE(res.family.maximal());
    if (res.family.size() == 3) ++tri;
    else if (res.family.size() == 4) ++star;
  }
  CHECK(tri + star == runs);
  CHECK(std::abs(static_cast<double>(tri) / runs - p_tri) <= 0.02);
}

TEST_CASE("full runs at n=27, k=3") {
  ProcessParams p(27, 3);
  for (int i = 0; i < 50; ++i) {
    Rng rng(stream_seed(8, static_cast<std::uint64_t>(i)));
    auto res = run_process_full(p, rng, {.label_steps = i < 5});
    CHECK(res.family.maximal());
    CHECK(res.trace.hypergraph().pairwise_intersecting());
    CHECK(res.trace.edges.size() == res.family.size());
    // Brute-force maximality.
    auto members = res.family.members();
    oracle::for_each_kset(27, 3, [&](const std::vector<Vertex>& s) {
      auto e = make_kset(s, 27);
      if (res.family.contains(e)) return;
      bool meets_all = true;
      for (const auto& m : members) meets_all = meets_all && intersects(m, e);
      CHECK_FALSE(meets_all);
    });
  }
  CHECK(code_of([&] {
          Rng rng(1);
          run_process_full(ProcessParams(200, 10), rng);
        }) == ErrorCode::InstanceTooLarge);
}

TEST_CASE("full mode switches from exact steps to enumeration") {
  ProcessParams p(64, 4);
  Rng rng(41);
  auto res = run_process_full(p, rng, {.switch_threshold = 100000});
  CHECK(res.exact_steps >= 1);
  CHECK(res.family.maximal());
  CHECK(res.trace.hypergraph(std::min(res.trace.r(), 1500)).pairwise_intersecting());
}
