#pragma once

// Brute-force reference implementations shared by the unit tests. They are
// deliberately naive: direct enumeration, no pruning, no shared code paths
// with the library beyond the KSet/Hypergraph containers.

#include "ifp/rng.hpp"
#include "ifp/setcore.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

namespace oracle {

using ifp::Vertex;

// Calls f on every k-subset of [n] (sorted, 1-based), in lexicographic order.
inline void for_each_kset(int n, int k, const std::function<void(const std::vector<Vertex>&)>& f) {
  std::vector<Vertex> cur;
  std::function<void(int)> rec = [&](int next) {
    if (static_cast<int>(cur.size()) == k) {
      f(cur);
      return;
    }
    for (int v = next; v <= n - (k - static_cast<int>(cur.size())) + 1; ++v) {
      cur.push_back(v);
      rec(v + 1);
      cur.pop_back();
    }
  };
  rec(1);
}

inline bool meets(const std::vector<Vertex>& a, const std::vector<Vertex>& b) {
  for (Vertex x : a)
    for (Vertex y : b)
      if (x == y) return true;
  return false;
}

inline bool has(const std::vector<Vertex>& a, Vertex x) { return std::find(a.begin(), a.end(), x) != a.end(); }

// Pascal's rule in 64-bit arithmetic (n <= 60 stays exact).
inline std::uint64_t pascal(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::vector<std::vector<std::uint64_t>> t(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    t[i].assign(static_cast<std::size_t>(i) + 1, 1);
    for (int j = 1; j < i; ++j) t[i][j] = t[i - 1][j - 1] + t[i - 1][j];
  }
  return t[n][k];
}

inline std::uint64_t brute_open(const ifp::Hypergraph& h, const std::vector<Vertex>& in, const std::vector<Vertex>& out) {
  std::uint64_t count = 0;
  for_each_kset(h.n(), h.k(), [&](const std::vector<Vertex>& e) {
    for (Vertex v : in)
      if (!has(e, v)) return;
    for (Vertex v : out)
      if (has(e, v)) return;
    for (const auto& f : h.edges())
      if (!meets(e, f.vertices())) return;
    ++count;
  });
  return count;
}

// Uniform random k-set via rejection on draws.
inline ifp::KSet random_kset(int n, int k, ifp::Rng& rng) {
  std::set<Vertex> s;
  while (static_cast<int>(s.size()) < k) s.insert(static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(n)) + 1));
  return ifp::KSet::make(std::vector<Vertex>(s.begin(), s.end()), n);
}

// Random pairwise-intersecting hypergraph with r edges, built by rejection.
inline ifp::Hypergraph random_intersecting(int n, int k, int r, ifp::Rng& rng) {
  ifp::Hypergraph h(n, k);
  int guard = 0;
  while (h.r() < r && guard++ < 100000) {
    auto e = random_kset(n, k, rng);
    if (h.contains(e)) continue;
    bool ok = true;
    for (const auto& f : h.edges())
      if (!ifp::intersects(e, f)) ok = false;
    if (ok) h.append(e);
  }
  return h;
}

// Pearson chi-square statistic of observed counts against expected probabilities.
inline double chi_square(const std::vector<double>& observed, const std::vector<double>& probs, double total) {
  double stat = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = probs[i] * total;
    stat += (observed[i] - e) * (observed[i] - e) / e;
  }
  return stat;
}

}  // namespace oracle

namespace oracle {

// Simple pairwise-intersecting hypergraph with r edges and maximum degree two:
// edges i and j share exactly the vertex p(i,j), and each edge is padded to
// size k with private vertices. Needs k >= r - 1.
inline ifp::Hypergraph simple_deg2(int r, int k) {
  std::vector<std::vector<Vertex>> edges(static_cast<std::size_t>(r));
  Vertex next = 1;
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j) {
      edges[i].push_back(next);
      edges[j].push_back(next);
      ++next;
    }
  for (auto& e : edges)
    while (static_cast<int>(e.size()) < k) e.push_back(next++);
  const int n = std::max<int>(next - 1, 2 * k);
  ifp::Hypergraph h(n, k);
  for (auto& e : edges) h.append(ifp::KSet::make(e, n));
  return h;
}

// Number of m-element sets of degree-two vertices with no two in a common edge.
inline std::uint64_t brute_indep_deg2(const ifp::Hypergraph& h, int m) {
  std::vector<int> deg(static_cast<std::size_t>(h.n()) + 1, 0);
  for (const auto& e : h.edges())
    for (Vertex v : e) ++deg[v];
  std::vector<Vertex> two;
  for (Vertex v = 1; v <= h.n(); ++v)
    if (deg[v] == 2) two.push_back(v);
  std::uint64_t count = 0;
  const auto size = two.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << size); ++mask) {
    if (std::popcount(mask) != m) continue;
    bool ok = true;
    for (const auto& e : h.edges()) {
      int inside = 0;
      for (std::size_t i = 0; i < size; ++i)
        if ((mask >> i & 1) && e.contains(two[i])) ++inside;
      if (inside > 1) ok = false;
    }
    if (ok) ++count;
  }
  return count;
}

}  // namespace oracle
