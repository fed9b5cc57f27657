#include "ifp/counting.hpp"

#include "ifp/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>

namespace ifp {

ProcessParams::ProcessParams(int n_, int k_) : n(n_), k(k_) {
  if (k < 1 || 2 * k > n) throw Error(ErrorCode::InvalidArgument, "need 1 <= k <= n/2");
}

double ProcessParams::c() const { return static_cast<double>(k) / std::cbrt(static_cast<double>(n)); }

ProcessParams ProcessParams::from_c(int n, double c) {
  if (!(c > 0)) throw Error(ErrorCode::InvalidArgument, "c must be positive");
  return ProcessParams(n, static_cast<int>(std::lround(c * std::cbrt(static_cast<double>(n)))));
}

namespace {

constexpr int kMaxEdges = 25;

// Signed histogram of |union of A| over all subsets A of the constraint sets,
// with sign (-1)^{|A|}.
class UnionHistogram {
 public:
  UnionHistogram(const std::vector<std::vector<std::uint64_t>>& masks, int words)
      : masks_(masks), words_(words), stack_((masks.size() + 1) * static_cast<std::size_t>(words), 0) {}

  std::vector<std::int64_t> run(int universe) {
    hist_.assign(static_cast<std::size_t>(universe) + 1, 0);
    if (words_ == 1) {
      dfs1(0, 0, 0, 1);
    } else {
      dfs(0, 0, 1);
    }
    return hist_;
  }

 private:
  void dfs1(std::size_t i, std::uint64_t cur, int size, int sign) {
    if (i == masks_.size()) {
      hist_[static_cast<std::size_t>(size)] += sign;
      return;
    }
    dfs1(i + 1, cur, size, sign);
    const std::uint64_t m = masks_[i][0];
    dfs1(i + 1, cur | m, size + std::popcount(m & ~cur), -sign);
  }

  void dfs(std::size_t i, int size, int sign) {
    if (i == masks_.size()) {
      hist_[static_cast<std::size_t>(size)] += sign;
      return;
    }
    std::uint64_t* cur = &stack_[i * static_cast<std::size_t>(words_)];
    std::uint64_t* nxt = cur + words_;
    // Exclude edge i.
    std::copy(cur, cur + words_, nxt);
    dfs(i + 1, size, sign);
    // Include edge i.
    int add = 0;
    for (int w = 0; w < words_; ++w) {
      const std::uint64_t m = masks_[i][static_cast<std::size_t>(w)];
      add += std::popcount(m & ~cur[w]);
      nxt[w] = cur[w] | m;
    }
    dfs(i + 1, size + add, -sign);
  }

  const std::vector<std::vector<std::uint64_t>>& masks_;
  int words_;
  std::vector<std::uint64_t> stack_;
  std::vector<std::int64_t> hist_;
};

// Drops constraint sets implied by others (a superset of another constraint
// set is met whenever the smaller one is) and duplicates.
std::vector<std::vector<Vertex>> reduce_constraints(std::vector<std::vector<Vertex>> sets) {
  std::sort(sets.begin(), sets.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  std::vector<std::vector<Vertex>> kept;
  for (auto& s : sets) {
    bool implied = false;
    for (const auto& t : kept)
      if (std::includes(s.begin(), s.end(), t.begin(), t.end())) {
        implied = true;
        break;
      }
    if (!implied) kept.push_back(std::move(s));
  }
  return kept;
}

// Histogram over union sizes for reduced constraint sets; returns the
// compressed universe size through `universe`.
std::vector<std::int64_t> union_histogram(const std::vector<std::vector<Vertex>>& sets, int& universe) {
  std::unordered_map<Vertex, int> label;
  for (const auto& s : sets)
    for (Vertex v : s) label.emplace(v, static_cast<int>(label.size()));
  universe = static_cast<int>(label.size());
  const int words = std::max(1, (universe + 63) / 64);
  std::vector<std::vector<std::uint64_t>> masks(sets.size(), std::vector<std::uint64_t>(static_cast<std::size_t>(words), 0));
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (Vertex v : sets[i]) {
      const int b = label[v];
      masks[i][static_cast<std::size_t>(b / 64)] |= std::uint64_t{1} << (b % 64);
    }
  UnionHistogram uh(masks, words);
  return uh.run(universe);
}

}  // namespace

BigInt count_meeting_all(const std::vector<std::vector<Vertex>>& sets, int ground, int kk) {
  if (kk < 0 || kk > ground) return 0;
  for (const auto& s : sets)
    if (s.empty()) return 0;
  auto reduced = reduce_constraints(sets);
  if (reduced.size() > static_cast<std::size_t>(kMaxEdges))
    throw Error(ErrorCode::TooManyEdges, "inclusion-exclusion limited to 25 sets");
  int universe = 0;
  const auto hist = union_histogram(reduced, universe);
  BigInt total = 0;
  for (int u = 0; u <= universe; ++u)
    if (hist[static_cast<std::size_t>(u)] != 0) total += binom(ground - u, kk) * hist[static_cast<std::size_t>(u)];
  return total;
}

OpenCounter::OpenCounter(int n, int k) : n_(n), k_(k), binom_(n, k) {}

BigInt OpenCounter::count(const Hypergraph& h, const std::vector<Vertex>& forced_in,
                          const std::vector<Vertex>& forced_out) const {
  std::vector<const std::vector<Vertex>*> edges;
  edges.reserve(h.edges().size());
  for (const auto& e : h.edges()) edges.push_back(&e.vertices());
  return count_edges(edges, forced_in, forced_out);
}

BigInt OpenCounter::count_edges(const std::vector<const std::vector<Vertex>*>& edges,
                                const std::vector<Vertex>& forced_in, const std::vector<Vertex>& forced_out) const {
  if (edges.size() > static_cast<std::size_t>(kMaxEdges))
    throw Error(ErrorCode::TooManyEdges, "inclusion-exclusion limited to 25 edges");
  std::vector<Vertex> F = forced_in;
  std::vector<Vertex> O = forced_out;
  std::sort(F.begin(), F.end());
  std::sort(O.begin(), O.end());
  F.erase(std::unique(F.begin(), F.end()), F.end());
  O.erase(std::unique(O.begin(), O.end()), O.end());
  if (static_cast<int>(F.size()) > k_) throw Error(ErrorCode::InfeasibleQuery, "forced_in larger than k");
  if (sorted_intersects(F, O)) throw Error(ErrorCode::InfeasibleQuery, "forced_in meets forced_out");
  for (Vertex v : F)
    if (v < 1 || v > n_) throw Error(ErrorCode::OutOfRange, "forced vertex outside ground set");
  for (Vertex v : O)
    if (v < 1 || v > n_) throw Error(ErrorCode::OutOfRange, "forced vertex outside ground set");

  const int ground = n_ - static_cast<int>(F.size()) - static_cast<int>(O.size());
  const int kk = k_ - static_cast<int>(F.size());

  std::vector<std::vector<Vertex>> live;
  for (const auto* e : edges) {
    if (sorted_intersects(*e, F)) continue;
    std::vector<Vertex> rest;
    rest.reserve(e->size());
    std::set_difference(e->begin(), e->end(), O.begin(), O.end(), std::back_inserter(rest));
    if (rest.empty()) return 0;
    live.push_back(std::move(rest));
  }
  if (live.empty()) return binom_(ground, kk);
  auto reduced = reduce_constraints(std::move(live));
  int universe = 0;
  const auto hist = union_histogram(reduced, universe);
  BigInt total = 0;
  for (int u = 0; u <= universe; ++u) {
    const auto h = hist[static_cast<std::size_t>(u)];
    if (h == 0) continue;
    const BigInt& b = binom_(ground - u, kk);
    if (h > 0) total += b * static_cast<std::uint64_t>(h);
    else total -= b * static_cast<std::uint64_t>(-h);
  }
  return total;
}

BigCount count_open(const Hypergraph& h, const std::vector<Vertex>& forced_in, const std::vector<Vertex>& forced_out) {
  if (h.r() > kMaxEdges) throw Error(ErrorCode::TooManyEdges, "inclusion-exclusion limited to 25 edges");
  if (static_cast<int>(forced_in.size()) > h.k()) throw Error(ErrorCode::InfeasibleQuery, "forced_in larger than k");
  return OpenCounter(h.n(), h.k()).count(h, forced_in, forced_out);
}

std::pair<BigCount, BigCount> nu_bounds(const Hypergraph& h, const std::vector<Vertex>& S) {
  const auto deg = DegreeIndex::build(h);
  for (Vertex v : S)
    if (v < 1 || v > h.n() || deg.deg(v) < 2)
      throw Error(ErrorCode::SNotDegreeTwoPlus, "vertex " + std::to_string(v) + " has degree below two");
  std::vector<Vertex> s = S;
  std::sort(s.begin(), s.end());
  int e = 0;
  for (const auto& edge : h.edges())
    if (sorted_intersects(edge.vertices(), s)) ++e;
  const int r = h.r();
  const int n = h.n();
  const int k = h.k();
  const int free_edges = r - e;
  const int rest = k - free_edges - static_cast<int>(s.size());
  const BigInt low_base = std::max(k - r * r, 0);
  BigInt lower = boost::multiprecision::pow(low_base, static_cast<unsigned>(free_edges));
  lower *= rest < 0 ? BigInt(0) : binom(std::max(n - k * r, 0), rest);
  BigInt upper = boost::multiprecision::pow(BigInt(k), static_cast<unsigned>(free_edges));
  upper *= rest < 0 ? BigInt(0) : binom(n, rest);
  return {BigCount(lower), BigCount(upper)};
}

double nu_asymptotic(const ProcessParams& params, int s_size, int e_s, int r) {
  const double logc = std::log(params.c());
  const double logk = std::log(static_cast<double>(params.k));
  const int a = r - e_s + s_size;
  const int b = r - e_s + 2 * s_size;
  return std::exp(3.0 * a * logc - b * logk);
}

BigCount indep_deg2_count(int r, int m) {
  if (r < 0 || m < 0 || 2 * m > r) throw Error(ErrorCode::MOutOfRange, "need 0 <= m <= r/2");
  // r! / (r-2m)! = falling factorial of length 2m.
  BigInt num = 1;
  for (int i = 0; i < 2 * m; ++i) num *= r - i;
  BigInt den = 1;
  for (int i = 2; i <= m; ++i) den *= i;
  den <<= static_cast<unsigned>(m);
  return BigCount(num / den);
}

double family_size_asymptotic(const ProcessParams& params, int r0, const std::vector<int>& s_sizes) {
  if (s_sizes.empty()) throw Error(ErrorCode::EmptyStableFamily, "stable family is empty");
  const double logc = std::log(params.c());
  const double logk = std::log(static_cast<double>(params.k));
  std::vector<double> terms;
  for (int s : s_sizes) {
    if (s < 0 || 2 * s > r0 - 1) throw Error(ErrorCode::InvalidArgument, "member size incompatible with r0");
    terms.push_back(3.0 * (r0 - 1 - s) * logc - (r0 - 1) * logk);
  }
  const double mx = *std::max_element(terms.begin(), terms.end());
  double acc = 0;
  for (double t : terms) acc += std::exp(t - mx);
  return std::exp(mx + std::log(acc));
}

}  // namespace ifp
