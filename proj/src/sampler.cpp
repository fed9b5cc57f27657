#include "ifp/sampler.hpp"

#include "ifp/error.hpp"
#include "ifp/structure.hpp"

#include <algorithm>
#include <array>

namespace ifp {

BigInt uniform_below(Rng& rng, const BigInt& bound) {
  if (bound <= 0) throw Error(ErrorCode::InvalidArgument, "uniform_below needs a positive bound");
  if (bound <= BigInt(UINT64_MAX)) return BigInt(rng.below(bound.convert_to<std::uint64_t>()));
  const auto bits = static_cast<unsigned>(boost::multiprecision::msb(bound)) + 1;
  const unsigned words = (bits + 63) / 64;
  const unsigned top_bits = bits - 64 * (words - 1);
  while (true) {
    BigInt x = 0;
    for (unsigned w = 0; w < words; ++w) {
      std::uint64_t word = rng.next();
      if (w == 0 && top_bits < 64) word >>= 64 - top_bits;
      x <<= 64;
      x += word;
    }
    if (x < bound) return x;
  }
}

std::vector<Vertex> uniform_subset(Rng& rng, const std::vector<Vertex>& items, int m) {
  const auto size = items.size();
  if (m < 0 || static_cast<std::size_t>(m) > size) throw Error(ErrorCode::InvalidArgument, "subset larger than pool");
  // Floyd's algorithm over indices.
  std::vector<std::size_t> picked;
  picked.reserve(static_cast<std::size_t>(m));
  for (std::size_t j = size - static_cast<std::size_t>(m); j < size; ++j) {
    const auto t = static_cast<std::size_t>(rng.below(j + 1));
    if (std::find(picked.begin(), picked.end(), t) == picked.end()) picked.push_back(t);
    else picked.push_back(j);
  }
  std::sort(picked.begin(), picked.end());
  std::vector<Vertex> out;
  out.reserve(picked.size());
  for (auto i : picked) out.push_back(items[i]);
  return out;
}

KSet sample_open_edge_exact(const Hypergraph& h, const OpenCounter& counter, Rng& rng) {
  if (h.r() > 25) throw Error(ErrorCode::TooManyEdges, "exact sampling limited to 25 edges");
  const int n = h.n();
  const int k = h.k();
  const BigInt total = counter.count(h);
  if (total <= h.r()) throw Error(ErrorCode::NoOpenEdge, "no open unchosen edge");
  const auto deg = DegreeIndex::build(h);
  std::vector<Vertex> untouched;
  untouched.reserve(static_cast<std::size_t>(n));
  for (Vertex v = 1; v <= n; ++v)
    if (deg.deg(v) == 0) untouched.push_back(v);
  std::vector<const std::vector<Vertex>*> edges;
  for (const auto& e : h.edges()) edges.push_back(&e.vertices());

  while (true) {
    std::vector<Vertex> in;
    std::vector<Vertex> out;
    BigInt cur = total;
    for (Vertex v : deg.V) {
      if (static_cast<int>(in.size()) == k) {
        out.push_back(v);
        continue;
      }
      in.push_back(v);
      const BigInt inc = counter.count_edges(edges, in, out);
      if (uniform_below(rng, cur) < inc) {
        cur = inc;
      } else {
        in.pop_back();
        out.push_back(v);
        cur -= inc;
      }
    }
    auto rest = uniform_subset(rng, untouched, k - static_cast<int>(in.size()));
    in.insert(in.end(), rest.begin(), rest.end());
    KSet e = KSet::make(std::move(in), n);
    // Chosen edges are open too; redraw on a collision.
    if (!h.contains(e)) return e;
  }
}

KSet sample_open_edge_exact(const Hypergraph& h, const ProcessParams& params, Rng& rng) {
  if (h.n() != params.n || h.k() != params.k) throw Error(ErrorCode::MismatchedGroundSet, "params differ from hypergraph");
  return sample_open_edge_exact(h, OpenCounter(params.n, params.k), rng);
}

RejectionResult sample_open_edge_rejection(const Hypergraph& h, const ProcessParams& params, Rng& rng,
                                           std::uint64_t max_tries) {
  std::vector<Vertex> all(static_cast<std::size_t>(params.n));
  for (int i = 0; i < params.n; ++i) all[static_cast<std::size_t>(i)] = i + 1;
  RejectionResult res;
  while (res.tries < max_tries) {
    ++res.tries;
    KSet e = KSet::make(uniform_subset(rng, all, params.k), params.n);
    bool ok = !h.contains(e);
    for (std::size_t i = 0; ok && i < h.edges().size(); ++i) ok = sorted_intersects(h[i].vertices(), e.vertices());
    if (ok) {
      res.edge = std::move(e);
      return res;
    }
  }
  return res;
}

ProcessTrace run_process_early(const ProcessParams& params, int b, Rng& rng, const EarlyOptions& opts) {
  if (b < 0) throw Error(ErrorCode::InvalidArgument, "negative step count");
  if (b > 25) throw Error(ErrorCode::TooManyEdges, "early mode limited to 25 steps");
  ProcessTrace t;
  t.params = params;
  t.seed = rng.seed();
  t.mode = Mode::Early;
  t.b = b;
  OpenCounter counter(params.n, params.k);
  Hypergraph h(params.n, params.k);
  DegreeIndex deg = DegreeIndex::build(h);
  for (int step = 0; step < b; ++step) {
    KSet e = sample_open_edge_exact(h, counter, rng);
    t.quality.push_back(opts.label_steps ? extension_quality(h, deg, e, std::nullopt, opts.chi_budget)
                                         : Quality::Unclassified);
    h.append(e);
    deg.append(e);
    t.edges.push_back(std::move(e));
    if (opts.stop_at_degree > 0 && deg.maxdeg >= opts.stop_at_degree) break;
  }
  return t;
}

namespace {

// cnt[j][rank of T] = number of members containing the j-set T, for 1 <= j < k.
// A k-set E meets sum over nonempty proper T of (-1)^{|T|+1} cnt[T] members.
class SubsetCounts {
 public:
  explicit SubsetCounts(const ColexRanker& rk) : rk_(rk), k_(rk.k()) {
    levels_.resize(static_cast<std::size_t>(k_));
    for (int j = 1; j < k_; ++j) levels_[static_cast<std::size_t>(j)].assign(rk.c(rk.n(), j), 0);
  }

  void add(const std::vector<Vertex>& e) {
    for_subsets(e, [&](int j, std::uint64_t r) { ++levels_[static_cast<std::size_t>(j)][r]; });
    ++members_;
  }

  /// Number of members meeting E, assuming E itself is not a member.
  std::int64_t meeting(const std::vector<Vertex>& e) const {
    std::int64_t s = 0;
    for_subsets(e, [&](int j, std::uint64_t r) {
      const std::int64_t c = levels_[static_cast<std::size_t>(j)][r];
      s += (j % 2) ? c : -c;
    });
    return s;
  }

  std::int64_t members() const { return members_; }

 private:
  template <class F>
  void for_subsets(const std::vector<Vertex>& e, F&& f) const {
    // term[i][p] = binom(e_i - 1, p + 1): contribution of element i at position p.
    std::array<std::array<std::uint64_t, 32>, 32> term;
    for (int i = 0; i < k_; ++i)
      for (int p = 0; p <= i; ++p) term[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)] = rk_.c(e[static_cast<std::size_t>(i)] - 1, p + 1);
    const std::uint32_t full = (1u << k_) - 1;
    for (std::uint32_t mask = 1; mask < full; ++mask) {
      std::uint64_t r = 0;
      int p = 0;
      for (int i = 0; i < k_; ++i)
        if (mask >> i & 1) r += term[static_cast<std::size_t>(i)][static_cast<std::size_t>(p++)];
      f(p, r);
    }
  }

  const ColexRanker& rk_;
  int k_;
  std::vector<std::vector<std::uint32_t>> levels_;
  std::int64_t members_ = 0;
};

// Open unchosen sets given the edges drawn so far, as colex ranks.
std::vector<std::uint64_t> enumerate_open(const Hypergraph& h, const ColexRanker& rk) {
  const int n = h.n();
  const int k = h.k();
  const int r = h.r();
  const std::uint32_t all = r == 0 ? 0u : (r == 32 ? ~0u : ((1u << r) - 1));
  std::vector<std::uint32_t> vm(static_cast<std::size_t>(n) + 2, 0);
  for (int i = 0; i < r; ++i)
    for (Vertex v : h[static_cast<std::size_t>(i)]) vm[static_cast<std::size_t>(v)] |= 1u << i;
  std::vector<std::uint32_t> suf(static_cast<std::size_t>(n) + 2, 0);
  for (int v = n; v >= 1; --v) suf[static_cast<std::size_t>(v)] = suf[static_cast<std::size_t>(v) + 1] | vm[static_cast<std::size_t>(v)];
  std::vector<std::uint64_t> chosen;
  for (const auto& e : h.edges()) chosen.push_back(rk.rank(e.vertices()));
  std::sort(chosen.begin(), chosen.end());

  std::vector<std::uint64_t> out;
  auto rec = [&](auto&& self, int start, int depth, std::uint32_t hit, std::uint64_t acc) -> void {
    const int last = n - (k - depth) + 1;
    for (int v = start; v <= last; ++v) {
      if ((hit | suf[static_cast<std::size_t>(v)]) != all) break;
      const std::uint32_t nh = hit | vm[static_cast<std::size_t>(v)];
      const std::uint64_t na = acc + rk.c(v - 1, depth + 1);
      if (depth + 1 == k) {
        if (nh == all && !std::binary_search(chosen.begin(), chosen.end(), na)) out.push_back(na);
      } else {
        self(self, v + 1, depth + 1, nh, na);
      }
    }
  };
  rec(rec, 1, 0, 0u, 0);
  return out;
}

}  // namespace

FullResult run_process_full(const ProcessParams& params, Rng& rng, const FullOptions& opts) {
  const int n = params.n;
  const int k = params.k;
  if (binom(n, k) > opts.max_instance) throw Error(ErrorCode::InstanceTooLarge, "binom(n,k) too large for full mode");
  if (k > 30) throw Error(ErrorCode::InstanceTooLarge, "k too large for full mode");
  ColexRanker rk(n, k);
  FullResult res{ProcessTrace{}, FinalFamily(n, k), 0};
  ProcessTrace& t = res.trace;
  t.params = params;
  t.seed = rng.seed();
  t.mode = Mode::Full;

  OpenCounter counter(n, k);
  Hypergraph h(n, k);
  DegreeIndex deg = DegreeIndex::build(h);
  std::vector<std::uint64_t> members;
  SubsetCounts counts(rk);

  auto record = [&](const KSet& e) {
    if (t.edges.size() < opts.trace_limit) {
      t.quality.push_back(opts.label_steps ? extension_quality(h, deg, e, std::nullopt, opts.chi_budget)
                                           : Quality::Unclassified);
      t.edges.push_back(e);
      h.append(e);
      deg.append(e);
    }
    members.push_back(rk.rank(e.vertices()));
    counts.add(e.vertices());
  };

  // Exact steps while the open set is too large to list.
  while (h.r() < 25 && t.edges.size() < opts.trace_limit) {
    const BigInt open = counter.count(h) - h.r();
    if (open <= opts.switch_threshold) break;
    record(sample_open_edge_exact(h, counter, rng));
    ++res.exact_steps;
  }

  // Enumerate what is still open, then scan it in uniformly random order: the
  // first still-valid candidate in a uniform ordering is uniform over the valid
  // ones, so this is the same process.
  Hypergraph phase1(n, k);
  for (std::size_t i = 0; i < res.exact_steps; ++i) phase1.append(t.edges[i]);
  std::vector<std::uint64_t> cand = enumerate_open(phase1, rk);
  for (std::size_t i = cand.size(); i > 1; --i) std::swap(cand[i - 1], cand[rng.below(i)]);

  const int words = (n + 64) / 64;
  constexpr int kRecent = 16;
  std::vector<std::uint64_t> recent(static_cast<std::size_t>(kRecent * words), 0);
  int recent_count = 0;
  std::vector<std::uint64_t> emask(static_cast<std::size_t>(words));
  std::vector<Vertex> v;
  std::vector<std::uint64_t> rejected;

  for (auto c : cand) {
    rk.unrank(c, v);
    std::fill(emask.begin(), emask.end(), 0);
    for (Vertex x : v) emask[static_cast<std::size_t>(x >> 6)] |= std::uint64_t{1} << (x & 63);
    bool ok = true;
    for (int i = 0; ok && i < std::min(recent_count, kRecent); ++i) {
      bool meet = false;
      for (int w = 0; w < words; ++w) meet |= (recent[static_cast<std::size_t>(i * words + w)] & emask[static_cast<std::size_t>(w)]) != 0;
      ok = meet;
    }
    if (ok) ok = counts.meeting(v) == counts.members();
    if (!ok) {
      rejected.push_back(c);
      continue;
    }
    record(KSet::make(v, n));
    std::copy(emask.begin(), emask.end(), recent.begin() + static_cast<std::ptrdiff_t>((recent_count % kRecent) * words));
    ++recent_count;
  }

  // Maximality sweep: every non-member must miss some member.
  bool maximal = true;
  std::sort(members.begin(), members.end());
  if (rk.total() <= 20'000'000) {
    std::size_t p = 0;
    for_each_colex(n, k, [&](const std::vector<Vertex>& s, std::uint64_t rank) {
      while (p < members.size() && members[p] < rank) ++p;
      if (p < members.size() && members[p] == rank) return;
      if (counts.meeting(s) == counts.members()) maximal = false;
    });
  } else {
    for (auto c : rejected) {
      rk.unrank(c, v);
      if (counts.meeting(v) == counts.members()) maximal = false;
    }
  }
  res.family = FinalFamily(n, k, std::move(members), maximal);
  return res;
}

std::map<KSet, Rational> oracle_step_distribution(const Hypergraph& h, const ProcessParams& params) {
  if (binom(params.n, params.k) > 1'000'000) throw Error(ErrorCode::InstanceTooLarge, "enumeration limited to 10^6 sets");
  std::vector<KSet> open;
  for_each_colex(params.n, params.k, [&](const std::vector<Vertex>& s, std::uint64_t) {
    for (const auto& e : h.edges())
      if (!sorted_intersects(e.vertices(), s)) return;
    KSet e = KSet::make(s, params.n);
    if (!h.contains(e)) open.push_back(std::move(e));
  });
  std::map<KSet, Rational> dist;
  for (auto& e : open) dist.emplace(std::move(e), Rational(1, static_cast<long long>(open.size())));
  return dist;
}

}  // namespace ifp
