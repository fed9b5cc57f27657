#include "ifp/kneser.hpp"

#include "ifp/error.hpp"
#include "ifp/stats.hpp"
#include "ifp/structure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ifp {

Graph::Graph(std::int64_t vertices, const std::vector<std::pair<std::int64_t, std::int64_t>>& edges) {
  if (vertices < 0 || vertices > kMaxKneserVertices * 100) throw Error(ErrorCode::OutOfRange, "vertex count out of range");
  std::vector<std::vector<std::int32_t>> rows(static_cast<std::size_t>(vertices));
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= vertices || v >= vertices) throw Error(ErrorCode::OutOfRange, "edge endpoint out of range");
    if (u == v) throw Error(ErrorCode::InvalidArgument, "self-loop");
    rows[static_cast<std::size_t>(u)].push_back(static_cast<std::int32_t>(v));
    rows[static_cast<std::size_t>(v)].push_back(static_cast<std::int32_t>(u));
  }
  offsets_.assign(1, 0);
  for (auto& r : rows) {
    std::sort(r.begin(), r.end());
    if (std::adjacent_find(r.begin(), r.end()) != r.end()) throw Error(ErrorCode::DuplicateEdge, "repeated edge");
    adj_.insert(adj_.end(), r.begin(), r.end());
    offsets_.push_back(static_cast<std::int64_t>(adj_.size()));
  }
}

Graph Graph::complete(std::int64_t vertices) {
  std::vector<std::pair<std::int64_t, std::int64_t>> e;
  for (std::int64_t i = 0; i < vertices; ++i)
    for (std::int64_t j = i + 1; j < vertices; ++j) e.emplace_back(i, j);
  return Graph(vertices, e);
}

Graph Graph::empty(std::int64_t vertices) { return Graph(vertices, {}); }

std::span<const std::int32_t> Graph::neighbors(std::int64_t v) const {
  const auto b = static_cast<std::size_t>(offsets_[static_cast<std::size_t>(v)]);
  const auto e = static_cast<std::size_t>(offsets_[static_cast<std::size_t>(v) + 1]);
  return {adj_.data() + b, e - b};
}

std::optional<std::int64_t> Graph::regular_degree() const {
  if (size() == 0) return 0;
  const auto d0 = degree(0);
  for (std::int64_t v = 1; v < size(); ++v)
    if (degree(v) != d0) return std::nullopt;
  return d0;
}

bool Graph::adjacent(std::int64_t u, std::int64_t v) const {
  auto row = neighbors(u);
  return std::binary_search(row.begin(), row.end(), static_cast<std::int32_t>(v));
}

std::int64_t Graph::codegree(std::int64_t u, std::int64_t v) const {
  auto a = neighbors(u), b = neighbors(v);
  std::int64_t count = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) ++i;
    else if (b[j] < a[i]) ++j;
    else ++count, ++i, ++j;
  }
  return count;
}

KSet Graph::label(std::int64_t v) const {
  if (kk_ == 0) throw Error(ErrorCode::InvalidArgument, "graph has no k-set labels");
  return ColexRanker(kn_, kk_).unrank(static_cast<std::uint64_t>(v));
}

Graph build_kneser(int n, int k) {
  if (k < 1 || n < 1 || k > n) throw Error(ErrorCode::InvalidArgument, "need 1 <= k <= n");
  const BigInt total = binom(n, k);
  if (total > kMaxKneserVertices) throw Error(ErrorCode::TooLarge, "Kneser graph has more than 1e5 vertices");
  const auto N = static_cast<std::int64_t>(total);
  const auto d = static_cast<std::int64_t>(binom(n - k, k));
  if (N * d > kMaxKneserEdgeEntries) throw Error(ErrorCode::TooLarge, "Kneser adjacency exceeds memory budget");
  const ColexRanker ranker(n, k);
  Graph g;
  g.kn_ = n;
  g.kk_ = k;
  g.adj_.reserve(static_cast<std::size_t>(N * d));
  g.offsets_.assign(1, 0);
  std::vector<Vertex> comp, img(static_cast<std::size_t>(k));
  for_each_colex(n, k, [&](const std::vector<Vertex>& s, std::uint64_t) {
    comp.clear();
    std::size_t p = 0;
    for (Vertex x = 1; x <= n; ++x) {
      if (p < s.size() && s[p] == x) ++p;
      else comp.push_back(x);
    }
    const auto row_begin = g.adj_.size();
    if (static_cast<int>(comp.size()) >= k) {
      for_each_colex(static_cast<int>(comp.size()), k, [&](const std::vector<Vertex>& idx, std::uint64_t) {
        for (int i = 0; i < k; ++i) img[static_cast<std::size_t>(i)] = comp[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)] - 1)];
        g.adj_.push_back(static_cast<std::int32_t>(ranker.rank(img)));
      });
    }
    std::sort(g.adj_.begin() + static_cast<std::ptrdiff_t>(row_begin), g.adj_.end());
    g.offsets_.push_back(static_cast<std::int64_t>(g.adj_.size()));
  });
  return g;
}

GreedyTrace greedy_independent(const Graph& g, Rng& rng, const GreedyOptions& opts) {
  const std::int64_t N = g.size();
  GreedyTrace tr;
  tr.N = N;
  tr.d = g.regular_degree().value_or(0);

  enum : std::uint8_t { Available, Chosen, Closed };
  std::vector<std::uint8_t> state(static_cast<std::size_t>(N), Available);
  std::vector<std::int64_t> pool(static_cast<std::size_t>(N)), pos(static_cast<std::size_t>(N));
  std::iota(pool.begin(), pool.end(), 0);
  std::iota(pos.begin(), pos.end(), 0);
  auto remove = [&](std::int64_t v) {
    const auto p = pos[static_cast<std::size_t>(v)];
    const auto last = pool.back();
    pool[static_cast<std::size_t>(p)] = last;
    pos[static_cast<std::size_t>(last)] = p;
    pool.pop_back();
  };

  // Tracked vertices: a uniform sample without replacement.
  const auto m = static_cast<std::size_t>(std::min<std::int64_t>(static_cast<std::int64_t>(opts.tracked), N));
  {
    std::vector<std::int64_t> all(static_cast<std::size_t>(N));
    std::iota(all.begin(), all.end(), 0);
    for (std::size_t i = 0; i < m; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(N) - i));
      std::swap(all[i], all[j]);
    }
    tr.tracked.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(m));
  }
  std::vector<std::int32_t> track_index(static_cast<std::size_t>(N), -1);
  for (std::size_t i = 0; i < m; ++i) track_index[static_cast<std::size_t>(tr.tracked[i])] = static_cast<std::int32_t>(i);
  std::vector<std::int32_t> D(m), C(m, 0);
  for (std::size_t i = 0; i < m; ++i) D[i] = static_cast<std::int32_t>(g.degree(tr.tracked[i]));

  const bool with_b = opts.codegree_threshold.has_value();
  std::vector<std::uint8_t> in_b(static_cast<std::size_t>(N), 0);
  std::vector<std::int32_t> two_hop(with_b ? static_cast<std::size_t>(N) : 0, 0);
  std::vector<std::int64_t> touched;
  std::int64_t b_size = 0, closed = 0;

  auto snapshot = [&] {
    tr.v_size.push_back(static_cast<std::int64_t>(pool.size()));
    tr.closed.push_back(closed);
    tr.b_size.push_back(b_size);
    std::vector<std::int32_t> d_row(m), c_row(m);
    std::vector<std::uint8_t> b_row(m);
    for (std::size_t i = 0; i < m; ++i) {
      const bool avail = state[static_cast<std::size_t>(tr.tracked[i])] == Available;
      d_row[i] = avail ? D[i] : -1;
      c_row[i] = avail ? C[i] : -1;
      b_row[i] = in_b[static_cast<std::size_t>(tr.tracked[i])];
    }
    tr.D.push_back(std::move(d_row));
    tr.C.push_back(std::move(c_row));
    tr.in_b.push_back(std::move(b_row));
  };

  // v leaves the available set: tracked neighbours lose it from D (and C).
  auto leave = [&](std::int64_t v) {
    remove(v);
    const bool was_b = in_b[static_cast<std::size_t>(v)];
    if (was_b) --b_size;
    for (auto u : g.neighbors(v)) {
      const auto ti = track_index[static_cast<std::size_t>(u)];
      if (ti < 0) continue;
      --D[static_cast<std::size_t>(ti)];
      if (was_b) --C[static_cast<std::size_t>(ti)];
    }
  };

  snapshot();
  while (!pool.empty()) {
    const auto v = pool[static_cast<std::size_t>(rng.below(pool.size()))];
    tr.chosen.push_back(v);
    state[static_cast<std::size_t>(v)] = Chosen;
    leave(v);
    for (auto u : g.neighbors(v)) {
      if (state[static_cast<std::size_t>(u)] != Available) continue;
      state[static_cast<std::size_t>(u)] = Closed;
      ++closed;
      leave(u);
    }
    if (with_b) {
      // Codegrees of v with every vertex by counting paths of length two.
      touched.clear();
      for (auto x : g.neighbors(v))
        for (auto y : g.neighbors(x)) {
          if (two_hop[static_cast<std::size_t>(y)]++ == 0) touched.push_back(y);
        }
      for (auto y : touched) {
        if (two_hop[static_cast<std::size_t>(y)] >= *opts.codegree_threshold && state[static_cast<std::size_t>(y)] == Available &&
            !in_b[static_cast<std::size_t>(y)]) {
          in_b[static_cast<std::size_t>(y)] = 1;
          ++b_size;
          for (auto u : g.neighbors(y)) {
            const auto ti = track_index[static_cast<std::size_t>(u)];
            if (ti >= 0) ++C[static_cast<std::size_t>(ti)];
          }
        }
        two_hop[static_cast<std::size_t>(y)] = 0;
      }
    }
    snapshot();
  }
  return tr;
}

std::string GreedyTrace::csv() const {
  std::ostringstream out;
  out << "# ifplab kneser-trajectory v1\nr,t,V_size,mean_D,B_size,max_C\n";
  for (std::size_t r = 0; r < v_size.size(); ++r) {
    double sum = 0;
    int cnt = 0, max_c = 0;
    for (std::size_t i = 0; i < tracked.size(); ++i) {
      if (D[r][i] < 0) continue;
      sum += D[r][i];
      ++cnt;
      max_c = std::max(max_c, static_cast<int>(C[r][i]));
    }
    out << r << ',' << t(r) << ',' << v_size[r] << ',' << (cnt ? sum / cnt : 0.0) << ',' << b_size[r] << ',' << max_c << '\n';
  }
  return out.str();
}

bool is_maximal_independent(const Graph& g, const std::vector<std::int64_t>& set) {
  std::vector<std::uint8_t> in(static_cast<std::size_t>(g.size()), 0), covered(static_cast<std::size_t>(g.size()), 0);
  for (auto v : set) {
    if (v < 0 || v >= g.size() || in[static_cast<std::size_t>(v)]) return false;
    in[static_cast<std::size_t>(v)] = 1;
  }
  for (auto v : set) {
    covered[static_cast<std::size_t>(v)] = 1;
    for (auto u : g.neighbors(v)) {
      if (in[static_cast<std::size_t>(u)]) return false;
      covered[static_cast<std::size_t>(u)] = 1;
    }
  }
  return std::all_of(covered.begin(), covered.end(), [](std::uint8_t x) { return x != 0; });
}

std::string_view to_string(KneserRegime r) { return r == KneserRegime::ConstantC ? "ConstantC" : "SmallK"; }

double entropy_g(double x) { return x <= 0 ? 0.0 : x * std::log(x); }
double p_N(double c) { return -entropy_g(c) - entropy_g(1 - c); }
double p_d(double c) { return entropy_g(1 - c) - entropy_g(c) - entropy_g(1 - 2 * c); }
double p_1(double c, double delta) { return entropy_g(1 - c - delta) - entropy_g(c) - entropy_g(1 - 2 * c - delta); }
double p_2(double c, double delta) {
  return entropy_g(c) - entropy_g(c - delta) - 2 * entropy_g(delta) - entropy_g(1 - delta);
}

namespace {

// Maximizer of a unimodal function on [a, b].
template <class F>
double golden_max(F f, double a, double b, double tol) {
  const double phi = (std::sqrt(5.0) - 1) / 2;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    }
  }
  return (a + b) / 2;
}

}  // namespace

KneserParams kneser_params(int n, int k) {
  if (n < 1 || k < 1) throw Error(ErrorCode::InvalidArgument, "need n, k >= 1");
  if (2 * k >= n) throw Error(ErrorCode::DegenerateRegime, "need k < n/2");
  KneserParams p;
  p.n = n;
  p.k = k;
  p.c = static_cast<double>(k) / n;
  p.N = BigCount(binom(n, k));
  p.d = BigCount(binom(n - k, k));
  p.log_N = p.N.log();
  p.log_d = p.d.log();
  p.log_gamma = p.log_d - p.log_N;
  p.gamma = std::exp(p.log_gamma);
  if (!(p.gamma < 1)) throw Error(ErrorCode::DegenerateRegime, "gamma must be below 1");

  const double c = p.c, pn = p_N(c), pd = p_d(c);
  p.eps1 = std::min(pd / pn, 1 - pd / pn);
  auto gap = [&](double delta) { return std::min(pd - p_1(c, delta), pd - p_2(c, delta)) / pn; };
  const double hi = std::min(c, 1 - 2 * c);
  p.eps2_delta = golden_max(gap, 0.0, hi, 1e-9);
  p.eps2 = gap(p.eps2_delta);
  p.epsilon = std::min(p.eps1, p.eps2);

  p.delta = 0.9 * c;
  p.log_alpha = p.log_d - c * p.delta * n;
  p.log_beta = (p.delta * std::log(c / (p.delta * p.delta)) + 2 * p.delta - p.delta * p.delta / c) * n;
  return p;
}

double KneserParams::codegree_threshold() const { return std::exp(log_d - epsilon * log_N); }

double KneserParams::envelope(double t, KneserRegime regime) const {
  if (regime == KneserRegime::ConstantC) return std::exp(-epsilon / 20 * log_N + 10 * t);
  return std::exp(0.1 * log_gamma + 10 * t);
}

double KneserParams::c_bound(KneserRegime regime) const {
  if (regime == KneserRegime::ConstantC) return std::exp(log_d - epsilon / 10 * log_N);
  return std::exp(-0.1 * log_gamma + log_alpha);
}

double KneserParams::r_end_value(KneserRegime regime) const {
  if (regime == KneserRegime::ConstantC) return epsilon / 1000 * std::exp(log_N - log_d) * log_N;
  return 0.001 / gamma * -log_gamma;
}

std::int64_t r_end(const KneserParams& params, KneserRegime regime) {
  return static_cast<std::int64_t>(std::floor(params.r_end_value(regime)));
}

CodegreeProfile codegree_profile(int n, int k) {
  const Graph g = build_kneser(n, k);
  const KneserParams params = kneser_params(n, k);
  CodegreeProfile prof;
  for (int j = 0; j < k; ++j) {
    CodegreeRow row;
    row.intersection = j;
    row.vertices = static_cast<std::int64_t>(binom(k, j) * binom(n - k, k - j));
    row.codegree = BigCount(binom(n - (2 * k - j), k));
    prof.rows.push_back(row);
  }
  // Reference vertex 0 is {1..k}; its intersection with S' is the count of entries <= k.
  const ColexRanker ranker(n, k);
  const KSet ref = ranker.unrank(0);
  std::vector<std::int64_t> explicit_cd(static_cast<std::size_t>(g.size()), 0);
  for (auto x : g.neighbors(0))
    for (auto y : g.neighbors(x)) ++explicit_cd[static_cast<std::size_t>(y)];
  bool ok = true;
  const double thr = params.codegree_threshold();
  for (std::int64_t v = 1; v < g.size(); ++v) {
    const int j = intersection_size(ref.vertices(), ranker.unrank(static_cast<std::uint64_t>(v)).vertices());
    ok = ok && BigInt(explicit_cd[static_cast<std::size_t>(v)]) == prof.rows[static_cast<std::size_t>(j)].codegree.value();
    if (static_cast<double>(explicit_cd[static_cast<std::size_t>(v)]) >= thr) ++prof.high_codegree_vertices;
  }
  prof.formula_verified = ok;
  prof.threshold = thr;
  prof.claim_holds = static_cast<double>(prof.high_codegree_vertices) <= thr;
  return prof;
}

TrajectoryReport trajectory_check(const GreedyTrace& trace, const KneserParams& params, KneserRegime regime,
                                  double t_limit) {
  TrajectoryReport rep;
  rep.regime = regime;
  const double N = static_cast<double>(trace.N), d = static_cast<double>(trace.d);
  const double cb = params.c_bound(regime);
  std::vector<double> early;
  for (std::size_t r = 0; r < trace.v_size.size(); ++r) {
    const double t = trace.t(r), et = std::exp(-t);
    const double dv = N > 0 ? std::abs(static_cast<double>(trace.v_size[r]) / N - et) : 0.0;
    double dd = 0, mc = 0;
    for (std::size_t i = 0; i < trace.tracked.size(); ++i) {
      if (trace.D[r][i] < 0) continue;
      mc = std::max(mc, static_cast<double>(trace.C[r][i]));
      if (trace.in_b[r][i] || d == 0) continue;
      dd = std::max(dd, std::abs(trace.D[r][i] / d - et));
    }
    const double f = params.envelope(t, regime);
    const bool bad = dv > f || dd > f || mc > cb;
    rep.dev_v.push_back(dv);
    rep.dev_d.push_back(dd);
    rep.envelope.push_back(f);
    rep.violation.push_back(bad);
    rep.violations += bad;
    rep.max_c = std::max(rep.max_c, mc);
    if (t <= t_limit) {
      rep.sup_dev_v = std::max(rep.sup_dev_v, dv);
      rep.sup_dev_d = std::max(rep.sup_dev_d, dd);
      early.push_back(dv);
    }
  }
  if (!early.empty()) {
    rep.median_dev_v = median(early);
    rep.q90_dev_v = quantile(early, 0.9);
  }
  return rep;
}

}  // namespace ifp
