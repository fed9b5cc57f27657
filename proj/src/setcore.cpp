#include "ifp/setcore.hpp"

#include "ifp/error.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <sstream>

namespace ifp {

KSet KSet::make(std::vector<Vertex> vertices, int n) {
  if (n < 1) throw Error(ErrorCode::OutOfRange, "ground set size must be positive");
  for (Vertex v : vertices)
    if (v < 1 || v > n)
      throw Error(ErrorCode::OutOfRange, "vertex " + std::to_string(v) + " not in [1," + std::to_string(n) + "]");
  std::sort(vertices.begin(), vertices.end());
  if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end())
    throw Error(ErrorCode::DuplicateVertex, "repeated vertex in k-set");
  return KSet(std::move(vertices), n);
}

KSet make_kset(std::vector<Vertex> vertices, int n) { return KSet::make(std::move(vertices), n); }

KSet KSet::parse(std::string_view text, int n) {
  std::vector<Vertex> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view tok = text.substr(pos, comma - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\r')) tok.remove_suffix(1);
    Vertex v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || p != tok.data() + tok.size())
      throw Error(ErrorCode::ParseError, "bad vertex '" + std::string(tok) + "'");
    out.push_back(v);
    pos = comma + 1;
  }
  return make(std::move(out), n);
}

bool KSet::contains(Vertex x) const { return std::binary_search(v_.begin(), v_.end(), x); }

std::string KSet::str() const {
  std::string s;
  for (std::size_t i = 0; i < v_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v_[i]);
  }
  return s;
}

int intersection_size(std::span<const Vertex> a, std::span<const Vertex> b) {
  int count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) ++i;
    else if (*j < *i) ++j;
    else { ++count; ++i; ++j; }
  }
  return count;
}

bool sorted_intersects(std::span<const Vertex> a, std::span<const Vertex> b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) ++i;
    else if (*j < *i) ++j;
    else return true;
  }
  return false;
}

bool intersects(const KSet& a, const KSet& b) {
  if (a.n() != b.n()) throw Error(ErrorCode::MismatchedGroundSet, "k-sets over different ground sets");
  return sorted_intersects(a.vertices(), b.vertices());
}

Hypergraph::Hypergraph(int n, int k, const std::vector<KSet>& edges) : n_(n), k_(k) {
  for (const auto& e : edges) append(e);
}

void Hypergraph::append(const KSet& e) {
  if (e.n() != n_) throw Error(ErrorCode::MismatchedGroundSet, "edge ground set differs from hypergraph");
  if (e.k() != k_) throw Error(ErrorCode::InvalidArgument, "edge has wrong cardinality");
  if (!index_.insert(e.vertices()).second) throw Error(ErrorCode::DuplicateEdge, "edge " + e.str() + " already present");
  edges_.push_back(e);
}

bool Hypergraph::pairwise_intersecting() const {
  for (std::size_t i = 0; i < edges_.size(); ++i)
    for (std::size_t j = i + 1; j < edges_.size(); ++j)
      if (!sorted_intersects(edges_[i].vertices(), edges_[j].vertices())) return false;
  return true;
}

Hypergraph Hypergraph::prefix(int r) const {
  if (r < 0 || r > this->r()) throw Error(ErrorCode::OutOfRange, "prefix length out of range");
  Hypergraph h(n_, k_);
  for (int i = 0; i < r; ++i) h.append(edges_[static_cast<std::size_t>(i)]);
  return h;
}

std::string Hypergraph::str() const {
  std::string s;
  for (const auto& e : edges_) {
    s += e.str();
    s += '\n';
  }
  return s;
}

Hypergraph Hypergraph::parse(std::string_view text, int n, int k) {
  Hypergraph h(n, k);
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) h.append(KSet::parse(line, n));
    pos = nl + 1;
  }
  return h;
}

namespace {

void insert_sorted(std::vector<Vertex>& v, Vertex x) { v.insert(std::lower_bound(v.begin(), v.end(), x), x); }

void erase_sorted(std::vector<Vertex>& v, Vertex x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it != v.end() && *it == x) v.erase(it);
}

}  // namespace

DegreeIndex DegreeIndex::build(const Hypergraph& h) {
  DegreeIndex d;
  d.degree.assign(static_cast<std::size_t>(h.n()) + 1, 0);
  for (const auto& e : h.edges())
    for (Vertex v : e) ++d.degree[static_cast<std::size_t>(v)];
  for (Vertex v = 1; v <= h.n(); ++v) {
    const int g = d.deg(v);
    if (g >= 1) d.V.push_back(v);
    if (g == 1) d.U.push_back(v);
    if (g >= 2) d.W.push_back(v);
    d.maxdeg = std::max(d.maxdeg, g);
  }
  d.edges = h.r();
  return d;
}

void DegreeIndex::append(const KSet& e) {
  if (degree.size() != static_cast<std::size_t>(e.n()) + 1) degree.resize(static_cast<std::size_t>(e.n()) + 1, 0);
  for (Vertex v : e) {
    const int g = ++degree[static_cast<std::size_t>(v)];
    if (g == 1) {
      insert_sorted(V, v);
      insert_sorted(U, v);
    } else if (g == 2) {
      erase_sorted(U, v);
      insert_sorted(W, v);
    }
    maxdeg = std::max(maxdeg, g);
  }
  ++edges;
}

DegreeIndex degree_index(const Hypergraph& h) { return DegreeIndex::build(h); }

ColexRanker::ColexRanker(int n, int k) : n_(n), k_(k) {
  if (n < 0 || k < 0 || k > n) throw Error(ErrorCode::OutOfRange, "invalid (n, k) for ranking");
  table_.assign(static_cast<std::size_t>(n + 1) * (k + 1), 0);
  constexpr auto cap = std::numeric_limits<std::uint64_t>::max() / 2;
  for (int m = 0; m <= n; ++m) {
    table_[static_cast<std::size_t>(m) * (k + 1)] = 1;
    for (int j = 1; j <= k && j <= m; ++j) {
      const auto a = table_[static_cast<std::size_t>(m - 1) * (k + 1) + j];
      const auto b = table_[static_cast<std::size_t>(m - 1) * (k + 1) + j - 1];
      if (a > cap || b > cap) throw Error(ErrorCode::InstanceTooLarge, "binom(n,k) exceeds 64-bit ranking");
      table_[static_cast<std::size_t>(m) * (k + 1) + j] = a + b;
    }
  }
  total_ = c(n, k);
}

std::uint64_t ColexRanker::rank(std::span<const Vertex> sorted) const {
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) r += c(sorted[i] - 1, static_cast<int>(i) + 1);
  return r;
}

void ColexRanker::unrank(std::uint64_t rank, std::vector<Vertex>& out) const {
  out.resize(static_cast<std::size_t>(k_));
  int hi = n_;
  for (int i = k_; i >= 1; --i) {
    // Largest m in [i, hi] with binom(m-1, i) <= rank.
    int lo = i;
    while (lo < hi) {
      const int mid = (lo + hi + 1) / 2;
      if (c(mid - 1, i) <= rank) lo = mid;
      else hi = mid - 1;
    }
    out[static_cast<std::size_t>(i - 1)] = lo;
    rank -= c(lo - 1, i);
    hi = lo - 1;
  }
}

KSet ColexRanker::unrank(std::uint64_t rank) const {
  std::vector<Vertex> v;
  unrank(rank, v);
  return KSet::make(std::move(v), n_);
}

}  // namespace ifp
