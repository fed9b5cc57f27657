#pragma once

#include "ifp/bigcount.hpp"

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ifp {

using Vertex = std::int32_t;

/// A k-subset of [n] stored as a strictly increasing vertex list.
class KSet {
 public:
  KSet() = default;

  /// Sorts `vertices`; rejects repeats and values outside [1, n].
  static KSet make(std::vector<Vertex> vertices, int n);
  /// Parses the canonical "v1,v2,..." form.
  static KSet parse(std::string_view text, int n);

  const std::vector<Vertex>& vertices() const noexcept { return v_; }
  int n() const noexcept { return n_; }
  int k() const noexcept { return static_cast<int>(v_.size()); }
  bool contains(Vertex x) const;
  std::string str() const;

  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }

  friend bool operator==(const KSet& a, const KSet& b) { return a.n_ == b.n_ && a.v_ == b.v_; }
  friend bool operator<(const KSet& a, const KSet& b) {
    return a.n_ != b.n_ ? a.n_ < b.n_ : a.v_ < b.v_;
  }

 private:
  KSet(std::vector<Vertex> v, int n) : v_(std::move(v)), n_(n) {}
  std::vector<Vertex> v_;
  int n_ = 0;
};

KSet make_kset(std::vector<Vertex> vertices, int n);

bool intersects(const KSet& a, const KSet& b);
/// Size of the intersection of two sorted vertex lists.
int intersection_size(std::span<const Vertex> a, std::span<const Vertex> b);
bool sorted_intersects(std::span<const Vertex> a, std::span<const Vertex> b);

/// Ordered sequence of distinct k-sets over a common ground set.
class Hypergraph {
 public:
  Hypergraph() = default;
  Hypergraph(int n, int k) : n_(n), k_(k) {}
  Hypergraph(int n, int k, const std::vector<KSet>& edges);

  int n() const noexcept { return n_; }
  int k() const noexcept { return k_; }
  int r() const noexcept { return static_cast<int>(edges_.size()); }
  const std::vector<KSet>& edges() const noexcept { return edges_; }
  const KSet& operator[](std::size_t i) const { return edges_[i]; }

  void append(const KSet& e);
  bool contains(const KSet& e) const { return index_.count(e.vertices()) != 0; }
  bool pairwise_intersecting() const;
  /// The first r edges.
  Hypergraph prefix(int r) const;

  /// One edge per line in canonical form.
  std::string str() const;
  static Hypergraph parse(std::string_view text, int n, int k);

 private:
  int n_ = 0;
  int k_ = 0;
  std::vector<KSet> edges_;
  std::set<std::vector<Vertex>> index_;
};

/// Per-vertex degrees and the V/U/W partition of a hypergraph.
struct DegreeIndex {
  std::vector<int> degree;    // indexed by vertex, slot 0 unused
  std::vector<Vertex> V;      // degree >= 1
  std::vector<Vertex> U;      // degree == 1
  std::vector<Vertex> W;      // degree >= 2
  int maxdeg = 0;
  int edges = 0;

  static DegreeIndex build(const Hypergraph& h);
  void append(const KSet& e);
  int deg(Vertex v) const { return degree[static_cast<std::size_t>(v)]; }

  friend bool operator==(const DegreeIndex&, const DegreeIndex&) = default;
};

DegreeIndex degree_index(const Hypergraph& h);

/// Colexicographic ranking of k-subsets of [n] into [0, binom(n,k)).
class ColexRanker {
 public:
  ColexRanker(int n, int k);

  std::uint64_t rank(std::span<const Vertex> sorted) const;
  void unrank(std::uint64_t rank, std::vector<Vertex>& out) const;
  KSet unrank(std::uint64_t rank) const;
  std::uint64_t total() const noexcept { return total_; }
  /// binom(m, j) as a 64-bit value for m <= n, j <= k.
  std::uint64_t c(int m, int j) const {
    return (m < 0 || j < 0 || j > m) ? 0 : table_[static_cast<std::size_t>(m) * (k_ + 1) + j];
  }
  int n() const noexcept { return n_; }
  int k() const noexcept { return k_; }

 private:
  int n_;
  int k_;
  std::uint64_t total_;
  std::vector<std::uint64_t> table_;
};

}  // namespace ifp
