#pragma once

#include "ifp/bigcount.hpp"
#include "ifp/setcore.hpp"

#include <utility>
#include <vector>

namespace ifp {

/// (n, k) with derived c = k / n^{1/3}.
struct ProcessParams {
  int n = 0;
  int k = 0;

  ProcessParams() = default;
  ProcessParams(int n_, int k_);
  double c() const;
  /// k nearest to c * n^{1/3}.
  static ProcessParams from_c(int n, double c);
};

/// Histogram-based inclusion-exclusion over at most 25 constraint sets.
///
/// Counts the kk-subsets of a ground set of size `ground` that meet every
/// set in `sets`. Sets are given as vertex lists over arbitrary labels; only
/// their overlap structure matters. An empty set makes the count zero.
BigInt count_meeting_all(const std::vector<std::vector<Vertex>>& sets, int ground, int kk);

/// Exact open-edge counter for a fixed (n, k).
class OpenCounter {
 public:
  OpenCounter(int n, int k);

  /// Number of k-sets E with forced_in in E, E avoiding forced_out, and E
  /// meeting every edge of h.
  BigInt count(const Hypergraph& h, const std::vector<Vertex>& forced_in = {},
               const std::vector<Vertex>& forced_out = {}) const;

  /// Same contract as count(), given the edges as sorted vertex lists.
  BigInt count_edges(const std::vector<const std::vector<Vertex>*>& edges, const std::vector<Vertex>& forced_in,
                     const std::vector<Vertex>& forced_out) const;

  int n() const noexcept { return n_; }
  int k() const noexcept { return k_; }

 private:
  int n_;
  int k_;
  BinomialTable binom_;
};

BigCount count_open(const Hypergraph& h, const std::vector<Vertex>& forced_in = {},
                    const std::vector<Vertex>& forced_out = {});

/// Lower and upper bounds on almost-simple extensions containing S.
std::pair<BigCount, BigCount> nu_bounds(const Hypergraph& h, const std::vector<Vertex>& S);

/// nu(S) / binom(n,k) ~ c^{3(r-e+|S|)} / k^{r-e+2|S|}.
double nu_asymptotic(const ProcessParams& params, int s_size, int e_s, int r);

/// r! / ((r-2m)! m! 2^m).
BigCount indep_deg2_count(int r, int m);

/// sum over S of c^{3(r0-1-|S|)} / k^{r0-1}, given the sizes |S|.
double family_size_asymptotic(const ProcessParams& params, int r0, const std::vector<int>& s_sizes);

}  // namespace ifp
