#pragma once

#include "ifp/bigcount.hpp"
#include "ifp/rng.hpp"
#include "ifp/setcore.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ifp {

/// Simple undirected graph in compressed adjacency form (sorted rows).
class Graph {
 public:
  Graph() = default;
  Graph(std::int64_t vertices, const std::vector<std::pair<std::int64_t, std::int64_t>>& edges);

  static Graph complete(std::int64_t vertices);
  static Graph empty(std::int64_t vertices);

  std::int64_t size() const noexcept { return static_cast<std::int64_t>(offsets_.size()) - 1; }
  std::span<const std::int32_t> neighbors(std::int64_t v) const;
  std::int64_t degree(std::int64_t v) const { return offsets_[v + 1] - offsets_[v]; }
  /// Common degree when regular.
  std::optional<std::int64_t> regular_degree() const;
  bool adjacent(std::int64_t u, std::int64_t v) const;
  std::int64_t codegree(std::int64_t u, std::int64_t v) const;

  /// Kneser labels: vertex i is the k-set of colex rank i (empty for other graphs).
  int kneser_n() const noexcept { return kn_; }
  int kneser_k() const noexcept { return kk_; }
  KSet label(std::int64_t v) const;

 private:
  friend Graph build_kneser(int n, int k);
  std::vector<std::int64_t> offsets_{0};
  std::vector<std::int32_t> adj_;
  int kn_ = 0;
  int kk_ = 0;
};

constexpr std::int64_t kMaxKneserVertices = 100000;
constexpr std::int64_t kMaxKneserEdgeEntries = 200000000;

/// K(n, k): k-subsets of [n], adjacent when disjoint. N <= 1e5.
Graph build_kneser(int n, int k);

struct GreedyOptions {
  std::size_t tracked = 64;
  /// Codegree level at or above which a chosen vertex puts an available vertex into B.
  /// Unset disables B and C bookkeeping.
  std::optional<double> codegree_threshold;
};

struct GreedyTrace {
  std::int64_t N = 0;
  std::int64_t d = 0;                     // common degree, 0 if irregular
  std::vector<std::int64_t> chosen;       // I(r) in order
  std::vector<std::int64_t> v_size;       // |V(r)|, r = 0..final
  std::vector<std::int64_t> closed;       // vertices closed by step r (neither chosen nor available)
  std::vector<std::int64_t> b_size;       // |B(r)|
  std::vector<std::int64_t> tracked;      // tracked vertex ids
  std::vector<std::vector<std::int32_t>> D;  // D[r][i]: available neighbours of tracked i, -1 once unavailable
  std::vector<std::vector<std::int32_t>> C;  // C[r][i]: those in B
  std::vector<std::vector<std::uint8_t>> in_b;  // in_b[r][i]: tracked i lies in B(r)

  std::size_t steps() const noexcept { return chosen.size(); }
  double t(std::size_t r) const { return N == 0 ? 0.0 : static_cast<double>(d) * static_cast<double>(r) / static_cast<double>(N); }
  /// Columns r, t, V_size, mean tracked D_v, B_size, max C_v.
  std::string csv() const;
};

/// Random greedy independent set process run to completion.
GreedyTrace greedy_independent(const Graph& g, Rng& rng, const GreedyOptions& opts = {});

bool is_maximal_independent(const Graph& g, const std::vector<std::int64_t>& set);

enum class KneserRegime { ConstantC, SmallK };
std::string_view to_string(KneserRegime r);

/// Entropy exponents: g(x) = x log x with g(0) = 0.
double entropy_g(double x);
double p_N(double c);
double p_d(double c);
double p_1(double c, double delta);
double p_2(double c, double delta);

struct KneserParams {
  int n = 0;
  int k = 0;
  double c = 0;
  BigCount N, d;
  double log_N = 0, log_d = 0;
  double gamma = 0, log_gamma = 0;
  double eps1 = 0;         // min(p_d/p_N, 1 - p_d/p_N)
  double eps2 = 0;         // max over delta of min(p_d - p_1, p_d - p_2)/p_N
  double eps2_delta = 0;   // maximizing delta
  double epsilon = 0;      // min(eps1, eps2)
  double delta = 0;        // 0.9c
  double log_alpha = 0;    // log d - c delta n
  double log_beta = 0;     // (delta log(c/delta^2) + 2 delta - delta^2/c) n

  /// d N^{-eps}: codegree threshold defining B in the constant-c regime.
  double codegree_threshold() const;
  /// Error envelope f(t) of the regime.
  double envelope(double t, KneserRegime regime) const;
  /// Bound on |C_v| in the regime.
  double c_bound(KneserRegime regime) const;
  /// Real-valued r_end of the regime.
  double r_end_value(KneserRegime regime) const;
};

KneserParams kneser_params(int n, int k);
std::int64_t r_end(const KneserParams& params, KneserRegime regime);

struct CodegreeRow {
  int intersection = 0;        // |S ∩ S'|
  std::int64_t vertices = 0;   // number of S' with this intersection
  BigCount codegree;           // binom(n - |S ∪ S'|, k)
};

struct CodegreeProfile {
  std::vector<CodegreeRow> rows;  // intersection 0..k-1 (S' != S)
  bool formula_verified = false;  // explicit common-neighbour counts agree
  double threshold = 0;           // d N^{-eps}
  std::int64_t high_codegree_vertices = 0;
  bool claim_holds = false;       // high_codegree_vertices <= threshold
};

CodegreeProfile codegree_profile(int n, int k);

struct TrajectoryReport {
  KneserRegime regime = KneserRegime::ConstantC;
  std::vector<double> dev_v;      // |V(r)/N - e^{-t}|
  std::vector<double> dev_d;      // max over tracked available v not in B of |D_v/d - e^{-t}|
  std::vector<double> envelope;   // f(t)
  std::vector<std::uint8_t> violation;
  std::size_t violations = 0;
  double sup_dev_v = 0;           // over t <= t_limit
  double sup_dev_d = 0;
  double max_c = 0;
  double median_dev_v = 0, q90_dev_v = 0;
};

TrajectoryReport trajectory_check(const GreedyTrace& trace, const KneserParams& params,
                                  KneserRegime regime = KneserRegime::ConstantC, double t_limit = 1.0);

}  // namespace ifp
