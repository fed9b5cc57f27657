#pragma once

#include "ifp/bigcount.hpp"
#include "ifp/counting.hpp"
#include "ifp/rng.hpp"
#include "ifp/setcore.hpp"
#include "ifp/trace.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace ifp {

/// Uniform integer in [0, bound) for an arbitrary positive big integer.
BigInt uniform_below(Rng& rng, const BigInt& bound);

/// Uniform m-subset of `items` (sorted output when `items` is sorted).
std::vector<Vertex> uniform_subset(Rng& rng, const std::vector<Vertex>& items, int m);

/// Exact uniform draw among open edges not already in h.
KSet sample_open_edge_exact(const Hypergraph& h, const OpenCounter& counter, Rng& rng);
KSet sample_open_edge_exact(const Hypergraph& h, const ProcessParams& params, Rng& rng);

struct RejectionResult {
  std::optional<KSet> edge;  // empty when every try failed
  std::uint64_t tries = 0;
};

/// Uniform k-set draws filtered on "meets every edge and is unchosen".
RejectionResult sample_open_edge_rejection(const Hypergraph& h, const ProcessParams& params, Rng& rng,
                                           std::uint64_t max_tries);

struct EarlyOptions {
  bool label_steps = true;
  std::uint64_t chi_budget = 2'000'000;
  /// Stop before b steps once the hypergraph has a vertex of degree `stop_at_degree` (0 = never).
  int stop_at_degree = 0;
};

/// b exact sampling steps with per-step quality labels; b <= 25.
ProcessTrace run_process_early(const ProcessParams& params, int b, Rng& rng, const EarlyOptions& opts = {});

struct FullOptions {
  bool label_steps = false;
  std::uint64_t chi_budget = 200'000;
  /// Edges kept in the trace (and labelled); the family itself is always complete.
  std::size_t trace_limit = SIZE_MAX;
  /// Exact sampling steps continue while more open unchosen edges remain than this.
  std::uint64_t switch_threshold = 30'000'000;
  std::uint64_t max_instance = 500'000'000;
};

struct FullResult {
  ProcessTrace trace;
  FinalFamily family;
  std::uint64_t exact_steps = 0;  // steps drawn by inclusion-exclusion before the enumeration phase
};

/// Runs the process to maximality.
FullResult run_process_full(const ProcessParams& params, Rng& rng, const FullOptions& opts = {});

/// Exact distribution of the next edge: uniform over open unchosen edges.
std::map<KSet, Rational> oracle_step_distribution(const Hypergraph& h, const ProcessParams& params);

}  // namespace ifp
