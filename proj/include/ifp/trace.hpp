#pragma once

#include "ifp/counting.hpp"
#include "ifp/setcore.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ifp {

/// Per-step label of an accepted edge relative to the hypergraph before it.
/// Unclassified marks steps whose optimum search exceeded its budget.
enum class Quality { Good, BadNotAlmostSimple, BadChi, Unclassified };

std::string_view to_string(Quality q);
Quality quality_from_string(std::string_view s);

enum class Mode { Early, Full };

/// Record of one process run.
struct ProcessTrace {
  ProcessParams params;
  std::vector<KSet> edges;
  std::vector<Quality> quality;
  std::uint64_t seed = 0;
  Mode mode = Mode::Early;
  int b = 0;  // requested steps in early mode

  int r() const noexcept { return static_cast<int>(edges.size()); }
  Hypergraph hypergraph(int r) const;
  Hypergraph hypergraph() const { return hypergraph(this->r()); }

  /// Header lines "# key=value" followed by one "edge label" line per step.
  std::string str() const;
  static ProcessTrace parse(std::string_view text);
};

}  // namespace ifp

namespace ifp {

/// Final family of a full-mode run, stored as sorted colex ranks.
class FinalFamily {
 public:
  FinalFamily(int n, int k) : ranker_(n, k) {}
  FinalFamily(int n, int k, std::vector<std::uint64_t> ranks, bool maximal);

  int n() const noexcept { return ranker_.n(); }
  int k() const noexcept { return ranker_.k(); }
  std::size_t size() const noexcept { return ranks_.size(); }
  bool maximal() const noexcept { return maximal_; }
  const std::vector<std::uint64_t>& ranks() const noexcept { return ranks_; }
  const ColexRanker& ranker() const noexcept { return ranker_; }

  bool contains(const KSet& e) const;
  bool contains_rank(std::uint64_t rank) const;
  std::vector<KSet> members() const;

 private:
  ColexRanker ranker_;
  std::vector<std::uint64_t> ranks_;
  bool maximal_ = false;
};

}  // namespace ifp
