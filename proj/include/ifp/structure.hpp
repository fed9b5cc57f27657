#pragma once

#include "ifp/bigcount.hpp"
#include "ifp/setcore.hpp"
#include "ifp/trace.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ifp {

using VertexSet = std::vector<Vertex>;   // sorted
using SetFamily = std::vector<VertexSet>;  // sorted, distinct

/// e_r(S) - 2|S|; S must consist of vertices of degree at least two.
int chi(const Hypergraph& h, const VertexSet& S);

struct ChiResult {
  int chi_star = 0;
  SetFamily S_r;  // every maximizer, including the empty set when chi_star = 0
};

/// Maximum of chi over subsets of W(h) and all maximizers; |W| <= 40.
ChiResult chi_star_and_Sr(const Hypergraph& h);

/// Maximum of chi only, by branch and bound. Returns nullopt when the search
/// visits more than `node_budget` nodes.
std::optional<int> chi_star(const Hypergraph& h, const DegreeIndex& deg, std::uint64_t node_budget = 2'000'000);

/// Label of E_new as an extension of h. `known_chi_star` skips the optimum
/// search when the caller already has it.
Quality extension_quality(const Hypergraph& h, const DegreeIndex& deg, const KSet& e_new,
                          std::optional<int> known_chi_star = std::nullopt, std::uint64_t node_budget = 2'000'000);
Quality extension_quality(const Hypergraph& h, const KSet& e_new);

struct StructureState {
  std::optional<int> r0;
  std::optional<int> r1;
  VertexSet J;
  Hypergraph base;                     // H_{r0-1}
  std::optional<int> chi_star;         // chi* of H_{r1} (or of the last step while r1 is pending)
  std::vector<std::size_t> S_sizes;    // |S_r| for r = r0, r0+1, ...
  SetFamily S_r;                       // at the last step examined
  SetFamily S_stable;                  // S_{r1}
  int steps = 0;
  bool overflow = false;               // independent-set enumeration exceeded its cap

  bool complete() const noexcept { return r0.has_value() && r1.has_value(); }
};

StructureState hitting_times(const ProcessTrace& trace);
StructureState hitting_times(const std::vector<KSet>& edges, int n, int k);

bool pairwise_intersecting(const SetFamily& fam);

struct FamilyBounds {
  Hypergraph base;
  SetFamily S_stable;
  std::optional<BigInt> lower_size;  // |I*| by enumeration when feasible
  std::optional<BigInt> upper_size;  // |I**|
  double lower_density = 0;          // asymptotic |I*| / binom(n, k)

  bool in_lower(const KSet& e) const;
  bool in_upper(const KSet& e) const;
};

/// `exact_limit` bounds binom(n, k) for the enumeration of exact sizes.
FamilyBounds build_bounds(const StructureState& state, const Hypergraph& base, std::uint64_t exact_limit = 10'000'000);
FamilyBounds build_bounds(const StructureState& state, std::uint64_t exact_limit = 10'000'000);

enum class FamilyTag { Trivial, HiltonMilner, JuntaOther };
std::string_view to_string(FamilyTag t);

struct ClassEvidence {
  bool checked = false;          // a final family was supplied
  std::uint64_t final_size = 0;  // |I_k|
  BigInt junta_size = 0;         // |J|, the upward closure of the stable family
  std::uint64_t outside = 0;     // |I_k \ J|
  double outside_fraction = 0;
  bool exact_match = false;      // I_k == J
};

struct FamilyClass {
  FamilyTag tag = FamilyTag::JuntaOther;
  Vertex center = 0;
  std::optional<KSet> edge;  // Hilton-Milner edge F
  VertexSet ground;
  SetFamily generator;
  ClassEvidence evidence;

  /// Membership in the junta J: E restricted to the ground set contains a generator.
  bool in_junta(const KSet& e) const;
};

FamilyClass classify(const StructureState& state, const FinalFamily* final_family = nullptr);

/// Number of k-subsets of [n] containing at least one member of `fam`.
BigInt count_containing_some(const SetFamily& fam, int n, int k);

struct ContainmentReport {
  bool lower_ok = false;  // I* within I_k
  bool upper_ok = false;  // I_k within I**
  std::uint64_t excess = 0;   // |I_k \ I**|
  std::uint64_t deficit = 0;  // |I* \ I_k|
  std::uint64_t lower_size = 0;
  std::uint64_t upper_size = 0;
};

ContainmentReport verify_containment(const FamilyBounds& bounds, const FinalFamily& final_family);

/// Calls f(vertices, rank) for every k-subset of [n] in colex order.
template <class F>
void for_each_colex(int n, int k, F&& f) {
  std::vector<Vertex> v(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) v[static_cast<std::size_t>(i)] = i + 1;
  std::uint64_t rank = 0;
  if (k == 0 || k > n) return;
  while (true) {
    f(static_cast<const std::vector<Vertex>&>(v), rank++);
    int i = 0;
    while (i < k - 1 && v[static_cast<std::size_t>(i)] + 1 == v[static_cast<std::size_t>(i) + 1]) ++i;
    if (i == k - 1 && v[static_cast<std::size_t>(i)] == n) return;
    ++v[static_cast<std::size_t>(i)];
    for (int j = 0; j < i; ++j) v[static_cast<std::size_t>(j)] = j + 1;
  }
}

}  // namespace ifp
