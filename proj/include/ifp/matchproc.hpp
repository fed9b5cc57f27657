#pragma once

#include "ifp/bigcount.hpp"
#include "ifp/rng.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace ifp {

/// A matching of K_t as a mask over edge indices; edge {i,j}, i < j, has index
/// (j-1)(j-2)/2 + (i-1), which does not depend on t.
using Matching = std::uint64_t;
using MatchingFamily = std::vector<Matching>;  // sorted

constexpr int kMaxMatchingT = 10;

int edge_index(int i, int j);
std::pair<int, int> edge_endpoints(int index);
Matching make_matching(const std::vector<std::pair<int, int>>& edges);
std::string matching_str(Matching m);  // "12,34"
inline bool matchings_intersect(Matching a, Matching b) { return (a & b) != 0; }

/// Every matching of K_t meeting all members of `constraint` (all matchings,
/// the empty one included, when the constraint is empty); t <= 10.
MatchingFamily enumerate_matchings(int t, const MatchingFamily& constraint = {});

/// Draw with probability proportional to w^{|M|}.
Matching weighted_sample(const MatchingFamily& matchings, double w, Rng& rng);

struct MatchingRun {
  int t = 0;
  MatchingFamily family;
  std::uint64_t draws = 0;
};

/// The two-loop random matching procedure started from K_1.
MatchingRun run_matching_procedure(double w, Rng& rng, int t_cap = kMaxMatchingT);

/// The procedure conditioned on its first nonempty draw happening on K_t: the
/// seed is drawn from the nonempty matchings of K_t, then the second loop runs.
MatchingRun run_matching_from(int t, double w, Rng& rng);

/// Second loop only, from a given nonempty seed.
MatchingRun complete_matching_family(int t, Matching seed, double w, Rng& rng);

enum class MatchingType { Star, TwoOfThreePM, Other };
std::string_view to_string(MatchingType t);

struct MatchingClass {
  MatchingType type = MatchingType::Other;
  Matching star_edge = 0;  // single-edge mask for Star
  Matching perfect = 0;    // three-edge matching for TwoOfThreePM
};

bool is_maximal_intersecting(const MatchingFamily& fam, int t);
MatchingClass classify_matching_family(const MatchingFamily& fam, int t);

struct StopDistribution {
  Rational w;
  int t_max = 0;
  std::map<int, Rational> stop;                                 // P(stop at t), t = 2..t_max
  Rational overflow;                                            // P(still running after K_{t_max})
  std::map<int, std::map<MatchingType, Rational>> conditional;  // type law given stop at t
  std::size_t states = 0;                                       // distinct canonical states expanded

  std::string csv() const;
};

/// Exact law of the stopping size and of the family type, t_max <= 6.
StopDistribution exact_stop_distribution(const Rational& w, int t_max);

}  // namespace ifp
