#include "ifp/matchproc.hpp"

#include "ifp/error.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace ifp {

int edge_index(int i, int j) {
  if (i > j) std::swap(i, j);
  if (i < 1 || i == j || j > kMaxMatchingT) throw Error(ErrorCode::OutOfRange, "edge endpoints out of range");
  return (j - 1) * (j - 2) / 2 + (i - 1);
}

std::pair<int, int> edge_endpoints(int index) {
  int j = 2;
  while ((j) * (j - 1) / 2 <= index) ++j;
  return {index - (j - 1) * (j - 2) / 2 + 1, j};
}

Matching make_matching(const std::vector<std::pair<int, int>>& edges) {
  Matching m = 0;
  std::uint32_t used = 0;
  for (auto [i, j] : edges) {
    if ((used >> i & 1) || (used >> j & 1)) throw Error(ErrorCode::InvalidArgument, "edges of a matching must be disjoint");
    used |= 1u << i | 1u << j;
    m |= Matching{1} << edge_index(i, j);
  }
  return m;
}

std::string matching_str(Matching m) {
  std::string s;
  for (Matching x = m; x; x &= x - 1) {
    auto [i, j] = edge_endpoints(std::countr_zero(x));
    if (!s.empty()) s += ',';
    s += std::to_string(i) + std::to_string(j);
  }
  return s;
}

namespace {

void check_t(int t) {
  if (t < 1) throw Error(ErrorCode::OutOfRange, "t must be positive");
  if (t > kMaxMatchingT) throw Error(ErrorCode::TooLarge, "t limited to 10");
}

const std::vector<Matching>& all_matchings(int t) {
  static std::array<std::vector<Matching>, kMaxMatchingT + 1> cache = [] {
    std::array<std::vector<Matching>, kMaxMatchingT + 1> c;
    for (int tt = 1; tt <= kMaxMatchingT; ++tt) {
      auto& out = c[static_cast<std::size_t>(tt)];
      // Pair the lowest free vertex with a later one, or leave it unmatched.
      auto rec = [&](auto&& self, std::uint32_t free, Matching cur) -> void {
        if (free == 0) {
          out.push_back(cur);
          return;
        }
        const int v = std::countr_zero(free);
        const std::uint32_t rest = free & ~(1u << v);
        self(self, rest, cur);
        for (std::uint32_t f = rest; f; f &= f - 1) {
          const int u = std::countr_zero(f);
          self(self, rest & ~(1u << u), cur | Matching{1} << edge_index(v + 1, u + 1));
        }
      };
      rec(rec, (1u << tt) - 1, 0);
      std::sort(out.begin(), out.end());
    }
    return c;
  }();
  return cache[static_cast<std::size_t>(t)];
}

double weight_of(Matching m, double w) { return std::pow(w, std::popcount(m)); }

// Weighted index into `items` (weights w^{|M|}) restricted by `keep`.
template <class Keep>
std::size_t weighted_pick(const MatchingFamily& items, double w, Rng& rng, Keep keep) {
  double total = 0;
  for (auto m : items)
    if (keep(m)) total += weight_of(m, w);
  if (total <= 0) throw Error(ErrorCode::EmptyList, "no matching to draw from");
  double u = rng.uniform01() * total;
  std::size_t last = items.size();
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!keep(items[i])) continue;
    last = i;
    u -= weight_of(items[i], w);
    if (u < 0) return i;
  }
  return last;
}

}  // namespace

MatchingFamily enumerate_matchings(int t, const MatchingFamily& constraint) {
  check_t(t);
  const auto& all = all_matchings(t);
  if (constraint.empty()) return all;
  MatchingFamily out;
  for (auto m : all) {
    bool ok = true;
    for (auto c : constraint)
      if (!(m & c)) {
        ok = false;
        break;
      }
    if (ok) out.push_back(m);
  }
  return out;
}

Matching weighted_sample(const MatchingFamily& matchings, double w, Rng& rng) {
  if (matchings.empty()) throw Error(ErrorCode::EmptyList, "empty matching list");
  if (!(w > 0)) throw Error(ErrorCode::InvalidArgument, "weight must be positive");
  return matchings[weighted_pick(matchings, w, rng, [](Matching) { return true; })];
}

MatchingRun complete_matching_family(int t, Matching seed, double w, Rng& rng) {
  check_t(t);
  if (seed == 0) throw Error(ErrorCode::InvalidArgument, "seed matching must be nonempty");
  MatchingRun run;
  run.t = t;
  run.family = {seed};
  MatchingFamily open = enumerate_matchings(t, {seed});
  // Maximal exactly when every matching meeting all members is a member.
  while (open.size() != run.family.size()) {
    const Matching m = weighted_sample(open, w, rng);
    ++run.draws;
    if (std::binary_search(run.family.begin(), run.family.end(), m)) continue;
    run.family.insert(std::lower_bound(run.family.begin(), run.family.end(), m), m);
    std::erase_if(open, [m](Matching x) { return !(x & m); });
  }
  return run;
}

MatchingRun run_matching_procedure(double w, Rng& rng, int t_cap) {
  if (!(w > 0)) throw Error(ErrorCode::InvalidArgument, "weight must be positive");
  if (t_cap < 1 || t_cap > kMaxMatchingT) throw Error(ErrorCode::TooLarge, "t_cap must lie in [1, 10]");
  int t = 1;
  std::uint64_t draws = 0;
  while (true) {
    const Matching m = weighted_sample(all_matchings(t), w, rng);
    ++draws;
    if (m == 0) {
      if (++t > t_cap) throw Error(ErrorCode::TCapExceeded, "procedure still growing at t_cap");
      continue;
    }
    auto run = complete_matching_family(t, m, w, rng);
    run.draws += draws;
    return run;
  }
}

MatchingRun run_matching_from(int t, double w, Rng& rng) {
  check_t(t);
  if (t < 2) throw Error(ErrorCode::OutOfRange, "K_1 has no nonempty matching");
  if (!(w > 0)) throw Error(ErrorCode::InvalidArgument, "weight must be positive");
  const auto& all = all_matchings(t);
  const Matching seed = all[weighted_pick(all, w, rng, [](Matching m) { return m != 0; })];
  auto run = complete_matching_family(t, seed, w, rng);
  run.draws += 1;
  return run;
}

std::string_view to_string(MatchingType t) {
  switch (t) {
    case MatchingType::Star: return "Star";
    case MatchingType::TwoOfThreePM: return "TwoOfThreePM";
    case MatchingType::Other: return "Other";
  }
  return "Other";
}

bool is_maximal_intersecting(const MatchingFamily& fam, int t) {
  if (fam.empty()) return false;
  for (std::size_t i = 0; i < fam.size(); ++i)
    for (std::size_t j = i; j < fam.size(); ++j)
      if (!(fam[i] & fam[j])) return false;
  auto sorted = fam;
  std::sort(sorted.begin(), sorted.end());
  return enumerate_matchings(t, fam) == sorted;
}

namespace {

MatchingClass classify_sorted(const MatchingFamily& fam) {
  MatchingClass mc;
  Matching common = ~Matching{0};
  for (auto m : fam) common &= m;
  if (std::popcount(common) == 1) {
    mc.type = MatchingType::Star;
    mc.star_edge = common;
    return mc;
  }
  // Two of three edges of P: the two-edge members are exactly the pairs from P.
  std::vector<Matching> pairs;
  for (auto m : fam)
    if (std::popcount(m) == 2) pairs.push_back(m);
  if (pairs.size() == 3) {
    const Matching p = pairs[0] | pairs[1] | pairs[2];
    if (std::popcount(p) == 3) {
      bool ok = true;
      for (auto m : fam) ok = ok && std::popcount(m & p) >= 2;
      if (ok) {
        mc.type = MatchingType::TwoOfThreePM;
        mc.perfect = p;
        return mc;
      }
    }
  }
  mc.type = MatchingType::Other;
  return mc;
}

}  // namespace

MatchingClass classify_matching_family(const MatchingFamily& fam, int t) {
  check_t(t);
  if (!is_maximal_intersecting(fam, t)) throw Error(ErrorCode::NotMaximal, "family is not maximal intersecting");
  // On a maximal family the membership conditions follow from the patterns found.
  return classify_sorted(fam);
}

namespace {

using State = unsigned __int128;  // subset of the matchings of K_t (t <= 6: 76 matchings)

struct StateHash {
  std::size_t operator()(State s) const noexcept {
    const auto lo = static_cast<std::uint64_t>(s);
    const auto hi = static_cast<std::uint64_t>(s >> 64);
    return std::hash<std::uint64_t>()(lo * 0x9E3779B97F4A7C15ULL ^ (hi + 0x632BE59BD9B4E019ULL));
  }
};

using TypeLaw = std::map<MatchingType, Rational>;

class StopDp {
 public:
  StopDp(int t, const Rational& w) : t_(t), w_(w), ms_(all_matchings(t)) {
    const std::size_t m = ms_.size();
    meets_.assign(m, 0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (ms_[i] & ms_[j]) meets_[i] |= State{1} << j;
    weight_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      Rational x = 1;
      for (int e = 0; e < std::popcount(ms_[i]); ++e) x *= w_;
      weight_[i] = x;
    }
    // Relabelings of [t] acting on matching indices.
    std::vector<int> perm(static_cast<std::size_t>(t));
    std::iota(perm.begin(), perm.end(), 1);
    std::unordered_map<Matching, std::size_t> index;
    for (std::size_t i = 0; i < m; ++i) index[ms_[i]] = i;
    do {
      std::vector<std::uint8_t> map(m);
      for (std::size_t i = 0; i < m; ++i) {
        Matching img = 0;
        for (Matching x = ms_[i]; x; x &= x - 1) {
          auto [a, b] = edge_endpoints(std::countr_zero(x));
          img |= Matching{1} << edge_index(perm[static_cast<std::size_t>(a - 1)], perm[static_cast<std::size_t>(b - 1)]);
        }
        map[i] = static_cast<std::uint8_t>(index.at(img));
      }
      perms_.push_back(std::move(map));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  // Family-type law for a seed matching (index into the matchings of K_t).
  const TypeLaw& from_seed(std::size_t seed) { return value(meets_[seed]); }

  const std::vector<Matching>& matchings() const { return ms_; }
  const Rational& weight(std::size_t i) const { return weight_[i]; }
  std::size_t states() const { return canon_memo_.size(); }

 private:
  // The future depends only on the open set N: members of the family never
  // change N, and drawing them is a self-loop.
  const TypeLaw& value(State open) {
    if (auto it = raw_memo_.find(open); it != raw_memo_.end()) return *it->second;
    const State canon = canonical(open);
    auto cit = canon_memo_.find(canon);
    if (cit == canon_memo_.end()) cit = canon_memo_.emplace(canon, std::make_unique<TypeLaw>(expand(open))).first;
    raw_memo_.emplace(open, cit->second.get());
    return *cit->second;
  }

  TypeLaw expand(State open) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < ms_.size(); ++i)
      if (open >> i & 1) members.push_back(i);
    bool intersecting = true;
    for (auto i : members)
      if ((meets_[i] & open) != open) {
        intersecting = false;
        break;
      }
    TypeLaw law;
    if (intersecting) {
      MatchingFamily fam;
      for (auto i : members) fam.push_back(ms_[i]);
      law[classify_sorted(fam).type] = 1;
      return law;
    }
    Rational total = 0;
    for (auto i : members) {
      const State next = open & meets_[i];
      if (next == open) continue;
      total += weight_[i];
      for (const auto& [type, p] : value(next)) law[type] += weight_[i] * p;
    }
    for (auto& [type, p] : law) p /= total;
    return law;
  }

  State canonical(State s) const {
    State best = s;
    for (const auto& map : perms_) {
      State img = 0;
      for (State x = s; x; x &= x - 1) {
        const auto lo = static_cast<std::uint64_t>(x);
        const int bit = lo ? std::countr_zero(lo) : 64 + std::countr_zero(static_cast<std::uint64_t>(x >> 64));
        img |= State{1} << map[static_cast<std::size_t>(bit)];
      }
      best = std::min(best, img);
    }
    return best;
  }

  int t_;
  Rational w_;
  const std::vector<Matching>& ms_;
  std::vector<State> meets_;
  std::vector<Rational> weight_;
  std::vector<std::vector<std::uint8_t>> perms_;
  std::unordered_map<State, std::unique_ptr<TypeLaw>, StateHash> canon_memo_;
  std::unordered_map<State, const TypeLaw*, StateHash> raw_memo_;
};

}  // namespace

StopDistribution exact_stop_distribution(const Rational& w, int t_max) {
  if (w <= 0) throw Error(ErrorCode::InvalidArgument, "weight must be positive");
  if (t_max < 1) throw Error(ErrorCode::OutOfRange, "t_max must be positive");
  if (t_max > 6) throw Error(ErrorCode::TooLarge, "exact expansion limited to t_max <= 6");
  StopDistribution d;
  d.w = w;
  d.t_max = t_max;
  Rational reach = 1;  // P(first loop reaches K_t)
  for (int t = 1; t <= t_max; ++t) {
    StopDp dp(t, w);
    Rational total = 0;
    for (std::size_t i = 0; i < dp.matchings().size(); ++i) total += dp.weight(i);
    const Rational p_empty = 1 / total;  // the empty matching has weight 1
    if (t >= 2) {
      d.stop[t] = reach * (1 - p_empty);
      TypeLaw law;
      for (std::size_t i = 0; i < dp.matchings().size(); ++i) {
        if (dp.matchings()[i] == 0) continue;
        for (const auto& [type, p] : dp.from_seed(i)) law[type] += dp.weight(i) * p;
      }
      for (auto& [type, p] : law) p /= total - 1;
      d.conditional[t] = std::move(law);
      d.states += dp.states();
    }
    reach *= p_empty;
  }
  d.overflow = reach;
  return d;
}

std::string StopDistribution::csv() const {
  std::ostringstream out;
  out << "# ifplab matching-exact v1\nt,p_stop,p_star,p_two_of_three,p_other\n";
  for (const auto& [t, p] : stop) {
    const auto& law = conditional.at(t);
    auto get = [&](MatchingType ty) {
      auto it = law.find(ty);
      return it == law.end() ? Rational(0) : it->second;
    };
    out << t << ',' << p << ',' << get(MatchingType::Star) << ',' << get(MatchingType::TwoOfThreePM) << ','
        << get(MatchingType::Other) << '\n';
  }
  return out.str();
}

}  // namespace ifp
