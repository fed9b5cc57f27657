#include "ifp/structure.hpp"

#include "ifp/bits.hpp"
#include "ifp/counting.hpp"
#include "ifp/error.hpp"

#include <algorithm>
#include <numeric>

namespace ifp {

namespace {

// Edge-incidence masks of the vertices in W, ordered by degree (descending).
struct WMasks {
  std::vector<Vertex> vertex;
  std::vector<Bits> mask;
  int r = 0;
};

WMasks build_masks(const Hypergraph& h, const std::vector<Vertex>& W) {
  WMasks m;
  m.r = h.r();
  std::vector<Bits> raw(W.size(), Bits(static_cast<std::size_t>(h.r())));
  for (int i = 0; i < h.r(); ++i)
    for (Vertex v : h[static_cast<std::size_t>(i)]) {
      auto it = std::lower_bound(W.begin(), W.end(), v);
      if (it != W.end() && *it == v) raw[static_cast<std::size_t>(it - W.begin())].set(static_cast<std::size_t>(i));
    }
  std::vector<std::size_t> order(W.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return raw[a].count() > raw[b].count(); });
  for (auto i : order) {
    m.vertex.push_back(W[i]);
    m.mask.push_back(raw[i]);
  }
  return m;
}

// Largest possible gain from adding any subset of the candidates with the given
// marginal covers: max over t of min(sum of top-t covers, uncovered) - 2t.
int gain_bound(std::vector<int>& covers, int uncovered) {
  std::sort(covers.begin(), covers.end(), std::greater<>());
  int best = 0;
  int prefix = 0;
  for (std::size_t t = 0; t < covers.size(); ++t) {
    prefix += covers[t];
    best = std::max(best, std::min(prefix, uncovered) - 2 * static_cast<int>(t + 1));
  }
  return best;
}

class ChiSearch {
 public:
  ChiSearch(const WMasks& m, std::uint64_t budget) : m_(m), budget_(budget) {}

  // Maximum of chi; stops early once a value above `stop_above` is found.
  void maximize(int stop_above) {
    stop_above_ = stop_above;
    Bits cov(static_cast<std::size_t>(m_.r));
    best_ = 0;
    dfs(0, cov, 0);
  }

  // Every subset attaining `target`.
  void enumerate(int target, SetFamily& out) {
    target_ = target;
    out_ = &out;
    chosen_.clear();
    Bits cov(static_cast<std::size_t>(m_.r));
    collect(0, cov, 0);
  }

  int best() const { return best_; }
  bool aborted() const { return aborted_; }

 private:
  void dfs(std::size_t start, const Bits& cov, int cur) {
    if (++nodes_ > budget_) {
      aborted_ = true;
      return;
    }
    best_ = std::max(best_, cur);
    if (best_ > stop_above_) return;
    const int uncovered = m_.r - cov.count();
    std::vector<std::pair<std::size_t, int>> cand;
    std::vector<int> covers;
    for (std::size_t j = start; j < m_.mask.size(); ++j) {
      const int g = m_.mask[j].count_minus(cov);
      // A vertex adding at most two new edges never raises chi.
      if (g > 2) {
        cand.emplace_back(j, g);
        covers.push_back(g);
      }
    }
    if (cur + gain_bound(covers, uncovered) <= best_) return;
    for (auto [j, g] : cand) {
      Bits next = cov;
      next |= m_.mask[j];
      dfs(j + 1, next, cur + g - 2);
      if (aborted_ || best_ > stop_above_) return;
    }
  }

  void collect(std::size_t start, const Bits& cov, int cur) {
    if (cur == target_) {
      VertexSet s;
      for (auto j : chosen_) s.push_back(m_.vertex[j]);
      std::sort(s.begin(), s.end());
      out_->push_back(std::move(s));
    }
    const int uncovered = m_.r - cov.count();
    std::vector<std::pair<std::size_t, int>> cand;
    std::vector<int> covers;
    for (std::size_t j = start; j < m_.mask.size(); ++j) {
      const int g = m_.mask[j].count_minus(cov);
      // Each member of a maximizer covers at least two edges no other member covers.
      if (g >= 2) {
        cand.emplace_back(j, g);
        covers.push_back(g);
      }
    }
    if (cand.empty() || cur + gain_bound(covers, uncovered) < target_) return;
    for (auto [j, g] : cand) {
      Bits next = cov;
      next |= m_.mask[j];
      chosen_.push_back(j);
      collect(j + 1, next, cur + g - 2);
      chosen_.pop_back();
    }
  }

  const WMasks& m_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
  int best_ = 0;
  int stop_above_ = 0;
  int target_ = 0;
  SetFamily* out_ = nullptr;
  std::vector<std::size_t> chosen_;
};

int edges_meeting(const Hypergraph& h, const VertexSet& s) {
  int e = 0;
  for (const auto& edge : h.edges())
    if (sorted_intersects(edge.vertices(), s)) ++e;
  return e;
}

constexpr std::size_t kIndependentCap = 2'000'000;

}  // namespace

int chi(const Hypergraph& h, const VertexSet& S) {
  const auto deg = DegreeIndex::build(h);
  VertexSet s = S;
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  for (Vertex v : s)
    if (v < 1 || v > h.n() || deg.deg(v) < 2)
      throw Error(ErrorCode::SContainsLowDegreeVertex, "vertex " + std::to_string(v) + " has degree below two");
  return edges_meeting(h, s) - 2 * static_cast<int>(s.size());
}

ChiResult chi_star_and_Sr(const Hypergraph& h) {
  const auto deg = DegreeIndex::build(h);
  if (deg.W.size() > 40) throw Error(ErrorCode::TooManyHighDegreeVertices, "more than 40 vertices of degree >= 2");
  const auto masks = build_masks(h, deg.W);
  ChiSearch search(masks, UINT64_MAX);
  search.maximize(INT32_MAX);
  ChiResult res;
  res.chi_star = search.best();
  ChiSearch all(masks, UINT64_MAX);
  all.enumerate(res.chi_star, res.S_r);
  std::sort(res.S_r.begin(), res.S_r.end());
  return res;
}

std::optional<int> chi_star(const Hypergraph& h, const DegreeIndex& deg, std::uint64_t node_budget) {
  const auto masks = build_masks(h, deg.W);
  ChiSearch search(masks, node_budget);
  search.maximize(INT32_MAX);
  if (search.aborted()) return std::nullopt;
  return search.best();
}

Quality extension_quality(const Hypergraph& h, const DegreeIndex& deg, const KSet& e_new,
                          std::optional<int> known_chi_star, std::uint64_t node_budget) {
  for (const auto& f : h.edges())
    if (!sorted_intersects(f.vertices(), e_new.vertices()))
      throw Error(ErrorCode::NotAnExtension, "new edge misses " + f.str());
  std::vector<Vertex> common;
  for (const auto& f : h.edges()) {
    common.clear();
    std::set_intersection(f.begin(), f.end(), e_new.begin(), e_new.end(), std::back_inserter(common));
    if (common.size() < 2) continue;
    for (Vertex x : common)
      if (deg.deg(x) < 2) return Quality::BadNotAlmostSimple;
  }
  VertexSet s;
  for (Vertex v : e_new)
    if (deg.deg(v) >= 2) s.push_back(v);
  const int value = edges_meeting(h, s) - 2 * static_cast<int>(s.size());
  if (known_chi_star) return value >= *known_chi_star ? Quality::Good : Quality::BadChi;
  // Only need to know whether some subset beats the trace.
  const auto masks = build_masks(h, deg.W);
  ChiSearch search(masks, node_budget);
  search.maximize(value);
  if (search.best() > value) return Quality::BadChi;
  if (search.aborted()) return Quality::Unclassified;
  return Quality::Good;
}

Quality extension_quality(const Hypergraph& h, const KSet& e_new) {
  return extension_quality(h, DegreeIndex::build(h), e_new, std::nullopt, UINT64_MAX);
}

bool pairwise_intersecting(const SetFamily& fam) {
  for (std::size_t i = 0; i < fam.size(); ++i)
    for (std::size_t j = i + 1; j < fam.size(); ++j)
      if (!sorted_intersects(fam[i], fam[j])) return false;
  return true;
}

StructureState hitting_times(const ProcessTrace& trace) {
  return hitting_times(trace.edges, trace.params.n, trace.params.k);
}

StructureState hitting_times(const std::vector<KSet>& edges, int n, int k) {
  StructureState st;
  st.base = Hypergraph(n, k);
  DegreeIndex deg = DegreeIndex::build(Hypergraph(n, k));
  Hypergraph h(n, k);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const int r = static_cast<int>(i) + 1;
    const KSet& e = edges[i];
    if (!st.r0) {
      DegreeIndex next = deg;
      next.append(e);
      if (next.maxdeg >= 3) {
        st.r0 = r;
        st.base = h;
        for (Vertex v : deg.W)
          if (deg.deg(v) == 2) st.J.push_back(v);
        // Independent subsets of J meeting E_{r0}; J vertices have disjoint
        // edge masks exactly when no base edge holds two of them.
        std::vector<Bits> mask(st.J.size(), Bits(static_cast<std::size_t>(std::max(h.r(), 1))));
        for (int j = 0; j < h.r(); ++j)
          for (std::size_t a = 0; a < st.J.size(); ++a)
            if (h[static_cast<std::size_t>(j)].contains(st.J[a])) mask[a].set(static_cast<std::size_t>(j));
        VertexSet chosen;
        Bits used(static_cast<std::size_t>(std::max(h.r(), 1)));
        auto rec = [&](auto&& self, std::size_t start, const Bits& u) -> void {
          if (st.overflow) return;
          for (std::size_t a = start; a < st.J.size(); ++a) {
            if (mask[a].intersects(u)) continue;
            chosen.push_back(st.J[a]);
            if (sorted_intersects(chosen, e.vertices())) {
              st.S_r.push_back(chosen);
              if (st.S_r.size() > kIndependentCap) {
                st.overflow = true;
                return;
              }
            }
            Bits nu = u;
            nu |= mask[a];
            self(self, a + 1, nu);
            chosen.pop_back();
            if (st.overflow) return;
          }
        };
        rec(rec, 0, used);
        std::sort(st.S_r.begin(), st.S_r.end());
      }
      deg = std::move(next);
    } else {
      deg.append(e);
      std::erase_if(st.S_r, [&](const VertexSet& s) { return !sorted_intersects(s, e.vertices()); });
    }
    h.append(e);
    st.steps = r;
    if (st.r0) {
      st.S_sizes.push_back(st.S_r.size());
      if (!st.r1 && !st.overflow && !st.S_r.empty() && pairwise_intersecting(st.S_r)) {
        st.r1 = r;
        st.S_stable = st.S_r;
        st.chi_star = chi_star(h, deg);
      }
    }
  }
  if (!st.r1 && st.steps > 0) st.chi_star = chi_star(h, deg);
  return st;
}

namespace {

bool meets_all(const KSet& e, const Hypergraph& base) {
  for (const auto& f : base.edges())
    if (!sorted_intersects(f.vertices(), e.vertices())) return false;
  return true;
}

}  // namespace

bool FamilyBounds::in_lower(const KSet& e) const {
  if (base.contains(e)) return true;
  if (!meets_all(e, base)) return false;
  for (const auto& s : S_stable)
    if (std::includes(e.begin(), e.end(), s.begin(), s.end())) return true;
  return false;
}

bool FamilyBounds::in_upper(const KSet& e) const {
  if (base.contains(e)) return true;
  if (!meets_all(e, base)) return false;
  for (const auto& s : S_stable)
    if (!sorted_intersects(e.vertices(), s)) return false;
  return true;
}

FamilyBounds build_bounds(const StructureState& state, const Hypergraph& base, std::uint64_t exact_limit) {
  if (!state.complete()) throw Error(ErrorCode::IncompleteState, "r0 and r1 must both be known");
  FamilyBounds b;
  b.base = base;
  b.S_stable = state.S_stable;
  const int n = base.n();
  const int k = base.k();
  std::vector<int> sizes;
  for (const auto& s : b.S_stable) sizes.push_back(static_cast<int>(s.size()));
  if (2 * k <= n && k >= 1) b.lower_density = family_size_asymptotic(ProcessParams(n, k), *state.r0, sizes);
  if (binom(n, k) <= exact_limit) {
    std::uint64_t lo = 0, hi = 0;
    for_each_colex(n, k, [&](const std::vector<Vertex>& v, std::uint64_t) {
      const KSet e = KSet::make(v, n);
      lo += b.in_lower(e);
      hi += b.in_upper(e);
    });
    b.lower_size = BigInt(lo);
    b.upper_size = BigInt(hi);
  }
  return b;
}

FamilyBounds build_bounds(const StructureState& state, std::uint64_t exact_limit) {
  return build_bounds(state, state.base, exact_limit);
}

std::string_view to_string(FamilyTag t) {
  switch (t) {
    case FamilyTag::Trivial: return "Trivial";
    case FamilyTag::HiltonMilner: return "HiltonMilner";
    case FamilyTag::JuntaOther: return "JuntaOther";
  }
  return "JuntaOther";
}

bool FamilyClass::in_junta(const KSet& e) const {
  for (const auto& s : generator)
    if (std::includes(e.begin(), e.end(), s.begin(), s.end())) return true;
  return false;
}

BigInt count_containing_some(const SetFamily& fam, int n, int k) {
  if (fam.empty()) return 0;
  if (fam.size() <= 20) {
    BigInt total = 0;
    const std::uint32_t full = 1u << fam.size();
    for (std::uint32_t mask = 1; mask < full; ++mask) {
      VertexSet u;
      for (std::size_t i = 0; i < fam.size(); ++i)
        if (mask >> i & 1) {
          VertexSet merged;
          std::set_union(u.begin(), u.end(), fam[i].begin(), fam[i].end(), std::back_inserter(merged));
          u = std::move(merged);
        }
      const int sz = static_cast<int>(u.size());
      const BigInt term = binom(n - sz, k - sz);
      if (std::popcount(mask) % 2) total += term;
      else total -= term;
    }
    return total;
  }
  if (binom(n, k) > 100'000'000) throw Error(ErrorCode::TooLarge, "junta too large to count");
  std::uint64_t count = 0;
  for_each_colex(n, k, [&](const std::vector<Vertex>& v, std::uint64_t) {
    for (const auto& s : fam)
      if (std::includes(v.begin(), v.end(), s.begin(), s.end())) {
        ++count;
        return;
      }
  });
  return count;
}

FamilyClass classify(const StructureState& state, const FinalFamily* final_family) {
  if (!state.complete()) throw Error(ErrorCode::IncompleteState, "r0 and r1 must both be known");
  if (state.S_stable.empty()) throw Error(ErrorCode::EmptyStableFamily, "stable family is empty");
  FamilyClass fc;
  const auto& S = state.S_stable;
  const bool single = S.size() == 1 && S[0].size() == 1;
  if (single && *state.r0 == 3) {
    fc.tag = FamilyTag::Trivial;
    fc.center = S[0][0];
  } else if (single && *state.r0 == 4) {
    fc.tag = FamilyTag::HiltonMilner;
    fc.center = S[0][0];
    for (const auto& f : state.base.edges())
      if (!f.contains(fc.center)) fc.edge = f;
  } else {
    fc.tag = FamilyTag::JuntaOther;
  }
  for (const auto& s : S) fc.ground.insert(fc.ground.end(), s.begin(), s.end());
  std::sort(fc.ground.begin(), fc.ground.end());
  fc.ground.erase(std::unique(fc.ground.begin(), fc.ground.end()), fc.ground.end());
  // Minimal members generate the same upward closure.
  for (const auto& s : S) {
    bool minimal = true;
    for (const auto& t : S)
      if (t.size() < s.size() && std::includes(s.begin(), s.end(), t.begin(), t.end())) {
        minimal = false;
        break;
      }
    if (minimal) fc.generator.push_back(s);
  }
  if (final_family) {
    auto& ev = fc.evidence;
    ev.checked = true;
    ev.final_size = final_family->size();
    std::vector<Vertex> v;
    for (auto rank : final_family->ranks()) {
      final_family->ranker().unrank(rank, v);
      bool in = false;
      for (const auto& s : fc.generator)
        if (std::includes(v.begin(), v.end(), s.begin(), s.end())) {
          in = true;
          break;
        }
      if (!in) ++ev.outside;
    }
    ev.outside_fraction = ev.final_size ? static_cast<double>(ev.outside) / static_cast<double>(ev.final_size) : 0.0;
    ev.junta_size = count_containing_some(fc.generator, final_family->n(), final_family->k());
    ev.exact_match = ev.outside == 0 && ev.junta_size == ev.final_size;
  }
  return fc;
}

ContainmentReport verify_containment(const FamilyBounds& bounds, const FinalFamily& final_family) {
  ContainmentReport rep;
  const auto& ranks = final_family.ranks();
  std::size_t p = 0;
  const int n = final_family.n();
  for_each_colex(n, final_family.k(), [&](const std::vector<Vertex>& v, std::uint64_t rank) {
    while (p < ranks.size() && ranks[p] < rank) ++p;
    const bool in_f = p < ranks.size() && ranks[p] == rank;
    const KSet e = KSet::make(v, n);
    const bool lo = bounds.in_lower(e);
    const bool hi = bounds.in_upper(e);
    rep.lower_size += lo;
    rep.upper_size += hi;
    if (lo && !in_f) ++rep.deficit;
    if (in_f && !hi) ++rep.excess;
  });
  rep.lower_ok = rep.deficit == 0;
  rep.upper_ok = rep.excess == 0;
  return rep;
}

}  // namespace ifp
