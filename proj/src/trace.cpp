#include "ifp/trace.hpp"

#include "ifp/error.hpp"

#include <charconv>
#include <sstream>

namespace ifp {

std::string_view to_string(Quality q) {
  switch (q) {
    case Quality::Good: return "Good";
    case Quality::BadNotAlmostSimple: return "BadNotAlmostSimple";
    case Quality::BadChi: return "BadChi";
    case Quality::Unclassified: return "Unclassified";
  }
  return "Unclassified";
}

Quality quality_from_string(std::string_view s) {
  if (s == "Good") return Quality::Good;
  if (s == "BadNotAlmostSimple") return Quality::BadNotAlmostSimple;
  if (s == "BadChi") return Quality::BadChi;
  if (s == "Unclassified") return Quality::Unclassified;
  throw Error(ErrorCode::ParseError, "unknown quality label '" + std::string(s) + "'");
}

Hypergraph ProcessTrace::hypergraph(int r) const {
  if (r < 0 || r > this->r()) throw Error(ErrorCode::OutOfRange, "prefix length out of range");
  Hypergraph h(params.n, params.k);
  for (int i = 0; i < r; ++i) h.append(edges[static_cast<std::size_t>(i)]);
  return h;
}

std::string ProcessTrace::str() const {
  std::ostringstream out;
  out << "# n=" << params.n << "\n# k=" << params.k << "\n# seed=" << seed << "\n# mode="
      << (mode == Mode::Early ? "early" : "full") << "\n";
  if (mode == Mode::Early) out << "# b=" << b << "\n";
  for (std::size_t i = 0; i < edges.size(); ++i)
    out << edges[i].str() << ' ' << to_string(i < quality.size() ? quality[i] : Quality::Unclassified) << '\n';
  return out.str();
}

namespace {

std::uint64_t parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw Error(ErrorCode::ParseError, "bad number '" + std::string(s) + "'");
  return v;
}

}  // namespace

ProcessTrace ProcessTrace::parse(std::string_view text) {
  ProcessTrace t;
  int n = -1, k = -1;
  std::istringstream in{std::string(text)};
  std::string line;
  bool params_ready = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(1, eq - 1);
      while (!key.empty() && key.front() == ' ') key.erase(key.begin());
      const std::string val = line.substr(eq + 1);
      if (key == "n") n = static_cast<int>(parse_u64(val));
      else if (key == "k") k = static_cast<int>(parse_u64(val));
      else if (key == "seed") t.seed = parse_u64(val);
      else if (key == "b") t.b = static_cast<int>(parse_u64(val));
      else if (key == "mode") {
        if (val == "early") t.mode = Mode::Early;
        else if (val == "full") t.mode = Mode::Full;
        else throw Error(ErrorCode::ParseError, "unknown mode '" + val + "'");
      }
      continue;
    }
    if (!params_ready) {
      if (n < 0 || k < 0) throw Error(ErrorCode::ParseError, "trace header lacks n or k");
      t.params = ProcessParams(n, k);
      params_ready = true;
    }
    const auto sp = line.find(' ');
    t.edges.push_back(KSet::parse(std::string_view(line).substr(0, sp), n));
    t.quality.push_back(sp == std::string::npos ? Quality::Unclassified
                                                : quality_from_string(std::string_view(line).substr(sp + 1)));
  }
  if (!params_ready) {
    if (n < 0 || k < 0) throw Error(ErrorCode::ParseError, "trace header lacks n or k");
    t.params = ProcessParams(n, k);
  }
  return t;
}

}  // namespace ifp

#include <algorithm>

namespace ifp {

FinalFamily::FinalFamily(int n, int k, std::vector<std::uint64_t> ranks, bool maximal)
    : ranker_(n, k), ranks_(std::move(ranks)), maximal_(maximal) {
  std::sort(ranks_.begin(), ranks_.end());
}

bool FinalFamily::contains(const KSet& e) const { return contains_rank(ranker_.rank(e.vertices())); }

bool FinalFamily::contains_rank(std::uint64_t rank) const {
  return std::binary_search(ranks_.begin(), ranks_.end(), rank);
}

std::vector<KSet> FinalFamily::members() const {
  std::vector<KSet> out;
  out.reserve(ranks_.size());
  for (auto r : ranks_) out.push_back(ranker_.unrank(r));
  return out;
}

}  // namespace ifp
