#include "regtree/equivalence.hpp"

#include <set>

namespace regtree {

BisimVerdict bisimilar(const TransitionSystem& a, const TransitionSystem& b) {
  const std::size_t na = a.size(), n = a.size() + b.size();
  std::vector<std::vector<std::size_t>> succ(n);
  std::vector<std::vector<std::string>> props(n);
  for (std::size_t u = 0; u < na; ++u) {
    succ[u] = a.successors(u);
    props[u] = a.props[u];
  }
  for (std::size_t u = 0; u < b.size(); ++u) {
    for (auto v : b.successors(u)) succ[na + u].push_back(na + v);
    props[na + u] = b.props[u];
  }
  std::vector<int> col(n);
  {
    std::map<std::vector<std::string>, int> ids;
    for (const auto& p : props) ids.emplace(p, 0);
    int c = 0;
    for (auto& [k, id] : ids) id = c++;
    for (std::size_t u = 0; u < n; ++u) col[u] = ids[props[u]];
  }
  BisimVerdict r;
  const std::size_t ia = a.initial, ib = na + b.initial;
  unsigned round = 0;
  std::size_t classes = 0;
  for (;;) {
    if (col[ia] != col[ib]) {
      r.depth = round;
      r.reason = round == 0 ? "initial valuations differ" : "initial states separated after " + std::to_string(round) + " refinement rounds";
      return r;
    }
    std::map<std::pair<int, std::set<int>>, int> ids;
    std::vector<std::pair<int, std::set<int>>> sig(n);
    for (std::size_t u = 0; u < n; ++u) {
      std::set<int> s;
      for (auto v : succ[u]) s.insert(col[v]);
      sig[u] = {col[u], std::move(s)};
      ids.emplace(sig[u], 0);
    }
    int c = 0;
    for (auto& [k, id] : ids) id = c++;
    for (std::size_t u = 0; u < n; ++u) col[u] = ids[sig[u]];
    ++round;
    if (ids.size() == classes) break;
    classes = ids.size();
  }
  r.bisimilar = true;
  for (std::size_t u = 0; u < na; ++u)
    for (std::size_t v = 0; v < b.size(); ++v)
      if (col[u] == col[na + v]) r.relation.push_back({u, v});
  return r;
}

BisimVerdict bisimilar_systems(const Sys& a, const Sys& b) { return bisimilar(decode_ts(a), decode_ts(b)); }

bool is_bisimulation(const TransitionSystem& a, const TransitionSystem& b,
                     const std::vector<std::pair<std::size_t, std::size_t>>& rel) {
  std::set<std::pair<std::size_t, std::size_t>> r(rel.begin(), rel.end());
  if (!r.count({a.initial, b.initial})) return false;
  for (auto [x, y] : r) {
    if (a.props[x] != b.props[y]) return false;
    for (auto x2 : a.successors(x)) {
      bool ok = false;
      for (auto y2 : b.successors(y)) ok = ok || r.count({x2, y2});
      if (!ok) return false;
    }
    for (auto y2 : b.successors(y)) {
      bool ok = false;
      for (auto x2 : a.successors(x)) ok = ok || r.count({x2, y2});
      if (!ok) return false;
    }
  }
  return true;
}

}  // namespace regtree
