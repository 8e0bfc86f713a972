#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "regtree/iso.hpp"
#include "regtree/morphism.hpp"
#include "regtree/set_system.hpp"
#include "regtree/transition_system.hpp"
#include "regtree/validate.hpp"

namespace regtree {

template <class L>
struct UnfoldVerdict {
  bool equivalent = false;
  // positive: the common unfolding and its two projections (both morphisms)
  SetSystem<L> common;
  VertexMap left, right;
  // negative: directions from the initial vertices to the first mismatch
  std::vector<unsigned> path;
  std::string reason;
};

namespace detail {
template <class L>
Vertex single_initial(const SetSystem<L>& t) {
  auto ini = t.initials();
  if (ini.size() != 1) throw std::invalid_argument("expected a system with one initial vertex");
  return ini[0];
}

template <class L>
Target only_succ(const SetSystem<L>& t, Vertex v, unsigned d) {
  for (const auto& a : t.out[v])
    if (a.dir == d) return a.to;
  throw std::invalid_argument("expected a system: vertex " + t.id(v) + " has no edge in direction " + std::to_string(d));
}
}  // namespace detail

// Exact decision for systems: the synchronous product from the initial pair is
// the largest candidate relation; any mismatch in it refutes equivalence.
template <class L>
UnfoldVerdict<L> unfold_equivalent(const SetSystem<L>& a, const SetSystem<L>& b) {
  if (a.rank != b.rank) throw std::invalid_argument("unfold_equivalent: rank mismatch");
  if (!is_system(a) || !is_system(b)) throw std::invalid_argument("unfold_equivalent: inputs must be systems");
  UnfoldVerdict<L> r;
  std::map<std::pair<Vertex, Vertex>, Vertex> idx;
  std::vector<std::pair<Vertex, Vertex>> pairs;
  std::vector<std::pair<long, unsigned>> parent;
  auto add = [&](Vertex x, Vertex y, long par, unsigned d) {
    auto [it, fresh] = idx.try_emplace({x, y}, static_cast<Vertex>(pairs.size()));
    if (fresh) {
      pairs.push_back({x, y});
      parent.push_back({par, d});
    }
    return it->second;
  };
  auto path_to = [&](long p) {
    std::vector<unsigned> ds;
    while (p >= 0 && parent[p].first >= 0) {
      ds.push_back(parent[p].second);
      p = parent[p].first;
    }
    return std::vector<unsigned>(ds.rbegin(), ds.rend());
  };
  add(detail::single_initial(a), detail::single_initial(b), -1, 0);
  std::vector<std::vector<std::pair<unsigned, Target>>> edges;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [x, y] = pairs[i];
    edges.emplace_back();
    if (!(a.labels[x] == b.labels[y])) {
      r.path = path_to(static_cast<long>(i));
      r.reason = "labels differ: " + label_name(a.labels[x]) + " vs " + label_name(b.labels[y]);
      return r;
    }
    for (unsigned d = 1; d <= label_rank(a.labels[x]); ++d) {
      Target s = detail::only_succ(a, x, d), t = detail::only_succ(b, y, d);
      if (s.var || t.var) {
        if (s != t) {
          r.path = path_to(static_cast<long>(i));
          r.path.push_back(d);
          r.reason = s.var && t.var ? "different variables" : "variable against vertex";
          return r;
        }
        edges[i].push_back({d, s});
      } else {
        Vertex j = add(s.idx, t.idx, static_cast<long>(i), d);
        edges[i].push_back({d, Target::vertex(j)});
      }
    }
  }
  r.equivalent = true;
  r.common.rank = a.rank;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    r.common.add_vertex(a.labels[pairs[i].first], i == 0, false, "(" + a.id(pairs[i].first) + "," + b.id(pairs[i].second) + ")");
    r.left.push_back(pairs[i].first);
    r.right.push_back(pairs[i].second);
  }
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (auto [d, t] : edges[i]) r.common.add_edge(i, d, t);
  return r;
}

// Canonical string of the regular tree of a system: minimise the reachable
// part, then number vertices breadth-first from the initial vertex.
template <class L>
std::string unfold_key(const SetSystem<L>& t) {
  auto s = restrict_to(t, reachable(t, false));
  Vertex i0 = detail::single_initial(s);
  const std::size_t n = s.size();
  std::vector<std::string> keys;
  for (const auto& l : s.labels) keys.push_back(label_key(l));
  std::vector<int> col(n);
  {
    std::map<std::string, int> ids;
    for (const auto& k : keys) ids.emplace(k, 0);
    int c = 0;
    for (auto& [k, id] : ids) id = c++;
    for (Vertex v = 0; v < n; ++v) col[v] = ids[keys[v]];
  }
  std::size_t classes = 0;
  for (;;) {
    std::map<std::vector<long>, int> ids;
    std::vector<std::vector<long>> sig(n);
    for (Vertex v = 0; v < n; ++v) {
      sig[v].push_back(col[v]);
      for (unsigned d = 1; d <= s.vertex_rank(v); ++d) {
        Target x = detail::only_succ(s, v, d);
        sig[v].push_back(x.var ? -static_cast<long>(x.idx) : col[x.idx]);
      }
      ids.emplace(sig[v], 0);
    }
    int c = 0;
    for (auto& [k, id] : ids) id = c++;
    for (Vertex v = 0; v < n; ++v) col[v] = ids[sig[v]];
    if (ids.size() == classes) break;
    classes = ids.size();
  }
  // BFS over classes
  std::vector<Vertex> rep(classes);
  for (Vertex v = 0; v < n; ++v) rep[col[v]] = v;
  std::map<int, int> number;
  std::vector<int> order{col[i0]};
  number[col[i0]] = 0;
  std::string out = "r" + std::to_string(s.rank) + ";";
  for (std::size_t i = 0; i < order.size(); ++i) {
    Vertex v = rep[order[i]];
    out += keys[v] + "(";
    for (unsigned d = 1; d <= s.vertex_rank(v); ++d) {
      Target x = detail::only_succ(s, v, d);
      if (x.var) {
        out += "x" + std::to_string(x.idx);
      } else {
        auto [it, fresh] = number.try_emplace(col[x.idx], static_cast<int>(order.size()));
        if (fresh) order.push_back(col[x.idx]);
        out += "#" + std::to_string(it->second);
      }
      out += d < s.vertex_rank(v) ? "," : "";
    }
    out += ");";
  }
  return out;
}

struct BisimVerdict {
  bool bisimilar = false;
  std::vector<std::pair<std::size_t, std::size_t>> relation;  // positive witness
  unsigned depth = 0;  // negative: refinement round that separated the initial states
  std::string reason;
};

BisimVerdict bisimilar(const TransitionSystem& a, const TransitionSystem& b);
BisimVerdict bisimilar_systems(const Sys& a, const Sys& b);

// The three clauses of bisimilarity checked on an explicit relation.
bool is_bisimulation(const TransitionSystem& a, const TransitionSystem& b,
                     const std::vector<std::pair<std::size_t, std::size_t>>& rel);

}  // namespace regtree
