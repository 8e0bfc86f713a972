#pragma once

// Brute-force references and instance builders shared by the unit tests and
// the acceptance run.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <tuple>
#include <string>
#include <vector>

#include "regtree/automata.hpp"
#include "regtree/algebra.hpp"
#include "regtree/random.hpp"
#include "regtree/resolution.hpp"

namespace oracle {

using namespace regtree;

// Eve wins from v iff some positional Eve strategy leaves Adam no winning
// play: no reachable Eve dead end and no reachable cycle with odd maximum.
inline std::vector<char> brute_winners(const ParityGame& g) {
  const std::size_t n = g.owner.size();
  std::vector<std::size_t> eve;
  for (std::size_t v = 0; v < n; ++v)
    if (g.owner[v] == 0 && !g.moves[v].empty()) eve.push_back(v);
  std::vector<char> wins(n, 1);  // 1 = Adam until an Eve strategy is found
  std::vector<std::size_t> pick(eve.size(), 0);
  for (;;) {
    auto next = [&](std::size_t v) {
      if (g.owner[v] == 0) {
        if (g.moves[v].empty()) return std::vector<std::size_t>{};
        auto i = std::find(eve.begin(), eve.end(), v) - eve.begin();
        return std::vector<std::size_t>{g.moves[v][pick[i]]};
      }
      return g.moves[v];
    };
    for (std::size_t s = 0; s < n; ++s) {
      if (wins[s] == 0) continue;
      std::vector<char> seen(n, 0);
      std::vector<std::size_t> order{s};
      seen[s] = 1;
      bool adam = false;
      for (std::size_t i = 0; i < order.size(); ++i) {
        auto v = order[i];
        if (g.owner[v] == 0 && g.moves[v].empty()) adam = true;
        for (auto w : next(v))
          if (!seen[w]) {
            seen[w] = 1;
            order.push_back(w);
          }
      }
      for (auto x : order) {
        if (adam || g.priority[x] % 2 == 0) continue;
        std::function<bool(std::size_t, std::vector<char>&)> back = [&](std::size_t v, std::vector<char>& vis) {
          for (auto w : next(v)) {
            if (g.priority[w] > g.priority[x]) continue;
            if (w == x) return true;
            if (!vis[w]) {
              vis[w] = 1;
              if (back(w, vis)) return true;
            }
          }
          return false;
        };
        std::vector<char> vis(n, 0);
        if (back(x, vis)) adam = true;
      }
      if (!adam) wins[s] = 0;
    }
    std::size_t i = 0;
    while (i < eve.size() && pick[i] + 1 == g.moves[eve[i]].size()) pick[i++] = 0;
    if (i == eve.size()) break;
    ++pick[i];
  }
  return wins;
}

inline ParityGame random_game(Rng& rng) {
  ParityGame g;
  const std::size_t n = 1 + pick(rng, 8);
  for (std::size_t v = 0; v < n; ++v) g.add(static_cast<char>(pick(rng, 2)), static_cast<unsigned>(pick(rng, 4)));
  for (std::size_t v = 0; v < n; ++v) {
    if (coin(rng, 0.1)) continue;
    std::size_t k = 1 + pick(rng, 3);
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t w = pick(rng, n);
      if (std::find(g.moves[v].begin(), g.moves[v].end(), w) == g.moves[v].end()) g.moves[v].push_back(w);
    }
  }
  return g;
}

// Plain graph search over every edge from the initial vertex.
inline bool reaches_symbol(const Sys& s, const std::string& name) {
  std::vector<char> seen(s.size(), 0);
  std::vector<Vertex> stack{s.initials().at(0)};
  seen[stack[0]] = 1;
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    if (s.labels[v].name == name) return true;
    for (const auto& a : s.out[v])
      if (!a.to.var && !seen[a.to.idx]) {
        seen[a.to.idx] = 1;
        stack.push_back(a.to.idx);
      }
  }
  return false;
}

inline std::vector<Vertex> bfs_reachable(const Sys& s) {
  std::vector<char> seen(s.size(), 0);
  std::vector<Vertex> r = s.initials();
  for (auto v : r) seen[v] = 1;
  for (std::size_t i = 0; i < r.size(); ++i)
    for (const auto& a : s.out[r[i]])
      if (!a.to.var && !seen[a.to.idx]) {
        seen[a.to.idx] = 1;
        r.push_back(a.to.idx);
      }
  return r;
}

inline bool no_b_reachable(const Sys& s) {
  for (auto v : bfs_reachable(s))
    if (s.labels[v].name[0] == 'b' || s.labels[v].name.find("{b}") == 0) return false;
  return true;
}

// Oracle: the depth-d tree of t can be matched from s, by plain recursion.
inline bool matches(const Sys& t, Vertex x, const Sys& s, Vertex y, unsigned depth,
             std::map<std::tuple<Vertex, Vertex, unsigned>, bool>& memo) {
  if (!(t.labels[x] == s.labels[y])) return false;
  if (depth == 0) return true;
  auto key = std::make_tuple(x, y, depth);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  bool ok = true;
  for (const auto& a : t.out[x]) {
    bool any = false;
    for (const auto& b : s.out[y]) {
      if (b.dir != a.dir || b.to.var != a.to.var) continue;
      if (a.to.var ? a.to == b.to : matches(t, a.to.idx, s, b.to.idx, depth - 1, memo)) any = true;
    }
    ok = ok && any;
  }
  return memo[key] = ok;
}

// Depth 0 picks |t|*|s|+1, enough to decide.
inline bool yield_oracle(const Sys& t, const Sys& s, unsigned depth = 0) {
  std::map<std::tuple<Vertex, Vertex, unsigned>, bool> memo;
  if (depth == 0) depth = static_cast<unsigned>(t.size() * s.size() + 1);
  for (Vertex y : s.initials())
    if (matches(t, t.initials()[0], s, y, depth, memo)) return true;
  return false;
}

// Keeps a morphism into the original: copies, then drops edges and initial flags.
inline Sys weaken(Rng& rng, const Sys& s) {
  Sys r = random_unfolding(rng, s, 2);
  for (auto& o : r.out) {
    std::vector<Arc> keep;
    for (const auto& a : o)
      if (coin(rng, 0.8)) keep.push_back(a);
    o = keep;
  }
  for (auto& f : r.initial)
    if (coin(rng, 0.3)) f = 0;
  for (auto& f : r.root)
    if (coin(rng, 0.3)) f = 0;
  return r;
}

// Splits the variables of T(u) into more variables with the same origin, so
// that sigma_u grows while the flatten-resolution stays valid.
inline void inflate(Rng& rng, Nested& t, FlattenWitness& w, Vertex u, unsigned extra) {
  const unsigned m = t.labels[u].rank;
  VarMap pi = identity_map(m);
  for (unsigned i = 0; i < extra; ++i) pi.push_back(1 + static_cast<unsigned>(pick(rng, m)));
  std::vector<std::vector<unsigned>> pre(m + 1);
  for (unsigned i = 1; i <= pi.size(); ++i) pre[pi[i - 1]].push_back(i);
  Sys& in = t.labels[u];
  in.rank = static_cast<unsigned>(pi.size());
  for (auto& o : in.out) {
    for (auto& a : o)
      if (a.to.var) a.to.idx = pre[a.to.idx][pick(rng, pre[a.to.idx].size())];
    std::sort(o.begin(), o.end());
  }
  auto old = t.out[u];
  t.out[u].clear();
  for (unsigned i = 1; i <= pi.size(); ++i)
    for (const auto& a : old)
      if (a.dir == pi[i - 1]) t.add_edge(u, i, a.to);
  w.sigma[u] = compose_maps(w.sigma[u], pi);
}

// Reachability value by graph search: bottom if a letter of R is reachable,
// else the reachable variables. Systems only.
inline ReachValue reach_oracle(const Sys& s, const std::set<std::string>& r) {
  std::vector<char> seen(s.size(), 0);
  std::vector<Vertex> st{s.initials().at(0)};
  seen[st[0]] = 1;
  std::set<unsigned> vars;
  bool bottom = false;
  while (!st.empty()) {
    Vertex v = st.back();
    st.pop_back();
    if (r.count(s.labels[v].name)) bottom = true;
    for (const auto& a : s.out[v]) {
      if (a.to.var) vars.insert(a.to.idx);
      else if (!seen[a.to.idx]) {
        seen[a.to.idx] = 1;
        st.push_back(a.to.idx);
      }
    }
  }
  if (bottom) return ReachValue::bot(s.rank);
  return ReachValue::of(s.rank, {vars.begin(), vars.end()});
}

}  // namespace oracle
