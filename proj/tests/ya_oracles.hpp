#pragma once

// Brute-force references for the branch semantics of yield-algebra
// presentations, and generators of small graphs and delta instances.

#include <functional>
#include <vector>

#include "regtree/random.hpp"
#include "regtree/yield_algebra.hpp"

namespace oracle {

using namespace regtree;

// Walks every path from the initial vertices, each vertex at most `repeat`
// times on a path. A path ending in a terminal is a finite branch; closing a
// cycle gives the lasso prefix.(cycle)^omega. Exact on graphs with at most one
// cycle once repeat exceeds |Y1| + 1.
inline bool brute_branches(const Presentation& p, const YSys& g) {
  const unsigned repeat = static_cast<unsigned>(p.y1.size()) + 2;
  std::vector<Vertex> path;
  std::vector<unsigned> visits(g.size(), 0);
  bool ok = true;
  std::function<void(Vertex)> walk = [&](Vertex v) {
    if (!ok) return;
    for (std::size_t i = 0; i < path.size(); ++i)
      if (path[i] == v) {
        std::vector<int> u, loop;
        for (std::size_t j = 0; j < i; ++j) u.push_back(g.labels[path[j]].tuples[0][0]);
        for (std::size_t j = i; j < path.size(); ++j) loop.push_back(g.labels[path[j]].tuples[0][0]);
        if (!p.accept[eval_lasso(p, u, loop)]) ok = false;
        break;
      }
    if (!ok || visits[v] >= repeat) return;
    const auto& l = g.labels[v];
    if (l.rank == 0) {
      std::vector<int> w;
      for (Vertex x : path) w.push_back(g.labels[x].tuples[0][0]);
      if (!p.accept[eval_word(p, w, l.values0[0])]) ok = false;
      return;
    }
    path.push_back(v);
    ++visits[v];
    for (const auto& a : g.out[v]) walk(a.to.idx);
    --visits[v];
    path.pop_back();
  };
  for (Vertex v = 0; v < g.size(); ++v)
    if (g.initial[v]) walk(v);
  return ok;
}

// Forward edges only (i -> j, i < j), vertex 0 initial, every other vertex
// with a predecessor: each acyclic graph with one initial vertex reaching
// everything appears. Labels: Y1 on vertices with successors, Y1 or Y0 on sinks.
// With a back edge (j -> i, i <= j) closing exactly one cycle, the same gives
// every single-cycle graph.
template <class F>
void for_each_small_graph(const Presentation& p, unsigned max_n, bool one_cycle, F cb) {
  const int k1 = static_cast<int>(p.y1.size()), k0 = static_cast<int>(p.y0.size());
  for (unsigned n = 1; n <= max_n; ++n) {
    std::vector<std::pair<unsigned, unsigned>> slots;
    for (unsigned j = 1; j < n; ++j)
      for (unsigned i = 0; i < j; ++i) slots.push_back({i, j});
    const std::size_t S = slots.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << S); ++mask) {
      std::vector<std::vector<unsigned>> succ(n);
      std::vector<char> has_pred(n, 0);
      for (std::size_t b = 0; b < S; ++b)
        if (mask >> b & 1) {
          succ[slots[b].first].push_back(slots[b].second);
          has_pred[slots[b].second] = 1;
        }
      bool reach = true;
      for (unsigned j = 1; j < n; ++j)
        if (!has_pred[j]) reach = false;
      if (!reach) continue;
      // path counts for the single-cycle condition
      std::vector<std::pair<unsigned, unsigned>> backs;
      if (one_cycle) {
        for (unsigned i = 0; i < n; ++i) {
          std::vector<long> paths(n, 0);
          paths[i] = 1;
          for (unsigned x = i; x < n; ++x)
            for (unsigned y : succ[x]) paths[y] += paths[x];
          for (unsigned j = i; j < n; ++j)
            if (paths[j] == 1) backs.push_back({j, i});
        }
      } else {
        backs.push_back({n, n});
      }
      for (auto [bj, bi] : backs) {
        std::vector<std::vector<unsigned>> s2 = succ;
        if (bj < n) s2[bj].push_back(bi);
        std::vector<int> lab(n, 0);
        auto options = [&](unsigned v) { return s2[v].empty() ? k1 + k0 : k1; };
        for (;;) {
          YSys g;
          for (unsigned v = 0; v < n; ++v)
            g.add_vertex(lab[v] < k1 ? ElementRep::one(lab[v]) : ElementRep::zero(lab[v] - k1), v == 0);
          for (unsigned v = 0; v < n; ++v)
            for (unsigned w : s2[v]) g.add_edge(v, 1, Target::vertex(w));
          cb(g);
          unsigned i = 0;
          while (i < n && lab[i] == options(i) - 1) lab[i++] = 0;
          if (i == n) break;
          ++lab[i];
        }
      }
    }
  }
}

// Acyclic composition games by recursion on (vertex, prefix value).
inline bool brute_composition_acyclic(const Presentation& p, const YSys& g) {
  std::vector<int> live(g.size(), -1);
  std::function<bool(Vertex)> is_live = [&](Vertex v) -> bool {
    if (live[v] >= 0) return live[v];
    bool ok = true;
    for (unsigned d = 1; d <= g.labels[v].rank && ok; ++d) {
      bool any = false;
      for (const auto& a : g.out[v])
        if (a.dir == d && is_live(a.to.idx)) any = true;
      ok = any;
    }
    return live[v] = ok;
  };
  std::function<bool(Vertex, int)> win = [&](Vertex v, int s) -> bool {
    const auto& l = g.labels[v];
    if (l.rank == 0) {
      for (int z : l.values0)
        if (p.accept[s == none ? z : p.act[s][z]]) return true;
      return false;
    }
    for (const auto& t : l.tuples) {
      bool all = true;
      for (unsigned d = 1; d <= l.rank && all; ++d) {
        int s2 = s == none ? t[d - 1] : p.product[s][t[d - 1]];
        for (const auto& a : g.out[v])
          if (a.dir == d && is_live(a.to.idx) && !win(a.to.idx, s2)) all = false;
      }
      if (all) return true;
    }
    return false;
  };
  for (Vertex v = 0; v < g.size(); ++v)
    if ((g.initial[v] || g.root[v]) && is_live(v) && !win(v, none)) return false;
  return true;
}

inline ElementRep random_rep(Rng& rng, const Presentation& p, unsigned rank, unsigned max_choices) {
  ElementRep e;
  e.rank = rank;
  const std::size_t c = 1 + pick(rng, max_choices);
  for (std::size_t i = 0; i < c; ++i) {
    if (rank == 0) {
      e.values0.push_back(static_cast<int>(pick(rng, p.y0.size())));
    } else {
      std::vector<int> t;
      for (unsigned d = 0; d < rank; ++d) t.push_back(static_cast<int>(pick(rng, p.y1.size())));
      e.tuples.push_back(t);
    }
  }
  return e;
}

// Random acyclic graph (forward edges) labelled with represented elements.
inline YSys random_acyclic_composition(Rng& rng, const Presentation& p, unsigned max_n) {
  const unsigned n = 1 + static_cast<unsigned>(pick(rng, max_n));
  YSys g;
  for (unsigned v = 0; v < n; ++v) {
    unsigned rank = v + 1 == n ? 0 : static_cast<unsigned>(pick(rng, 3));
    g.add_vertex(random_rep(rng, p, rank, 2), v == 0 || coin(rng, 0.1));
  }
  for (unsigned v = 0; v < n; ++v)
    for (unsigned d = 1; d <= g.labels[v].rank; ++d) {
      if (coin(rng, 0.05)) continue;
      g.add_edge(v, d, Target::vertex(v + 1 + static_cast<Vertex>(pick(rng, n - v - 1))));
      if (coin(rng, 0.3)) g.add_edge(v, d, Target::vertex(v + 1 + static_cast<Vertex>(pick(rng, n - v - 1))));
    }
  return g;
}

struct DeltaInstance {
  Presentation p;
  std::vector<int> context;
  ElementRep a;
};

// A presentation of the AVOID family, a letter of rank 2 or 3 and a
// Context-shaped closed context accepting it.
inline DeltaInstance random_delta_instance(Rng& rng) {
  for (;;) {
    DeltaInstance inst;
    switch (pick(rng, 4)) {
      case 0: inst.p = avoid_presentation(); break;
      case 1: inst.p = cobuchi_presentation(); break;
      default: {
        unsigned h = 1 + static_cast<unsigned>(pick(rng, 3));
        inst.p = threshold_presentation(h, static_cast<unsigned>(pick(rng, h + 1)));
      }
    }
    const unsigned k = 2 + static_cast<unsigned>(pick(rng, 2));
    // bias towards high values so that the instance accepts
    auto high = [&](Rng& r) {
      int n = static_cast<int>(inst.p.y1.size());
      return coin(r, 0.6) ? n - 1 : static_cast<int>(pick(r, n));
    };
    inst.a.rank = k;
    const std::size_t c = 1 + pick(rng, 2);
    for (std::size_t i = 0; i < c; ++i) {
      std::vector<int> t;
      for (unsigned d = 0; d < k; ++d) t.push_back(high(rng));
      inst.a.tuples.push_back(t);
    }
    for (unsigned i = 0; i <= k; ++i) inst.context.push_back(high(rng));
    if (eval_closed_composition(inst.p, plant_graph(context_graph([&] {
                                  std::vector<std::vector<int>> alts;
                                  for (int y : inst.context) alts.push_back({y});
                                  return alts;
                                }(), atomic_rep(inst.a))))
            .accepted)
      return inst;
  }
}

}  // namespace oracle
