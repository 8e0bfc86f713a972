#pragma once

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

#include "regtree/alphabet.hpp"
#include "regtree/set_system.hpp"
#include "regtree/transition_system.hpp"

namespace regtree {

using Rng = std::mt19937_64;

// Portable draws: the distributions of <random> are implementation-defined.
inline std::size_t pick(Rng& r, std::size_t n) { return n ? static_cast<std::size_t>(r() % n) : 0; }
inline bool coin(Rng& r, double p) { return static_cast<double>(r() >> 11) * 0x1.0p-53 < p; }

struct GenParams {
  unsigned min_vertices = 1;
  unsigned max_vertices = 4;
  double var_prob = 0.3;      // chance that a target is a variable (rank > 0)
  double extra_prob = 0.3;    // set-systems: chance of each additional successor
  double empty_prob = 0.05;   // set-systems: chance that a direction has no successor
  double initial_prob = 0.4;  // set-systems: chance of each extra initial vertex
  double root_prob = 0.15;    // set-systems: chance that a vertex is a root
};

namespace detail {
inline Target random_target(Rng& rng, std::size_t n, unsigned rank, const GenParams& p) {
  if (rank > 0 && coin(rng, p.var_prob)) return Target::variable(1 + static_cast<unsigned>(pick(rng, rank)));
  return Target::vertex(static_cast<Vertex>(pick(rng, n)));
}
}  // namespace detail

// Deterministic system: vertex 0 is initial, one edge per direction.
template <class L, class LabelGen>
SetSystem<L> random_system(Rng& rng, unsigned rank, LabelGen gen, const GenParams& p = {}) {
  SetSystem<L> s;
  s.rank = rank;
  std::size_t n = p.min_vertices + pick(rng, p.max_vertices - p.min_vertices + 1);
  for (std::size_t v = 0; v < n; ++v) s.add_vertex(gen(rng), v == 0);
  for (Vertex v = 0; v < n; ++v)
    for (unsigned d = 1; d <= s.vertex_rank(v); ++d) s.add_edge(v, d, detail::random_target(rng, n, rank, p));
  return s;
}

template <class L, class LabelGen>
SetSystem<L> random_set_system(Rng& rng, unsigned rank, LabelGen gen, const GenParams& p = {}) {
  SetSystem<L> s;
  s.rank = rank;
  std::size_t n = p.min_vertices + pick(rng, p.max_vertices - p.min_vertices + 1);
  for (std::size_t v = 0; v < n; ++v)
    s.add_vertex(gen(rng), v == 0 || coin(rng, p.initial_prob), coin(rng, p.root_prob));
  for (Vertex v = 0; v < n; ++v)
    for (unsigned d = 1; d <= s.vertex_rank(v); ++d) {
      if (coin(rng, p.empty_prob)) continue;
      s.add_edge(v, d, detail::random_target(rng, n, rank, p));
      while (coin(rng, p.extra_prob)) s.add_edge(v, d, detail::random_target(rng, n, rank, p));
    }
  return s;
}

inline auto symbol_gen(const RankedAlphabet& a) {
  return [a](Rng& rng) { return a.symbols[pick(rng, a.symbols.size())]; };
}

// One nesting level: a random (set-)system of the given rank over an alphabet.
inline Sys random_level(Rng& rng, const RankedAlphabet& a, unsigned rank, const GenParams& p, bool systems) {
  return systems ? random_system<Symbol>(rng, rank, symbol_gen(a), p) : random_set_system<Symbol>(rng, rank, symbol_gen(a), p);
}

// Outer pattern whose labels are random inner systems of rank <= max_inner_rank.
inline Nested random_nested(Rng& rng, const RankedAlphabet& a, unsigned rank, unsigned max_inner_rank,
                            const GenParams& p, bool systems = false) {
  auto gen = [&](Rng& r) { return random_level(r, a, static_cast<unsigned>(pick(r, max_inner_rank + 1)), p, systems); };
  return systems ? random_system<Sys>(rng, rank, gen, p) : random_set_system<Sys>(rng, rank, gen, p);
}

inline SetSystem<Nested> random_nested3(Rng& rng, const RankedAlphabet& a, unsigned rank, unsigned max_inner_rank,
                                        const GenParams& p, bool systems = false) {
  auto gen = [&](Rng& r) {
    return random_nested(r, a, static_cast<unsigned>(pick(r, max_inner_rank + 1)), max_inner_rank, p, systems);
  };
  return systems ? random_system<Nested>(rng, rank, gen, p) : random_set_system<Nested>(rng, rank, gen, p);
}

// Closed set-context: a random closed set-system plus a hole vertex of rank n
// that is neither initial nor root and has at least one predecessor.
inline Sys random_context(Rng& rng, const RankedAlphabet& a, unsigned n, const GenParams& p) {
  Sys c = random_set_system<Symbol>(rng, 0, symbol_gen(a), p);
  Vertex h = c.add_vertex(Symbol::hole(n), false, false, "hole");
  for (unsigned d = 1; d <= n; ++d) {
    c.add_edge(h, d, Target::vertex(static_cast<Vertex>(pick(rng, h))));
    while (coin(rng, p.extra_prob)) c.add_edge(h, d, Target::vertex(static_cast<Vertex>(pick(rng, h))));
  }
  std::vector<std::pair<Vertex, unsigned>> slots;
  for (Vertex v = 0; v < h; ++v)
    for (unsigned d = 1; d <= c.vertex_rank(v); ++d) slots.push_back({v, d});
  if (slots.empty()) {
    // give the hole a predecessor through a fresh rank-1 vertex if the alphabet has one
    for (const auto& sym : a.symbols)
      if (sym.rank >= 1) {
        Vertex u = c.add_vertex(sym, true);
        for (unsigned d = 1; d <= sym.rank; ++d) c.add_edge(u, d, Target::vertex(h));
        return c;
      }
    return c;
  }
  auto [v, d] = slots[pick(rng, slots.size())];
  c.add_edge(v, d, Target::vertex(h));
  for (auto [v2, d2] : slots)
    if (coin(rng, 0.15)) c.add_edge(v2, d2, Target::vertex(h));
  return c;
}

// Closed system context: a random closed system plus a hole vertex of rank m
// with one successor per direction; some edge is redirected to the hole.
inline Sys random_system_context(Rng& rng, const RankedAlphabet& a, unsigned m, const GenParams& p) {
  Sys c = random_system<Symbol>(rng, 0, symbol_gen(a), p);
  Vertex h = c.add_vertex(Symbol::hole(m), false, false, "hole");
  for (unsigned d = 1; d <= m; ++d) c.add_edge(h, d, Target::vertex(static_cast<Vertex>(pick(rng, h + 1))));
  std::vector<std::pair<Vertex, unsigned>> slots;
  for (Vertex v = 0; v < h; ++v)
    for (unsigned d = 1; d <= c.vertex_rank(v); ++d) slots.push_back({v, d});
  if (slots.empty()) {
    for (const auto& sym : a.symbols)
      if (sym.rank >= 1) {
        c.labels[0] = sym;
        for (unsigned d = 1; d <= sym.rank; ++d) c.add_edge(0, d, Target::vertex(d == 1 ? h : 0));
        return c;
      }
    throw std::invalid_argument("random_system_context: alphabet has no symbol of positive rank");
  }
  auto [v, d] = slots[pick(rng, slots.size())];
  for (auto& arc : c.out[v])
    if (arc.dir == d) arc.to = Target::vertex(h);
  std::sort(c.out[v].begin(), c.out[v].end());
  return c;
}

// Every closed system with 1..max_vertices vertices over the alphabet, vertex
// 0 initial. Isomorphic copies are not removed.
template <class F>
void for_each_closed_system(const RankedAlphabet& a, unsigned max_vertices, F cb) {
  const std::size_t k = a.symbols.size();
  for (unsigned n = 1; n <= max_vertices; ++n) {
    std::vector<std::size_t> lab(n, 0);
    for (;;) {
      std::vector<std::pair<Vertex, unsigned>> slots;
      for (Vertex v = 0; v < n; ++v)
        for (unsigned d = 1; d <= a.symbols[lab[v]].rank; ++d) slots.push_back({v, d});
      std::vector<Vertex> tgt(slots.size(), 0);
      for (;;) {
        Sys s;
        for (Vertex v = 0; v < n; ++v) s.add_vertex(a.symbols[lab[v]], v == 0);
        for (std::size_t i = 0; i < slots.size(); ++i) s.add_edge(slots[i].first, slots[i].second, Target::vertex(tgt[i]));
        cb(s);
        std::size_t i = 0;
        while (i < tgt.size() && tgt[i] == n - 1) tgt[i++] = 0;
        if (i == tgt.size()) break;
        ++tgt[i];
      }
      std::size_t i = 0;
      while (i < n && lab[i] == k - 1) lab[i++] = 0;
      if (i == n) break;
      ++lab[i];
    }
  }
}

// A random unfolding: `copies` copies of every vertex, each edge redirected
// to a random copy of its target. Copy 0 of each vertex comes first, so the
// projection v*copies+i -> v is a locally surjective morphism onto s.
template <class L>
SetSystem<L> random_unfolding(Rng& rng, const SetSystem<L>& s, unsigned copies) {
  SetSystem<L> r;
  r.rank = s.rank;
  for (Vertex v = 0; v < s.size(); ++v)
    for (unsigned i = 0; i < copies; ++i)
      r.add_vertex(s.labels[v], s.initial[v] && i == 0, s.root[v] && i == 0);
  for (Vertex v = 0; v < s.size(); ++v)
    for (unsigned i = 0; i < copies; ++i)
      for (const auto& a : s.out[v])
        r.add_edge(v * copies + i, a.dir,
                   a.to.var ? a.to : Target::vertex(a.to.idx * copies + static_cast<unsigned>(pick(rng, copies))));
  return r;
}

// Random transition system over the given proposition names.
inline TransitionSystem random_ts(Rng& rng, unsigned max_states, const std::vector<std::string>& props,
                                  double edge_prob = 0.35) {
  TransitionSystem ts;
  std::size_t n = 1 + pick(rng, max_states);
  for (std::size_t u = 0; u < n; ++u) {
    std::vector<std::string> val;
    for (const auto& p : props)
      if (coin(rng, 0.5)) val.push_back(p);
    ts.add_state(val);
  }
  ts.initial = 0;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (coin(rng, edge_prob)) ts.add_transition(u, v);
  return ts;
}

// A bisimilar variant: every state gets a duplicate, successor lists are
// shuffled and each transition may be doubled towards the duplicate.
inline TransitionSystem bisimilar_variant(Rng& rng, const TransitionSystem& ts) {
  TransitionSystem r;
  const std::size_t n = ts.size();
  std::vector<std::size_t> perm(2 * n);
  for (std::size_t i = 0; i < 2 * n; ++i) perm[i] = i;
  for (std::size_t i = 2 * n; i > 1; --i) std::swap(perm[i - 1], perm[pick(rng, i)]);
  std::vector<std::size_t> inv(2 * n);
  for (std::size_t i = 0; i < 2 * n; ++i) inv[perm[i]] = i;
  for (std::size_t k = 0; k < 2 * n; ++k) r.add_state(ts.props[inv[k] % n]);
  r.initial = perm[ts.initial];
  for (std::size_t c = 0; c < 2; ++c)
    for (auto [u, v] : ts.transitions) {
      std::size_t src = perm[u + c * n];
      bool both = coin(rng, 0.4);
      bool dup = coin(rng, 0.5);
      if (both || !dup) r.add_transition(src, perm[v]);
      if (both || dup) r.add_transition(src, perm[v + n]);
    }
  return r;
}

}  // namespace regtree
