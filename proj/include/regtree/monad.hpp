#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "regtree/renaming.hpp"
#include "regtree/set_system.hpp"

namespace regtree {

template <class L>
SetSystem<L> atomic(const L& a) {
  SetSystem<L> s;
  s.rank = label_rank(a);
  Vertex v = s.add_vertex(a, true);
  for (unsigned i = 1; i <= s.rank; ++i) s.add_edge(v, i, Target::variable(i));
  return s;
}

// lift f: apply f to every label, keeping the shape.
template <class L, class F>
auto lift(const SetSystem<L>& s, F f) {
  return map_labels(s, f);
}

template <class L>
void check_coherent(const SetSystem<SetSystem<L>>& n) {
  for (Vertex v = 0; v < n.size(); ++v) {
    const auto& inner = n.labels[v];
    for (Vertex w = 0; w < inner.size(); ++w)
      for (const auto& a : inner.out[w]) {
        if (a.to.var && (a.to.idx < 1 || a.to.idx > inner.rank))
          throw std::invalid_argument("flatten: inner variable out of range at outer vertex " + n.id(v));
        if (!a.to.var && a.to.idx >= inner.size())
          throw std::invalid_argument("flatten: inner edge target out of range at outer vertex " + n.id(v));
      }
    for (const auto& a : n.out[v]) {
      if (a.dir < 1 || a.dir > inner.rank)
        throw std::invalid_argument("flatten: outer direction exceeds the inner rank at " + n.id(v));
      if (a.to.var && a.to.idx > n.rank) throw std::invalid_argument("flatten: outer variable out of range at " + n.id(v));
    }
  }
}

// Offsets of the (v,w) pairs of flatten(n), vertex (v,w) gets offset[v] + w.
template <class L>
std::vector<Vertex> flatten_offsets(const SetSystem<SetSystem<L>>& n) {
  std::vector<Vertex> off(n.size() + 1, 0);
  for (Vertex v = 0; v < n.size(); ++v) off[v + 1] = off[v] + static_cast<Vertex>(n.labels[v].size());
  return off;
}

template <class L>
SetSystem<L> flatten(const SetSystem<SetSystem<L>>& n) {
  check_coherent(n);
  auto off = flatten_offsets(n);
  SetSystem<L> r;
  r.rank = n.rank;
  for (Vertex v = 0; v < n.size(); ++v) {
    const auto& in = n.labels[v];
    for (Vertex w = 0; w < in.size(); ++w)
      r.add_vertex(in.labels[w], n.initial[v] && in.initial[w], in.root[w] || (n.root[v] && in.initial[w]),
                   "(" + n.id(v) + "," + in.id(w) + ")");
  }
  for (Vertex v = 0; v < n.size(); ++v) {
    const auto& in = n.labels[v];
    for (Vertex w = 0; w < in.size(); ++w)
      for (const auto& a : in.out[w]) {
        Vertex src = off[v] + w;
        if (!a.to.var) {
          r.add_edge(src, a.dir, Target::vertex(off[v] + a.to.idx));
          continue;
        }
        for (const auto& b : n.out[v]) {
          if (b.dir != a.to.idx) continue;
          if (b.to.var) {
            r.add_edge(src, a.dir, b.to);
          } else {
            const auto& in2 = n.labels[b.to.idx];
            for (Vertex w2 = 0; w2 < in2.size(); ++w2)
              if (in2.initial[w2]) r.add_edge(src, a.dir, Target::vertex(off[b.to.idx] + w2));
          }
        }
      }
  }
  return r;
}

template <class L>
SetSystem<L> sum(const SetSystem<L>& a, const SetSystem<L>& b) {
  if (a.rank != b.rank) throw std::invalid_argument("sum: rank mismatch");
  SetSystem<L> r = a;
  Vertex off = static_cast<Vertex>(a.size());
  for (Vertex v = 0; v < b.size(); ++v) r.add_vertex(b.labels[v], b.initial[v], b.root[v], b.id(v) + "'");
  for (Vertex v = 0; v < b.size(); ++v)
    for (const auto& e : b.out[v]) r.add_edge(off + v, e.dir, e.to.var ? e.to : Target::vertex(off + e.to.idx));
  if (!a.ids.empty() || !b.ids.empty())
    for (Vertex v = 0; v < a.size(); ++v) r.ids[v] = a.id(v);
  return r;
}

template <class L>
SetSystem<L> sum_all(const std::vector<SetSystem<L>>& parts, unsigned rank) {
  SetSystem<L> r;
  r.rank = rank;
  for (const auto& p : parts) r = sum(r, p);
  return r;
}

template <class L>
SetSystem<L> uproot(const SetSystem<L>& s) {
  SetSystem<L> r = s;
  r.initial = s.root;
  r.root.assign(s.size(), 0);
  return r;
}

template <class L>
SetSystem<L> plant(const SetSystem<L>& s) {
  SetSystem<L> r = s;
  for (Vertex v = 0; v < s.size(); ++v) r.root[v] = s.root[v] || s.initial[v];
  r.initial.assign(s.size(), 0);
  return r;
}

template <class L>
SetSystem<L> unroot(const SetSystem<L>& s) {
  SetSystem<L> r = s;
  r.root.assign(s.size(), 0);
  return r;
}

// Two copies of the outer pattern. Copy 0 holds uproot(S(s)) and is initial;
// copy 1 holds S(s) without its roots and is initial for the roots of S.
// Transition edges always enter copy 1.
template <class L>
SetSystem<SetSystem<L>> fuproot(const SetSystem<SetSystem<L>>& n) {
  SetSystem<SetSystem<L>> r;
  r.rank = n.rank;
  const Vertex k = static_cast<Vertex>(n.size());
  for (Vertex s = 0; s < k; ++s) r.add_vertex(uproot(n.labels[s]), true, false, "(0," + n.id(s) + ")");
  for (Vertex s = 0; s < k; ++s) r.add_vertex(unroot(n.labels[s]), n.root[s], false, "(1," + n.id(s) + ")");
  for (Vertex m = 0; m < 2; ++m)
    for (Vertex s = 0; s < k; ++s)
      for (const auto& a : n.out[s]) r.add_edge(m * k + s, a.dir, a.to.var ? a.to : Target::vertex(k + a.to.idx));
  return r;
}

// The locally surjective morphism flatten(fuproot(n)) -> uproot(flatten(n)).
template <class L>
std::vector<Vertex> fuproot_map(const SetSystem<SetSystem<L>>& n) {
  auto off = flatten_offsets(n);
  std::vector<Vertex> m;
  for (Vertex c = 0; c < 2; ++c)
    for (Vertex s = 0; s < n.size(); ++s)
      for (Vertex w = 0; w < n.labels[s].size(); ++w) m.push_back(off[s] + w);
  return m;
}

// ---- contexts over symbols ----

// Index of the unique hole vertex; throws if there is not exactly one.
long hole_vertex(const Sys& c);

// C[S]: flatten of the nested system with S at the hole and atomic labels elsewhere.
Sys plug(const Sys& c, const Sys& s);

// Context(S0,...,Sn) for rank-1 set-systems: closed context with hole of rank n.
Sys make_context(const std::vector<Sys>& parts);

// Pieces P0..Pn of a closed context with hole of rank n.
std::vector<Sys> pieces(const Sys& c);

// The vertex map Context(pieces(c)) -> c sending each copy to its origin.
std::vector<Vertex> recomposition_map(const Sys& c);

// The nested system used by plug: S at the hole, atomic labels elsewhere.
Nested plug_nesting(const Sys& c, const Sys& s);

}  // namespace regtree
