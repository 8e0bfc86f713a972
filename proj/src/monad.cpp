#include "regtree/monad.hpp"

namespace regtree {

long hole_vertex(const Sys& c) {
  long h = -1;
  for (Vertex v = 0; v < c.size(); ++v)
    if (c.labels[v].is_hole()) {
      if (h >= 0) throw std::invalid_argument("context has more than one hole vertex");
      h = v;
    }
  if (h < 0) throw std::invalid_argument("context has no hole vertex");
  return h;
}

Nested plug_nesting(const Sys& c, const Sys& s) {
  long h = hole_vertex(c);
  if (c.labels[h].rank != s.rank)
    throw std::invalid_argument("plug: hole rank " + std::to_string(c.labels[h].rank) + " differs from system rank " +
                                std::to_string(s.rank));
  Nested n = map_labels(c, [](const Symbol& a) { return atomic(a); });
  n.labels[h] = s;
  return n;
}

Sys plug(const Sys& c, const Sys& s) { return flatten(plug_nesting(c, s)); }

Sys make_context(const std::vector<Sys>& parts) {
  if (parts.empty()) throw std::invalid_argument("make_context: needs at least S0");
  for (const auto& p : parts)
    if (p.rank != 1) throw std::invalid_argument("make_context: every argument must have rank 1");
  const unsigned n = static_cast<unsigned>(parts.size() - 1);
  Sys c;
  c.rank = 0;
  std::vector<Vertex> off;
  for (unsigned i = 0; i < parts.size(); ++i) {
    off.push_back(static_cast<Vertex>(c.size()));
    const auto& p = parts[i];
    for (Vertex v = 0; v < p.size(); ++v)
      c.add_vertex(p.labels[v], i == 0 && p.initial[v], p.root[v], "P" + std::to_string(i) + "." + p.id(v));
  }
  Vertex h = c.add_vertex(Symbol::hole(n), false, false, "hole");
  for (unsigned i = 0; i < parts.size(); ++i) {
    const auto& p = parts[i];
    for (Vertex v = 0; v < p.size(); ++v)
      for (const auto& a : p.out[v])
        c.add_edge(off[i] + v, a.dir, a.to.var ? Target::vertex(h) : Target::vertex(off[i] + a.to.idx));
  }
  for (unsigned d = 1; d <= n; ++d)
    for (Vertex v = 0; v < parts[d].size(); ++v)
      if (parts[d].initial[v]) c.add_edge(h, d, Target::vertex(off[d] + v));
  return c;
}

namespace {

Sys piece(const Sys& c, Vertex h, unsigned i) {
  Sys p;
  p.rank = 1;
  std::vector<long> m(c.size(), -1);
  for (Vertex v = 0; v < c.size(); ++v) {
    if (v == h) continue;
    bool ini = i == 0 ? static_cast<bool>(c.initial[v]) : c.has_edge(h, i, Target::vertex(v));
    m[v] = p.add_vertex(c.labels[v], ini, c.root[v], c.id(v));
  }
  for (Vertex v = 0; v < c.size(); ++v) {
    if (v == h) continue;
    for (const auto& a : c.out[v]) {
      if (a.to.var) continue;  // closed context
      if (a.to.idx == h)
        p.add_edge(m[v], a.dir, Target::variable(1));
      else
        p.add_edge(m[v], a.dir, Target::vertex(m[a.to.idx]));
    }
  }
  return p;
}

}  // namespace

std::vector<Sys> pieces(const Sys& c) {
  if (c.rank != 0) throw std::invalid_argument("pieces: context is not closed");
  Vertex h = static_cast<Vertex>(hole_vertex(c));
  std::vector<Sys> r;
  for (unsigned i = 0; i <= c.labels[h].rank; ++i) r.push_back(piece(c, h, i));
  return r;
}

std::vector<Vertex> recomposition_map(const Sys& c) {
  Vertex h = static_cast<Vertex>(hole_vertex(c));
  std::vector<Vertex> origin;
  for (Vertex v = 0; v < c.size(); ++v)
    if (v != h) origin.push_back(v);
  std::vector<Vertex> m;
  for (unsigned i = 0; i <= c.labels[h].rank; ++i) m.insert(m.end(), origin.begin(), origin.end());
  m.push_back(h);
  return m;
}

}  // namespace regtree
