#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace regtree {

using Vertex = std::uint32_t;

// Edge target: a vertex index, or a variable x_i (1-based).
struct Target {
  bool var = false;
  std::uint32_t idx = 0;

  static Target vertex(Vertex v) { return {false, v}; }
  static Target variable(unsigned i) { return {true, i}; }

  auto operator<=>(const Target&) const = default;
};

struct Arc {
  unsigned dir = 0;
  Target to;

  auto operator<=>(const Arc&) const = default;
};

struct Symbol {
  std::string name;
  unsigned rank = 0;

  auto operator<=>(const Symbol&) const = default;

  static Symbol hole(unsigned k) { return {"[]", k}; }
  bool is_hole() const { return name == "[]"; }
};

inline unsigned label_rank(const Symbol& s) { return s.rank; }
inline std::string label_name(const Symbol& s) { return s.name; }

template <class L>
struct SetSystem;

template <class L>
unsigned label_rank(const SetSystem<L>& s) { return s.rank; }

template <class L>
std::string label_name(const SetSystem<L>& s) {
  return "<system rank " + std::to_string(s.rank) + ", " + std::to_string(s.size()) + " vertices>";
}

// A finite set-system. Vertices are 0..size()-1; out[v] is kept sorted and
// duplicate-free. Ids are only used for I/O and diagnostics.
template <class L>
struct SetSystem {
  unsigned rank = 0;
  std::vector<L> labels;
  std::vector<std::string> ids;
  std::vector<char> initial;
  std::vector<char> root;
  std::vector<std::vector<Arc>> out;

  std::size_t size() const { return labels.size(); }

  Vertex add_vertex(L label, bool ini = false, bool rt = false, std::string id = {}) {
    labels.push_back(std::move(label));
    initial.push_back(ini);
    root.push_back(rt);
    out.emplace_back();
    if (!id.empty() || !ids.empty()) {
      ids.resize(labels.size() - 1);
      ids.push_back(std::move(id));
    }
    return static_cast<Vertex>(labels.size() - 1);
  }

  bool add_edge(Vertex v, unsigned d, Target t) {
    auto& o = out.at(v);
    Arc a{d, t};
    auto it = std::lower_bound(o.begin(), o.end(), a);
    if (it != o.end() && *it == a) return false;
    o.insert(it, a);
    return true;
  }

  bool has_edge(Vertex v, unsigned d, Target t) const {
    const auto& o = out.at(v);
    return std::binary_search(o.begin(), o.end(), Arc{d, t});
  }

  std::vector<Target> succ(Vertex v, unsigned d) const {
    std::vector<Target> r;
    for (const auto& a : out[v])
      if (a.dir == d) r.push_back(a.to);
    return r;
  }

  std::vector<Vertex> initials() const {
    std::vector<Vertex> r;
    for (Vertex v = 0; v < size(); ++v)
      if (initial[v]) r.push_back(v);
    return r;
  }

  std::vector<Vertex> roots() const {
    std::vector<Vertex> r;
    for (Vertex v = 0; v < size(); ++v)
      if (root[v]) r.push_back(v);
    return r;
  }

  std::string id(Vertex v) const {
    if (v < ids.size() && !ids[v].empty()) return ids[v];
    return "v" + std::to_string(v);
  }

  unsigned vertex_rank(Vertex v) const { return label_rank(labels[v]); }

  // Structural equality on the numbered representation (ids ignored).
  bool operator==(const SetSystem& o) const {
    return rank == o.rank && labels == o.labels && initial == o.initial && root == o.root &&
           out == o.out;
  }
};

using Sys = SetSystem<Symbol>;
using Nested = SetSystem<Sys>;

template <class L>
std::size_t edge_count(const SetSystem<L>& s) {
  std::size_t n = 0;
  for (const auto& o : s.out) n += o.size();
  return n;
}

// Relabel every vertex; the result has the same shape.
template <class L, class F>
auto map_labels(const SetSystem<L>& s, F f) {
  using M = std::decay_t<decltype(f(s.labels[0]))>;
  SetSystem<M> r;
  r.rank = s.rank;
  r.labels.reserve(s.size());
  for (const auto& l : s.labels) r.labels.push_back(f(l));
  r.ids = s.ids;
  r.initial = s.initial;
  r.root = s.root;
  r.out = s.out;
  return r;
}

// Vertices reachable from the initial (and optionally root) vertices.
template <class L>
std::vector<char> reachable(const SetSystem<L>& s, bool from_roots = true) {
  std::vector<char> seen(s.size(), 0);
  std::vector<Vertex> stack;
  for (Vertex v = 0; v < s.size(); ++v)
    if (s.initial[v] || (from_roots && s.root[v])) {
      seen[v] = 1;
      stack.push_back(v);
    }
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (const auto& a : s.out[v])
      if (!a.to.var && !seen[a.to.idx]) {
        seen[a.to.idx] = 1;
        stack.push_back(a.to.idx);
      }
  }
  return seen;
}

// Keep only the vertices flagged in keep; returns the old->new map (-1 if dropped)
// through old_to_new when non-null. Edges to dropped vertices are removed.
template <class L>
SetSystem<L> restrict_to(const SetSystem<L>& s, const std::vector<char>& keep,
                         std::vector<long>* old_to_new = nullptr) {
  std::vector<long> m(s.size(), -1);
  SetSystem<L> r;
  r.rank = s.rank;
  for (Vertex v = 0; v < s.size(); ++v)
    if (keep[v]) m[v] = r.add_vertex(s.labels[v], s.initial[v], s.root[v], v < s.ids.size() ? s.ids[v] : "");
  for (Vertex v = 0; v < s.size(); ++v) {
    if (m[v] < 0) continue;
    for (const auto& a : s.out[v]) {
      if (a.to.var)
        r.add_edge(m[v], a.dir, a.to);
      else if (m[a.to.idx] >= 0)
        r.add_edge(m[v], a.dir, Target::vertex(m[a.to.idx]));
    }
  }
  if (old_to_new) *old_to_new = std::move(m);
  return r;
}

template <class L>
SetSystem<L> trim(const SetSystem<L>& s) {
  return restrict_to(s, reachable(s));
}

}  // namespace regtree
