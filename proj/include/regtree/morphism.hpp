#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "regtree/renaming.hpp"
#include "regtree/set_system.hpp"

namespace regtree {

using VertexMap = std::vector<Vertex>;

enum class MorphismKind { NotMorphism, Morphism, LocallySurjective };

struct MorphismCheck {
  MorphismKind kind = MorphismKind::NotMorphism;
  std::string witness;  // the violated condition when kind is NotMorphism or Morphism (why not surjective)

  bool morphism() const { return kind != MorphismKind::NotMorphism; }
  bool locally_surjective() const { return kind == MorphismKind::LocallySurjective; }
};

inline const char* to_string(MorphismKind k) {
  switch (k) {
    case MorphismKind::NotMorphism: return "not-a-morphism";
    case MorphismKind::Morphism: return "morphism";
    default: return "locally-surjective-morphism";
  }
}

namespace detail {
inline std::string target_str(Target t, const std::function<std::string(Vertex)>& id) {
  return t.var ? "x" + std::to_string(t.idx) : id(t.idx);
}
}  // namespace detail

template <class L>
MorphismCheck check_morphism(const SetSystem<L>& s, const SetSystem<L>& t, const VertexMap& m) {
  if (s.rank != t.rank) throw std::invalid_argument("check_morphism: rank mismatch");
  if (m.size() != s.size()) throw std::invalid_argument("check_morphism: map is not total");
  MorphismCheck r;
  auto sid = [&](Vertex v) { return s.id(v); };
  auto tid = [&](Vertex v) { return t.id(v); };
  for (Vertex v = 0; v < s.size(); ++v) {
    if (m[v] >= t.size()) {
      r.witness = "vertex " + s.id(v) + " is mapped outside the target";
      return r;
    }
    if (!(s.labels[v] == t.labels[m[v]])) {
      r.witness = "label of " + s.id(v) + " differs from label of " + t.id(m[v]);
      return r;
    }
    if (s.initial[v] && !t.initial[m[v]]) {
      r.witness = "initial vertex " + s.id(v) + " is mapped to non-initial " + t.id(m[v]);
      return r;
    }
    if (s.root[v] && !t.root[m[v]]) {
      r.witness = "root vertex " + s.id(v) + " is mapped to non-root " + t.id(m[v]);
      return r;
    }
    for (const auto& a : s.out[v]) {
      Target img = a.to.var ? a.to : Target::vertex(m[a.to.idx]);
      if (!t.has_edge(m[v], a.dir, img)) {
        r.witness = "edge (" + s.id(v) + "," + std::to_string(a.dir) + "," + detail::target_str(a.to, sid) +
                    ") has no image (" + t.id(m[v]) + "," + std::to_string(a.dir) + "," + detail::target_str(img, tid) +
                    ")";
        return r;
      }
    }
  }
  r.kind = MorphismKind::Morphism;
  std::vector<char> ini_hit(t.size(), 0), root_hit(t.size(), 0), seen(t.size(), 0);
  for (Vertex v = 0; v < s.size(); ++v) {
    if (s.initial[v]) ini_hit[m[v]] = 1;
    if (s.root[v]) root_hit[m[v]] = 1;
  }
  for (Vertex w = 0; w < t.size(); ++w) {
    if (t.initial[w] && !ini_hit[w]) {
      r.witness = "initial vertex " + t.id(w) + " has no initial preimage";
      return r;
    }
    if (t.root[w] && !root_hit[w]) {
      r.witness = "root vertex " + t.id(w) + " has no root preimage";
      return r;
    }
  }
  for (Vertex v = 0; v < s.size(); ++v) {
    Vertex w = m[v];
    for (const auto& b : t.out[w]) {
      bool covered = false;
      for (const auto& a : s.out[v]) {
        if (a.dir != b.dir) continue;
        Target img = a.to.var ? a.to : Target::vertex(m[a.to.idx]);
        if (img == b.to) {
          covered = true;
          break;
        }
      }
      if (!covered) {
        r.witness = "edge (" + t.id(w) + "," + std::to_string(b.dir) + "," + detail::target_str(b.to, tid) +
                    ") is not the image of an edge of " + s.id(v);
        return r;
      }
    }
  }
  r.kind = MorphismKind::LocallySurjective;
  r.witness.clear();
  return r;
}

struct SearchOptions {
  bool locally_surjective = false;  // only report locally surjective morphisms
};

// Enumerates morphisms s -> t by backtracking; the callback returns false to stop.
// Vertices are assigned initial/root first, then in breadth-first order, so
// that edge constraints prune early.
template <class L>
void for_each_morphism(const SetSystem<L>& s, const SetSystem<L>& t, const std::function<bool(const VertexMap&)>& cb,
                       SearchOptions opt = {}) {
  if (s.rank != t.rank) throw std::invalid_argument("find_morphism: rank mismatch");
  const std::size_t n = s.size();
  std::vector<Vertex> order;
  std::vector<char> placed(n, 0);
  auto bfs_from = [&](Vertex v0) {
    std::vector<Vertex> q{v0};
    placed[v0] = 1;
    for (std::size_t i = 0; i < q.size(); ++i) {
      order.push_back(q[i]);
      for (const auto& a : s.out[q[i]])
        if (!a.to.var && !placed[a.to.idx]) {
          placed[a.to.idx] = 1;
          q.push_back(a.to.idx);
        }
    }
  };
  for (Vertex v = 0; v < n; ++v)
    if ((s.initial[v] || s.root[v]) && !placed[v]) bfs_from(v);
  for (Vertex v = 0; v < n; ++v)
    if (!placed[v]) bfs_from(v);

  std::vector<std::vector<std::pair<unsigned, Vertex>>> in(n);  // (dir, source)
  for (Vertex v = 0; v < n; ++v)
    for (const auto& a : s.out[v])
      if (!a.to.var) in[a.to.idx].push_back({a.dir, v});

  // candidate lists: equal label, flags compatible, variable edges present
  std::vector<std::vector<Vertex>> cand(n);
  for (Vertex v = 0; v < n; ++v)
    for (Vertex w = 0; w < t.size(); ++w) {
      if (!(s.labels[v] == t.labels[w])) continue;
      if (s.initial[v] && !t.initial[w]) continue;
      if (s.root[v] && !t.root[w]) continue;
      bool ok = true;
      for (const auto& a : s.out[v])
        if (a.to.var && !t.has_edge(w, a.dir, a.to)) ok = false;
      if (ok) cand[v].push_back(w);
    }

  VertexMap m(n, 0);
  std::vector<char> assigned(n, 0);
  bool stop = false;
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (stop) return;
    if (i == n) {
      if (opt.locally_surjective && !check_morphism(s, t, m).locally_surjective()) return;
      if (!cb(m)) stop = true;
      return;
    }
    Vertex v = order[i];
    for (Vertex w : cand[v]) {
      bool ok = true;
      for (const auto& a : s.out[v])
        if (!a.to.var) {
          Vertex u = a.to.idx;
          if (u == v) {
            if (!t.has_edge(w, a.dir, Target::vertex(w))) ok = false;
          } else if (assigned[u] && !t.has_edge(w, a.dir, Target::vertex(m[u]))) {
            ok = false;
          }
          if (!ok) break;
        }
      if (ok)
        for (auto [d, u] : in[v])
          if (u != v && assigned[u] && !t.has_edge(m[u], d, Target::vertex(w))) {
            ok = false;
            break;
          }
      if (!ok) continue;
      m[v] = w;
      assigned[v] = 1;
      go(i + 1);
      assigned[v] = 0;
      if (stop) return;
    }
  };
  go(0);
}

template <class L>
std::optional<VertexMap> find_morphism(const SetSystem<L>& s, const SetSystem<L>& t, SearchOptions opt = {}) {
  std::optional<VertexMap> r;
  for_each_morphism<L>(s, t, [&](const VertexMap& m) {
    r = m;
    return false;
  }, opt);
  return r;
}

// compose(eta, eta2) = eta2 o eta
inline VertexMap compose(const VertexMap& eta, const VertexMap& eta2) {
  VertexMap r(eta.size());
  for (std::size_t i = 0; i < eta.size(); ++i) r[i] = eta2.at(eta[i]);
  return r;
}

template <class L>
struct Pullback {
  SetSystem<L> apex;
  VertexMap pi;   // apex -> first source
  VertexMap pi2;  // apex -> second source
};

// Pullback of eta: s -> t and eta2: s2 -> t. Vertices are the pairs with a
// common image; edges are those present in both components.
template <class L>
Pullback<L> pullback(const SetSystem<L>& s, const VertexMap& eta, const SetSystem<L>& s2, const VertexMap& eta2,
                     bool trim_unreachable = false) {
  if (s.rank != s2.rank) throw std::invalid_argument("pullback: rank mismatch");
  Pullback<L> r;
  r.apex.rank = s.rank;
  std::vector<std::vector<long>> idx(s.size(), std::vector<long>(s2.size(), -1));
  for (Vertex v = 0; v < s.size(); ++v)
    for (Vertex w = 0; w < s2.size(); ++w)
      if (eta[v] == eta2[w]) {
        idx[v][w] = r.apex.add_vertex(s.labels[v], s.initial[v] && s2.initial[w], s.root[v] && s2.root[w],
                                      "(" + s.id(v) + "," + s2.id(w) + ")");
        r.pi.push_back(v);
        r.pi2.push_back(w);
      }
  for (Vertex p = 0; p < r.apex.size(); ++p) {
    Vertex v = r.pi[p], w = r.pi2[p];
    for (const auto& a : s.out[v])
      for (const auto& b : s2.out[w]) {
        if (a.dir != b.dir || a.to.var != b.to.var) continue;
        if (a.to.var) {
          if (a.to.idx == b.to.idx) r.apex.add_edge(p, a.dir, a.to);
        } else if (idx[a.to.idx][b.to.idx] >= 0) {
          r.apex.add_edge(p, a.dir, Target::vertex(idx[a.to.idx][b.to.idx]));
        }
      }
  }
  if (trim_unreachable) {
    std::vector<long> m;
    auto keep = reachable(r.apex);
    Pullback<L> t;
    t.apex = restrict_to(r.apex, keep, &m);
    for (Vertex p = 0; p < m.size(); ++p)
      if (m[p] >= 0) {
        t.pi.push_back(r.pi[p]);
        t.pi2.push_back(r.pi2[p]);
      }
    return t;
  }
  return r;
}

struct TransportCheck {
  bool via_rename = false;   // rho is a morphism rename_sigma(s) -> s2
  bool via_dupname = false;  // rho is a morphism s -> dupname_sigma(s2)
  bool agree() const { return via_rename == via_dupname; }
};

// sigma: [m] -> [n], s of rank m, s2 of rank n.
template <class L>
TransportCheck rename_transport(const VarMap& sigma, const VertexMap& rho, const SetSystem<L>& s, const SetSystem<L>& s2) {
  TransportCheck r;
  r.via_rename = check_morphism(rename(sigma, s2.rank, s), s2, rho).morphism();
  r.via_dupname = check_morphism(s, dupname(sigma, s2), rho).morphism();
  return r;
}

}  // namespace regtree
