#pragma once

#include <algorithm>
#include <concepts>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "regtree/set_system.hpp"

namespace regtree {

namespace detail {

// Dense class ids for the labels of a list of systems, by label equality.
template <class L>
std::vector<int> label_classes(const std::vector<const SetSystem<L>*>& systems) {
  std::vector<int> cls;
  if constexpr (std::totally_ordered<L>) {
    std::map<L, int> ids;
    for (auto* s : systems)
      for (const auto& l : s->labels) {
        auto [it, fresh] = ids.try_emplace(l, static_cast<int>(ids.size()));
        cls.push_back(it->second);
      }
  } else {
    std::vector<const L*> reps;
    for (auto* s : systems)
      for (const auto& l : s->labels) {
        int found = -1;
        for (std::size_t i = 0; i < reps.size(); ++i)
          if (*reps[i] == l) {
            found = static_cast<int>(i);
            break;
          }
        if (found < 0) {
          found = static_cast<int>(reps.size());
          reps.push_back(&l);
        }
        cls.push_back(found);
      }
  }
  return cls;
}

// Joint graph of one or two systems, used for colour refinement.
struct ColourGraph {
  std::vector<std::vector<std::pair<unsigned, long>>> out;  // (dir, vertex) or (dir, -var)
  std::vector<std::vector<std::pair<unsigned, long>>> in;   // (dir, source)

  template <class L>
  void add(const SetSystem<L>& s) {
    long base = static_cast<long>(out.size());
    out.resize(out.size() + s.size());
    in.resize(in.size() + s.size());
    for (Vertex v = 0; v < s.size(); ++v)
      for (const auto& a : s.out[v]) {
        if (a.to.var) {
          out[base + v].push_back({a.dir, -static_cast<long>(a.to.idx)});
        } else {
          out[base + v].push_back({a.dir, base + a.to.idx});
          in[base + a.to.idx].push_back({a.dir, base + v});
        }
      }
  }

  // Refines colours to a stable partition; new colours are numbered by sorted
  // signature, so the numbering does not depend on vertex order.
  void refine(std::vector<int>& colour) const {
    std::size_t classes = count(colour);
    for (;;) {
      using Sig = std::tuple<int, std::vector<std::pair<unsigned, long>>, std::vector<std::pair<unsigned, long>>>;
      std::vector<Sig> sig(colour.size());
      for (std::size_t v = 0; v < colour.size(); ++v) {
        std::vector<std::pair<unsigned, long>> o, i;
        for (auto [d, t] : out[v]) o.push_back({d, t < 0 ? t : colour[t]});
        for (auto [d, s] : in[v]) i.push_back({d, colour[s]});
        std::sort(o.begin(), o.end());
        std::sort(i.begin(), i.end());
        sig[v] = {colour[v], std::move(o), std::move(i)};
      }
      std::map<Sig, int> ids;
      for (const auto& s : sig) ids.emplace(s, 0);
      int next = 0;
      for (auto& [k, id] : ids) id = next++;
      for (std::size_t v = 0; v < colour.size(); ++v) colour[v] = ids[sig[v]];
      std::size_t c = ids.size();
      if (c == classes) return;
      classes = c;
    }
  }

  static std::size_t count(const std::vector<int>& colour) {
    std::vector<int> c = colour;
    std::sort(c.begin(), c.end());
    return static_cast<std::size_t>(std::unique(c.begin(), c.end()) - c.begin());
  }
};

template <class L>
bool is_isomorphism(const SetSystem<L>& a, const SetSystem<L>& b, const std::vector<Vertex>& m) {
  if (a.rank != b.rank || a.size() != b.size()) return false;
  std::vector<char> hit(b.size(), 0);
  for (Vertex v = 0; v < a.size(); ++v) {
    if (hit[m[v]]) return false;
    hit[m[v]] = 1;
  }
  for (Vertex v = 0; v < a.size(); ++v) {
    Vertex w = m[v];
    if (!(a.labels[v] == b.labels[w]) || a.initial[v] != b.initial[w] || a.root[v] != b.root[w]) return false;
    if (a.out[v].size() != b.out[w].size()) return false;
    for (const auto& e : a.out[v]) {
      Target t = e.to.var ? e.to : Target::vertex(m[e.to.idx]);
      if (!b.has_edge(w, e.dir, t)) return false;
    }
  }
  return true;
}

}  // namespace detail

// Exact isomorphism test: joint colour refinement with backtracking on the
// smallest non-trivial colour class. Returns the vertex bijection.
template <class L>
std::optional<std::vector<Vertex>> find_isomorphism(const SetSystem<L>& a, const SetSystem<L>& b) {
  if (a.rank != b.rank || a.size() != b.size()) return std::nullopt;
  const std::size_t n = a.size();
  if (n == 0) return std::vector<Vertex>{};
  detail::ColourGraph g;
  g.add(a);
  g.add(b);
  auto cls = detail::label_classes<L>({&a, &b});
  std::vector<int> colour(2 * n);
  for (std::size_t v = 0; v < 2 * n; ++v) {
    const auto& s = v < n ? a : b;
    std::size_t w = v < n ? v : v - n;
    colour[v] = cls[v] * 4 + (s.initial[w] ? 2 : 0) + (s.root[w] ? 1 : 0);
  }

  std::function<std::optional<std::vector<Vertex>>(std::vector<int>)> search =
      [&](std::vector<int> col) -> std::optional<std::vector<Vertex>> {
    g.refine(col);
    std::map<int, std::pair<std::vector<Vertex>, std::vector<Vertex>>> cells;
    for (std::size_t v = 0; v < 2 * n; ++v) {
      auto& c = cells[col[v]];
      (v < n ? c.first : c.second).push_back(static_cast<Vertex>(v < n ? v : v - n));
    }
    const std::pair<std::vector<Vertex>, std::vector<Vertex>>* pick = nullptr;
    for (const auto& [c, cell] : cells) {
      if (cell.first.size() != cell.second.size()) return std::nullopt;
      if (cell.first.size() > 1 && (!pick || cell.first.size() < pick->first.size())) pick = &cell;
    }
    if (!pick) {
      std::vector<Vertex> m(n);
      for (const auto& [c, cell] : cells) m[cell.first[0]] = cell.second[0];
      if (detail::is_isomorphism(a, b, m)) return m;
      return std::nullopt;
    }
    int fresh = *std::max_element(col.begin(), col.end()) + 1;
    Vertex x = pick->first[0];
    for (Vertex y : pick->second) {
      auto next = col;
      next[x] = fresh;
      next[n + y] = fresh;
      if (auto r = search(std::move(next))) return r;
    }
    return std::nullopt;
  };
  return search(std::move(colour));
}

template <class L>
bool isomorphic(const SetSystem<L>& a, const SetSystem<L>& b) {
  return find_isomorphism(a, b).has_value();
}

inline std::string label_key(const Symbol& s) { return s.name + "/" + std::to_string(s.rank); }

template <class L>
std::string canonical_form(const SetSystem<L>& s);

template <class L>
std::string label_key(const SetSystem<L>& s) {
  return "{" + canonical_form(s) + "}";
}

// Canonical certificate: the lexicographically least serialisation over all
// leaves of the individualisation-refinement tree. Exact; exponential on
// highly symmetric inputs.
template <class L>
std::string canonical_form(const SetSystem<L>& s) {
  const std::size_t n = s.size();
  std::vector<std::string> keys;
  for (const auto& l : s.labels) keys.push_back(label_key(l));
  std::vector<std::string> sorted = keys;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<int> colour(n);
  for (Vertex v = 0; v < n; ++v) {
    int k = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), keys[v]) - sorted.begin());
    colour[v] = k * 4 + (s.initial[v] ? 2 : 0) + (s.root[v] ? 1 : 0);
  }
  detail::ColourGraph g;
  g.add(s);

  auto serialise = [&](const std::vector<int>& col) {
    // col is discrete: position of v is its colour rank
    std::vector<Vertex> order(n);
    std::vector<int> sortedc = col;
    std::sort(sortedc.begin(), sortedc.end());
    std::vector<Vertex> pos(n);
    for (Vertex v = 0; v < n; ++v) {
      pos[v] = static_cast<Vertex>(std::lower_bound(sortedc.begin(), sortedc.end(), col[v]) - sortedc.begin());
      order[pos[v]] = v;
    }
    std::string r = "r" + std::to_string(s.rank) + ";";
    for (Vertex i = 0; i < n; ++i) {
      Vertex v = order[i];
      r += keys[v];
      r += s.initial[v] ? "I" : "";
      r += s.root[v] ? "R" : "";
      std::vector<std::pair<unsigned, long>> es;
      for (const auto& a : s.out[v]) es.push_back({a.dir, a.to.var ? -static_cast<long>(a.to.idx) : pos[a.to.idx]});
      std::sort(es.begin(), es.end());
      r += "[";
      for (auto [d, t] : es) r += std::to_string(d) + (t < 0 ? "x" + std::to_string(-t) : ":" + std::to_string(t)) + " ";
      r += "];";
    }
    return r;
  };

  std::optional<std::string> best;
  std::function<void(std::vector<int>)> search = [&](std::vector<int> col) {
    g.refine(col);
    std::map<int, std::vector<Vertex>> cells;
    for (Vertex v = 0; v < n; ++v) cells[col[v]].push_back(v);
    const std::vector<Vertex>* pick = nullptr;
    for (const auto& [c, cell] : cells)
      if (cell.size() > 1) {
        pick = &cell;
        break;
      }
    if (!pick) {
      auto cert = serialise(col);
      if (!best || cert < *best) best = std::move(cert);
      return;
    }
    for (Vertex x : *pick) {
      // the individualised vertex goes first within its cell
      auto next = col;
      for (auto& c : next) c = c * 2 + 1;
      next[x] = col[x] * 2;
      search(std::move(next));
    }
  };
  if (n == 0) return "r" + std::to_string(s.rank) + ";";
  search(std::move(colour));
  return *best;
}

}  // namespace regtree
