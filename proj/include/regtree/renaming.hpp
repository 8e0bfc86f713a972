#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "regtree/set_system.hpp"

namespace regtree {

// A map [m] -> [n] stored 0-based by argument: map[i-1] = sigma(i), values 1-based.
using VarMap = std::vector<unsigned>;

// renamerel_R: (r,i,x_j) is an edge of the result iff (k,j) in R and (r,i,x_k)
// is an edge of s. R relates old variables (1..rank) to new ones (1..new_rank).
template <class L>
SetSystem<L> renamerel(const std::vector<std::pair<unsigned, unsigned>>& rel, unsigned new_rank, const SetSystem<L>& s) {
  for (auto [k, j] : rel)
    if (k < 1 || k > s.rank || j < 1 || j > new_rank) throw std::invalid_argument("renamerel: relation out of range");
  SetSystem<L> r = s;
  r.rank = new_rank;
  for (Vertex v = 0; v < s.size(); ++v) {
    r.out[v].clear();
    for (const auto& a : s.out[v]) {
      if (!a.to.var) {
        r.add_edge(v, a.dir, a.to);
        continue;
      }
      for (auto [k, j] : rel)
        if (k == a.to.idx) r.add_edge(v, a.dir, Target::variable(j));
    }
  }
  return r;
}

// rename_sigma for sigma: [m] -> [n]; s has rank m, the result rank n.
template <class L>
SetSystem<L> rename(const VarMap& sigma, unsigned n, const SetSystem<L>& s) {
  if (sigma.size() != s.rank) throw std::invalid_argument("rename: map domain differs from the rank");
  std::vector<std::pair<unsigned, unsigned>> rel;
  for (unsigned k = 1; k <= sigma.size(); ++k) rel.push_back({k, sigma[k - 1]});
  return renamerel(rel, n, s);
}

// dupname_sigma for sigma: [m] -> [n]; s has rank n, the result rank m.
template <class L>
SetSystem<L> dupname(const VarMap& sigma, const SetSystem<L>& s) {
  std::vector<std::pair<unsigned, unsigned>> rel;
  for (unsigned j = 1; j <= sigma.size(); ++j) {
    if (sigma[j - 1] < 1 || sigma[j - 1] > s.rank) throw std::invalid_argument("dupname: map codomain differs from the rank");
    rel.push_back({sigma[j - 1], j});
  }
  return renamerel(rel, static_cast<unsigned>(sigma.size()), s);
}

inline VarMap identity_map(unsigned m) {
  VarMap r(m);
  for (unsigned i = 0; i < m; ++i) r[i] = i + 1;
  return r;
}

inline VarMap compose_maps(const VarMap& outer, const VarMap& inner) {  // outer o inner
  VarMap r(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) r[i] = outer.at(inner[i] - 1);
  return r;
}

}  // namespace regtree
