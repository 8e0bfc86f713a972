#pragma once

#include <string>
#include <vector>

#include "regtree/set_system.hpp"

namespace regtree {

struct Violation {
  std::string kind;
  std::string message;
};

struct Validation {
  std::vector<Violation> violations;
  bool set_system = false;  // all invariants of a set-system hold
  bool system = false;      // additionally deterministic with one initial vertex, no roots
  bool closed = false;      // rank 0

  bool ok() const { return violations.empty(); }
};

template <class L>
Validation validate(const SetSystem<L>& s) {
  Validation r;
  auto add = [&](std::string kind, std::string msg) { r.violations.push_back({std::move(kind), std::move(msg)}); };
  const std::size_t n = s.size();
  if (s.initial.size() != n) add("initial-size", "initial flags do not cover the vertex set");
  if (s.root.size() != n) add("root-size", "root flags do not cover the vertex set");
  if (s.out.size() != n) add("edge-table-size", "edge table does not cover the vertex set");
  if (!r.violations.empty()) return r;

  for (Vertex v = 0; v < n; ++v) {
    unsigned rk = label_rank(s.labels[v]);
    for (const auto& a : s.out[v]) {
      std::string where = "edge (" + s.id(v) + "," + std::to_string(a.dir) + ",";
      where += a.to.var ? "x" + std::to_string(a.to.idx) : (a.to.idx < n ? s.id(a.to.idx) : std::to_string(a.to.idx));
      where += ")";
      if (a.dir < 1 || a.dir > rk) add("direction", where + ": direction exceeds symbol rank");
      if (a.to.var && (a.to.idx < 1 || a.to.idx > s.rank)) add("variable", where + ": variable index out of range");
      if (!a.to.var && a.to.idx >= n) add("target", where + ": target is not a vertex");
    }
  }
  r.set_system = r.violations.empty();
  r.closed = s.rank == 0;
  if (!r.set_system) return r;

  bool sys = true;
  std::size_t ini = 0;
  for (Vertex v = 0; v < n; ++v) {
    ini += s.initial[v] ? 1 : 0;
    if (s.root[v]) sys = false;
    unsigned rk = label_rank(s.labels[v]);
    std::vector<unsigned> count(rk + 1, 0);
    for (const auto& a : s.out[v]) count[a.dir]++;
    for (unsigned d = 1; d <= rk; ++d)
      if (count[d] != 1) sys = false;
  }
  r.system = sys && ini == 1;
  return r;
}

template <class L>
bool is_system(const SetSystem<L>& s) {
  return validate(s).system;
}

// Messages explaining why a valid set-system is not a system.
template <class L>
std::vector<std::string> system_defects(const SetSystem<L>& s) {
  std::vector<std::string> r;
  std::size_t ini = 0;
  for (Vertex v = 0; v < s.size(); ++v) {
    ini += s.initial[v] ? 1 : 0;
    if (s.root[v]) r.push_back("vertex " + s.id(v) + " is a root");
    unsigned rk = label_rank(s.labels[v]);
    std::vector<unsigned> count(rk + 1, 0);
    for (const auto& a : s.out[v])
      if (a.dir >= 1 && a.dir <= rk) count[a.dir]++;
    for (unsigned d = 1; d <= rk; ++d)
      if (count[d] != 1)
        r.push_back("vertex " + s.id(v) + " has " + std::to_string(count[d]) + " edges in direction " +
                    std::to_string(d));
  }
  if (ini != 1) r.push_back(std::to_string(ini) + " initial vertices");
  return r;
}

}  // namespace regtree
