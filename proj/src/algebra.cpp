#include "regtree/algebra.hpp"

#include <algorithm>
#include <stdexcept>

#include "regtree/validate.hpp"

namespace regtree {

ReachValue ReachValue::of(unsigned n, std::vector<unsigned> xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  for (unsigned x : xs)
    if (x < 1 || x > n) throw std::invalid_argument("reach value: variable out of range");
  return {n, false, xs};
}

ReachValue ReachValue::full(unsigned n) {
  std::vector<unsigned> xs;
  for (unsigned i = 1; i <= n; ++i) xs.push_back(i);
  return {n, false, xs};
}

std::string ReachValue::str() const {
  if (bottom) return "bot/" + std::to_string(rank);
  std::string s = "{";
  for (std::size_t i = 0; i < vars.size(); ++i) s += (i ? "," : "") + std::to_string(vars[i]);
  return s + "}/" + std::to_string(rank);
}

ReachValue ReachAlgebra::eval(const ASys& s) const {
  auto ini = s.initials();
  if (ini.size() != 1) throw std::invalid_argument("eval: expected one initial vertex");
  std::vector<char> seen(s.size(), 0);
  std::vector<Vertex> stack{ini[0]};
  seen[ini[0]] = 1;
  std::set<unsigned> vars;
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    const auto& l = s.labels[v];
    if (l.bottom) return ReachValue::bot(s.rank);
    for (const auto& a : s.out[v]) {
      if (!std::binary_search(l.vars.begin(), l.vars.end(), a.dir)) continue;
      if (a.to.var) {
        vars.insert(a.to.idx);
      } else if (!seen[a.to.idx]) {
        seen[a.to.idx] = 1;
        stack.push_back(a.to.idx);
      }
    }
  }
  return {s.rank, false, {vars.begin(), vars.end()}};
}

std::vector<ReachValue> ReachAlgebra::carrier(unsigned n) const {
  std::vector<ReachValue> r{ReachValue::bot(n)};
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<unsigned> xs;
    for (unsigned i = 0; i < n; ++i)
      if (mask >> i & 1) xs.push_back(i + 1);
    r.push_back({n, false, xs});
  }
  return r;
}

LetterMap reach_letters(const std::set<std::string>& r) {
  return [r](const Symbol& a) { return r.count(a.name) ? ReachValue::bot(a.rank) : ReachValue::full(a.rank); };
}

ReachValue rho(const ReachAlgebra& alg, const LetterMap& letters, const Sys& s) {
  return alg.eval(map_labels(s, letters));
}

bool recognises(const ReachAlgebra& alg, const LetterMap& letters, const std::vector<ReachValue>& p, const Sys& s) {
  if (s.rank != 0) throw std::invalid_argument("recognises: input is not closed");
  auto v = rho(alg, letters, s);
  return std::find(p.begin(), p.end(), v) != p.end();
}

namespace {

// C[S] for a system-of-systems: the vertex `at` gets `inner`, every other
// vertex its atomic label.
ANested substitute(const ANested& n, Vertex at, const ASys& inner) {
  ANested r = n;
  r.labels[at] = inner;
  return r;
}

}  // namespace

LawReport check_algebra_laws(const ReachAlgebra& alg, const std::vector<ANested>& sample) {
  LawReport rep;
  for (unsigned n = 0; n <= alg.max_rank; ++n)
    for (const auto& a : alg.carrier(n)) {
      ++rep.checked;
      auto v = alg.eval(atomic(a));
      if (v != a) rep.failures.push_back({"unit", "eval(atomic(" + a.str() + ")) = " + v.str()});
    }
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const auto& s = sample[i];
    auto lhs = alg.eval(map_labels(s, [&](const ASys& in) { return alg.eval(in); }));
    auto rhs = alg.eval(flatten(s));
    ++rep.checked;
    if (lhs != rhs)
      rep.failures.push_back({"flatten", "sample " + std::to_string(i) + ": " + lhs.str() + " vs " + rhs.str()});
    // context form at every vertex: only that vertex is evaluated first
    for (Vertex v = 0; v < s.size(); ++v) {
      auto atomised = map_labels(s, [&](const ASys& in) { return atomic(alg.eval(in)); });
      auto with_s = flatten(substitute(atomised, v, s.labels[v]));
      auto with_val = flatten(atomised);
      ++rep.checked;
      auto x = alg.eval(with_s), y = alg.eval(with_val);
      if (x != y)
        rep.failures.push_back({"context", "sample " + std::to_string(i) + " vertex " + s.id(v) + ": " + x.str() +
                                               " vs " + y.str()});
    }
  }
  return rep;
}

}  // namespace regtree
