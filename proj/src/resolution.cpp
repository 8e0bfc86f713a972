#include "regtree/resolution.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "regtree/equivalence.hpp"
#include "regtree/monad.hpp"
#include "regtree/validate.hpp"

namespace regtree {

std::vector<char> viable(const Sys& s) {
  std::vector<char> ok(s.size(), 1);
  for (bool changed = true; changed;) {
    changed = false;
    for (Vertex v = 0; v < s.size(); ++v) {
      if (!ok[v]) continue;
      for (unsigned d = 1; d <= s.vertex_rank(v) && ok[v]; ++d) {
        bool any = false;
        for (const auto& a : s.out[v])
          if (a.dir == d && (a.to.var || ok[a.to.idx])) any = true;
        if (!any) {
          ok[v] = 0;
          changed = true;
        }
      }
    }
  }
  return ok;
}

namespace {

using History = std::vector<Vertex>;
using StateKey = std::pair<Vertex, History>;

std::vector<std::vector<std::vector<Target>>> options(const Sys& s, const std::vector<char>& ok) {
  std::vector<std::vector<std::vector<Target>>> r(s.size());
  for (Vertex v = 0; v < s.size(); ++v) {
    r[v].resize(s.vertex_rank(v));
    for (const auto& a : s.out[v])
      if (a.dir >= 1 && a.dir <= s.vertex_rank(v) && (a.to.var || ok[a.to.idx])) r[v][a.dir - 1].push_back(a.to);
  }
  return r;
}

History extend(const History& h, Vertex v, unsigned k) {
  History r = h;
  r.push_back(v);
  if (r.size() > k) r.erase(r.begin(), r.begin() + static_cast<long>(r.size() - k));
  return r;
}

std::string state_id(const Sys& s, const StateKey& st) {
  std::string id = s.id(st.first);
  if (!st.second.empty()) {
    id += "|";
    for (std::size_t i = 0; i < st.second.size(); ++i) id += (i ? "." : "") + s.id(st.second[i]);
  }
  return id;
}

Sys build(const Sys& s, const std::vector<StateKey>& states, const std::vector<std::vector<Target>>& choice,
          VertexMap& m) {
  Sys t;
  t.rank = s.rank;
  m.clear();
  for (std::size_t i = 0; i < states.size(); ++i) {
    t.add_vertex(s.labels[states[i].first], i == 0, false, state_id(s, states[i]));
    m.push_back(states[i].first);
  }
  for (Vertex i = 0; i < states.size(); ++i)
    for (unsigned d = 1; d <= choice[i].size(); ++d) t.add_edge(i, d, choice[i][d - 1]);
  return t;
}

}  // namespace

bool for_each_direct_resolution(const Sys& s, unsigned k, const std::function<bool(const Sys&, const VertexMap&)>& cb,
                                std::size_t max_count) {
  auto ok = viable(s);
  auto opts = options(s, ok);
  std::map<StateKey, Vertex> index;
  std::vector<StateKey> states;
  std::vector<std::vector<Target>> choice;
  std::size_t count = 0;
  bool stop = false;
  VertexMap m;

  std::function<void(std::size_t, unsigned)> go = [&](std::size_t si, unsigned d) {
    if (stop) return;
    if (si == states.size()) {
      Sys t = build(s, states, choice, m);
      ++count;
      if (!cb(t, m) || count >= max_count) stop = true;
      return;
    }
    Vertex v = states[si].first;
    if (d > s.vertex_rank(v)) {
      go(si + 1, 1);
      return;
    }
    for (Target o : opts[v][d - 1]) {
      if (o.var) {
        choice[si][d - 1] = o;
        go(si, d + 1);
      } else {
        StateKey key{o.idx, extend(states[si].second, v, k)};
        auto it = index.find(key);
        bool fresh = it == index.end();
        Vertex id = fresh ? static_cast<Vertex>(states.size()) : it->second;
        if (fresh) {
          index.emplace(key, id);
          states.push_back(key);
          choice.emplace_back(s.vertex_rank(o.idx));
        }
        choice[si][d - 1] = Target::vertex(id);
        go(si, d + 1);
        if (fresh) {
          index.erase(key);
          states.pop_back();
          choice.pop_back();
        }
      }
      if (stop) return;
    }
  };

  for (Vertex v : s.initials()) {
    if (!ok[v]) continue;
    states = {{v, {}}};
    index = {{states[0], 0}};
    choice = {std::vector<Target>(s.vertex_rank(v))};
    go(0, 1);
    if (stop) return false;
  }
  return true;
}

ResolutionSet direct_resolutions(const Sys& s, unsigned k, std::size_t max_count) {
  ResolutionSet r;
  std::set<std::string> keys;
  r.truncated = !for_each_direct_resolution(s, k, [&](const Sys& t, const VertexMap&) {
    if (keys.insert(unfold_key(t)).second) r.systems.push_back(trim(t));
    return true;
  }, max_count);
  return r;
}

std::optional<std::pair<Sys, VertexMap>> sample_direct_resolution(Rng& rng, const Sys& s, unsigned k) {
  auto ok = viable(s);
  auto opts = options(s, ok);
  std::vector<Vertex> starts;
  for (Vertex v : s.initials())
    if (ok[v]) starts.push_back(v);
  if (starts.empty()) return std::nullopt;
  std::map<StateKey, Vertex> index;
  std::vector<StateKey> states{{starts[pick(rng, starts.size())], {}}};
  index[states[0]] = 0;
  std::vector<std::vector<Target>> choice;
  for (std::size_t i = 0; i < states.size(); ++i) {
    Vertex v = states[i].first;
    choice.emplace_back(s.vertex_rank(v));
    for (unsigned d = 1; d <= s.vertex_rank(v); ++d) {
      const auto& os = opts[v][d - 1];
      Target o = os[pick(rng, os.size())];
      if (!o.var) {
        StateKey key{o.idx, extend(states[i].second, v, k)};
        auto [it, fresh] = index.try_emplace(key, static_cast<Vertex>(states.size()));
        if (fresh) states.push_back(key);
        o = Target::vertex(it->second);
      }
      choice[i][d - 1] = o;
    }
  }
  VertexMap m;
  Sys t = build(s, states, choice, m);
  return std::make_pair(t, m);
}

Yields yields(const Sys& s, unsigned k, std::size_t max_count) {
  Yields y;
  y.init = direct_resolutions(s, k, max_count);
  y.root = direct_resolutions(uproot(s), k, max_count);
  for (auto& t : y.root.systems) t = plant(t);
  return y;
}

bool in_init_yields(const Sys& t, const Sys& s) {
  if (!is_system(t)) throw std::invalid_argument("in_init_yields: candidate is not a system");
  if (t.rank != s.rank) return false;
  const std::size_t n = t.size(), p = s.size();
  std::vector<std::vector<char>> rel(n, std::vector<char>(p, 0));
  for (Vertex x = 0; x < n; ++x)
    for (Vertex y = 0; y < p; ++y) {
      if (!(t.labels[x] == s.labels[y])) continue;
      bool ok = true;
      for (const auto& a : t.out[x])
        if (a.to.var && !s.has_edge(y, a.dir, a.to)) ok = false;
      rel[x][y] = ok;
    }
  for (bool changed = true; changed;) {
    changed = false;
    for (Vertex x = 0; x < n; ++x)
      for (Vertex y = 0; y < p; ++y) {
        if (!rel[x][y]) continue;
        for (const auto& a : t.out[x]) {
          if (a.to.var) continue;
          bool found = false;
          for (const auto& b : s.out[y])
            if (b.dir == a.dir && !b.to.var && rel[a.to.idx][b.to.idx]) {
              found = true;
              break;
            }
          if (!found) {
            rel[x][y] = 0;
            changed = true;
            break;
          }
        }
      }
  }
  Vertex t0 = t.initials().at(0);
  for (Vertex y : s.initials())
    if (rel[t0][y]) return true;
  return false;
}

bool in_root_yields(const Sys& p, const Sys& s) {
  if (p.roots().size() != 1 || !p.initials().empty()) return false;
  return in_init_yields(uproot(p), uproot(s));
}

SubsumptionVerdict yield_subsumed(const Sys& s, const Sys& s2, unsigned k, std::size_t max_count) {
  if (s.rank != s2.rank) throw std::invalid_argument("yield_subsumed: rank mismatch");
  SubsumptionVerdict v;
  auto check = [&](const Sys& left, const Sys& right, const char* kind) {
    bool done = for_each_direct_resolution(left, k, [&](const Sys& t, const VertexMap&) {
      if (in_init_yields(t, right)) return true;
      v.result = Subsumption::Refuted;
      v.witness = std::string(kind) == "root" ? plant(t) : t;
      v.kind = kind;
      return false;
    }, max_count);
    if (!done && !v.refuted()) v.truncated = true;
  };
  check(s, s2, "init");
  if (!v.refuted()) check(uproot(s), uproot(s2), "root");
  return v;
}

bool bounded_yield_equal(const Sys& s, const Sys& s2, unsigned k, std::size_t max_count) {
  return !yield_subsumed(s, s2, k, max_count).refuted() && !yield_subsumed(s2, s, k, max_count).refuted();
}

std::optional<VertexMap> resolution_witness(const Sys& t, const VarMap& sigma, const Sys& s) {
  if (sigma.size() != t.rank) return std::nullopt;
  for (unsigned j : sigma)
    if (j < 1 || j > s.rank) return std::nullopt;
  return find_morphism(rename(sigma, s.rank, t), s);
}

bool is_small_map(const VarMap& sigma, unsigned n, std::size_t bound) {
  std::vector<std::size_t> count(n + 1, 0);
  for (unsigned j : sigma)
    if (j <= n && ++count[j] > bound) return false;
  return true;
}

// ---- flatten-resolutions ----

FrCheck check_flatten_resolution(const Nested& n, const Nested& t, const FlattenWitness& w) {
  if (w.delta.size() != t.size() || w.sigma.size() != t.size() || w.gamma.size() != t.size())
    throw std::invalid_argument("flatten-resolution witness does not cover the outer vertices");
  FrCheck r;
  if (!is_system(t)) {
    r.violation = "T is not a system";
    return r;
  }
  for (Vertex x = 0; x < t.size(); ++x)
    if (!is_system(t.labels[x])) {
      r.violation = "T(" + t.id(x) + ") is not a system";
      return r;
    }
  for (Vertex x = 0; x < t.size(); ++x) {
    if (w.delta[x] >= n.size()) throw std::invalid_argument("flatten-resolution witness: delta out of range");
    if (t.initial[x] && !n.initial[w.delta[x]]) {
      r.violation = "initial-preservation: delta(" + t.id(x) + ") is not initial";
      return r;
    }
  }
  for (Vertex x = 0; x < t.size(); ++x) {
    const Sys& in = t.labels[x];
    const Sys& target = n.labels[w.delta[x]];
    const VarMap& sg = w.sigma[x];
    bool range = sg.size() == in.rank;
    for (unsigned j : sg) range = range && j >= 1 && j <= target.rank;
    if (!range || w.gamma[x].size() != in.size()) {
      r.violation = "resolution: sigma or gamma of " + t.id(x) + " has the wrong shape";
      return r;
    }
    auto mc = check_morphism(rename(sg, target.rank, in), target, w.gamma[x]);
    if (!mc.morphism()) {
      r.violation = "resolution: gamma of " + t.id(x) + " is not a morphism: " + mc.witness;
      return r;
    }
    for (const auto& a : t.out[x]) {
      Target img = a.to.var ? a.to : Target::vertex(w.delta[a.to.idx]);
      if (!n.has_edge(w.delta[x], sg[a.dir - 1], img)) {
        r.violation = std::string(a.to.var ? "variable-edge" : "transition-edge") + ": edge (" + t.id(x) + "," +
                      std::to_string(a.dir) + ") has no image in direction " + std::to_string(sg[a.dir - 1]);
        return r;
      }
    }
  }
  r.ok = true;
  return r;
}

VertexMap flatten_resolution_to_direct(const Nested& n, const Nested& t, const FlattenWitness& w) {
  auto offn = flatten_offsets(n);
  VertexMap m;
  for (Vertex x = 0; x < t.size(); ++x)
    for (Vertex v = 0; v < t.labels[x].size(); ++v) m.push_back(offn[w.delta[x]] + w.gamma[x].at(v));
  return m;
}

FromDirect direct_to_flatten_resolution(const Nested& n, const Sys& r, const VertexMap& eta) {
  check_coherent(n);
  if (!is_system(r)) throw std::invalid_argument("direct_to_flatten_resolution: R is not a system");
  if (eta.size() != r.size()) throw std::invalid_argument("direct_to_flatten_resolution: map is not total");
  auto off = flatten_offsets(n);
  const std::size_t nr = r.size();
  VertexMap dl(nr), gm(nr);
  for (Vertex x = 0; x < nr; ++x) {
    auto it = std::upper_bound(off.begin(), off.end(), eta[x]);
    if (it == off.end()) throw std::invalid_argument("direct_to_flatten_resolution: map leaves flatten(N)");
    dl[x] = static_cast<Vertex>(it - off.begin() - 1);
    gm[x] = eta[x] - off[dl[x]];
  }

  // Each R-edge is explained as intra-subsystem, or through an outer direction j.
  struct Expl {
    bool intra = false;
    unsigned j = 0;
    Target to;
  };
  std::vector<std::vector<Expl>> ex(nr);
  for (Vertex x = 0; x < nr; ++x) {
    Vertex s = dl[x];
    const Sys& in = n.labels[s];
    for (unsigned d = 1; d <= r.vertex_rank(x); ++d) {
      Target f = r.succ(x, d).at(0);
      Expl e;
      e.to = f;
      if (!f.var && dl[f.idx] == s && in.has_edge(gm[x], d, Target::vertex(gm[f.idx]))) {
        e.intra = true;
      } else {
        for (unsigned j = 1; j <= in.rank && !e.j; ++j) {
          if (!in.has_edge(gm[x], d, Target::variable(j))) continue;
          bool ok = f.var ? n.has_edge(s, j, f)
                          : n.has_edge(s, j, Target::vertex(dl[f.idx])) && n.labels[dl[f.idx]].initial[gm[f.idx]];
          if (ok) e.j = j;
        }
        if (!e.j)
          throw std::invalid_argument("direct_to_flatten_resolution: edge (" + r.id(x) + "," + std::to_string(d) +
                                      ") has no image in flatten(N)");
      }
      ex[x].push_back(e);
    }
  }

  std::vector<std::vector<std::pair<unsigned, Target>>> dirs(n.size());
  std::vector<std::vector<Vertex>> members(n.size());
  VertexMap local(nr);
  for (Vertex x = 0; x < nr; ++x) {
    local[x] = static_cast<Vertex>(members[dl[x]].size());
    members[dl[x]].push_back(x);
    for (const auto& e : ex[x])
      if (!e.intra) dirs[dl[x]].push_back({e.j, e.to});
  }
  for (auto& d : dirs) {
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());
  }
  auto dir = [&](Vertex s, unsigned j, Target f) {
    auto it = std::lower_bound(dirs[s].begin(), dirs[s].end(), std::make_pair(j, f));
    return static_cast<unsigned>(it - dirs[s].begin()) + 1;
  };

  FromDirect out;
  out.t.rank = r.rank;
  std::vector<long> outer(nr, -1);
  for (Vertex x = 0; x < nr; ++x) {
    if (!n.labels[dl[x]].initial[gm[x]]) continue;
    Vertex s = dl[x];
    Sys in;
    in.rank = static_cast<unsigned>(dirs[s].size());
    for (Vertex y : members[s]) in.add_vertex(r.labels[y], y == x, false, r.id(y));
    for (Vertex y : members[s])
      for (unsigned d = 1; d <= ex[y].size(); ++d) {
        const auto& e = ex[y][d - 1];
        in.add_edge(local[y], d, e.intra ? Target::vertex(local[e.to.idx]) : Target::variable(dir(s, e.j, e.to)));
      }
    outer[x] = out.t.add_vertex(std::move(in), r.initial[x], false, r.id(x));
    VarMap sg;
    for (const auto& p : dirs[s]) sg.push_back(p.first);
    VertexMap g;
    for (Vertex y : members[s]) g.push_back(gm[y]);
    out.w.delta.push_back(s);
    out.w.sigma.push_back(sg);
    out.w.gamma.push_back(g);
    for (Vertex y : members[s]) out.phi.push_back(y);
  }
  for (Vertex x = 0; x < nr; ++x) {
    if (outer[x] < 0) continue;
    Vertex s = dl[x];
    for (unsigned i = 1; i <= dirs[s].size(); ++i) {
      Target f = dirs[s][i - 1].second;
      if (!f.var && outer[f.idx] < 0) throw std::logic_error("direct_to_flatten_resolution: entry vertex missing");
      out.t.add_edge(static_cast<Vertex>(outer[x]), i, f.var ? f : Target::vertex(static_cast<Vertex>(outer[f.idx])));
    }
  }
  if (r.initials().empty() || outer[r.initials()[0]] < 0)
    throw std::invalid_argument("direct_to_flatten_resolution: the initial vertex of R does not enter a subsystem");
  return out;
}

// ---- smallification ----

Smallification context_smallification(const Sys& t, const Sys& c, const VarMap& sigma, const ReachAlgebra& alg,
                                      const LetterMap& letters) {
  Vertex h = static_cast<Vertex>(hole_vertex(c));
  const unsigned m = c.labels[h].rank;
  if (t.rank != m || sigma.size() != m) throw std::invalid_argument("context_smallification: rank mismatch");
  auto ps = pieces(c);
  std::map<std::pair<unsigned, ReachValue>, unsigned> cls;
  Smallification r;
  for (unsigned i = 1; i <= m; ++i) {
    auto next = c.succ(h, i);
    if (next.size() != 1) throw std::invalid_argument("context_smallification: the context is not a system");
    // a direction leading straight back to the hole behaves as the identity piece
    ReachValue v = next[0] == Target::vertex(h) ? ReachValue::of(1, {1}) : rho(alg, letters, ps[i]);
    auto [it, fresh] = cls.try_emplace({sigma[i - 1], v}, r.m2 + 1);
    if (fresh) {
      ++r.m2;
      r.tau2.push_back(i);
    }
    r.tau.push_back(it->second);
  }
  return r;
}

SmallFlattenResolution smallify_flatten_resolution(const Nested& n, const Nested& t, const FlattenWitness& w,
                                                   const ReachAlgebra& alg, const LetterMap& letters) {
  if (n.rank != 0) throw std::invalid_argument("smallify_flatten_resolution: N is not closed");
  const std::size_t bound = alg.carrier_size(1);
  SmallFlattenResolution r{t, w, 0};
  for (;;) {
    long u = -1;
    for (Vertex x = 0; x < r.t.size() && u < 0; ++x)
      if (!is_small_map(r.w.sigma[x], n.labels[r.w.delta[x]].rank, bound)) u = x;
    if (u < 0) return r;
    Vertex uu = static_cast<Vertex>(u);
    const Sys inner = r.t.labels[uu];
    Nested ctx = r.t;
    ctx.labels[uu] = atomic(Symbol::hole(inner.rank));
    auto sm = context_smallification(inner, flatten(ctx), r.w.sigma[uu], alg, letters);
    r.t.labels[uu] = rename(sm.tau, sm.m2, inner);
    auto old = r.t.out[uu];
    r.t.out[uu].clear();
    for (unsigned i = 1; i <= sm.m2; ++i)
      for (const auto& a : old)
        if (a.dir == sm.tau2[i - 1]) r.t.add_edge(uu, i, a.to);
    r.w.sigma[uu] = compose_maps(r.w.sigma[uu], sm.tau2);
    ++r.iterations;
  }
}

// ---- profiles ----

Profile profile(const Sys& s, const ReachAlgebra& alg, const LetterMap& letters, bool root, bool small, unsigned k,
                unsigned max_m, std::size_t max_count) {
  Profile p;
  p.root = root;
  p.small = small;
  p.memory = k;
  p.max_m = max_m;
  const Sys base = root ? uproot(s) : s;
  const unsigned n = s.rank;
  const std::size_t bound = alg.carrier_size(1);
  for (unsigned m = 0; m <= max_m; ++m) {
    if (n == 0 && m > 0) break;
    VarMap sigma(m, 1);
    for (;;) {
      if (!small || is_small_map(sigma, n, bound)) {
        bool done = for_each_direct_resolution(dupname(sigma, base), k, [&](const Sys& t, const VertexMap&) {
          p.pairs.insert({rho(alg, letters, t), sigma});
          return true;
        }, max_count);
        p.truncated = p.truncated || !done;
      }
      // next map in lexicographic order
      std::size_t i = 0;
      while (i < m && sigma[i] == n) sigma[i++] = 1;
      if (i == m) break;
      ++sigma[i];
    }
  }
  return p;
}

}  // namespace regtree
