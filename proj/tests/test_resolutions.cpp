#include <doctest.h>

#include <map>

#include "regtree/equivalence.hpp"
#include "regtree/expression.hpp"
#include "regtree/monad.hpp"
#include "regtree/random.hpp"
#include "regtree/resolution.hpp"
#include "regtree/validate.hpp"
#include "oracles.hpp"

using namespace regtree;
using namespace oracle;

namespace {

RankedAlphabet abc() { return {{{"a2", 2}, {"a1", 1}, {"b", 0}, {"c", 0}}}; }

GenParams small(unsigned max_vertices = 3) {
  GenParams p;
  p.max_vertices = max_vertices;
  return p;
}

bool contains_class(const std::vector<Sys>& v, const Sys& t) {
  for (const auto& x : v)
    if (unfold_equivalent(x, t).equivalent) return true;
  return false;
}

}  // namespace

TEST_CASE("viable vertices") {
  Sys s;
  Vertex a = s.add_vertex({"a1", 1}, true);
  Vertex b = s.add_vertex({"a1", 1});
  Vertex c = s.add_vertex({"b", 0});
  s.add_edge(a, 1, Target::vertex(b));
  s.add_edge(a, 1, Target::vertex(c));
  auto ok = viable(s);
  CHECK(ok == std::vector<char>{1, 0, 1});
  auto r = direct_resolutions(s, 0);
  REQUIRE(r.systems.size() == 1);
  CHECK(unfold_equivalent(r.systems[0], from_expression("a1(b)", abc())).equivalent);
}

TEST_CASE("systems resolve to themselves") {
  Rng rng(60);
  for (int i = 0; i < 100; ++i) {
    auto s = random_system<Symbol>(rng, 1, symbol_gen(abc()), small(4));
    for (unsigned k : {0u, 1u, 2u}) {
      auto r = direct_resolutions(s, k);
      REQUIRE(r.systems.size() == 1);
      CHECK(unfold_equivalent(r.systems[0], s).equivalent);
    }
  }
}

TEST_CASE("direct resolutions: the non-compositional example") {
  auto c = from_expression("[](b + c)", abc());
  auto s = from_expression("a2(x1,x1)", abc());
  auto cs = plug(c, s);
  auto r = direct_resolutions(cs, 0);
  CHECK(!r.truncated);
  REQUIRE(r.systems.size() == 4);
  for (const char* e : {"a2(b,b)", "a2(b,c)", "a2(c,b)", "a2(c,c)"}) CHECK(contains_class(r.systems, from_expression(e, abc())));
  auto one = direct_resolutions(s, 0);
  REQUIRE(one.systems.size() == 1);
  CHECK(unfold_equivalent(one.systems[0], s).equivalent);
  // the context alone has two
  CHECK(direct_resolutions(c, 0).systems.size() == 2);
}

TEST_CASE("memory grows the resolution set") {
  // a1-loop choosing b or c at each visit of the loop vertex
  Sys s;
  Vertex l = s.add_vertex({"a2", 2}, true);
  Vertex b = s.add_vertex({"b", 0});
  Vertex c = s.add_vertex({"c", 0});
  Vertex m = s.add_vertex({"a2", 2});
  s.add_edge(l, 1, Target::vertex(b));
  s.add_edge(l, 1, Target::vertex(c));
  s.add_edge(l, 2, Target::vertex(m));
  s.add_edge(m, 1, Target::vertex(b));
  s.add_edge(m, 1, Target::vertex(c));
  s.add_edge(m, 2, Target::vertex(l));
  auto r0 = direct_resolutions(s, 0), r1 = direct_resolutions(s, 1), r3 = direct_resolutions(s, 3);
  CHECK(r0.systems.size() == 4);
  CHECK(r1.systems.size() >= r0.systems.size());
  for (const auto& t : r0.systems) CHECK(contains_class(r3.systems, t));
  for (const auto& t : r3.systems) CHECK(in_init_yields(t, s));
}

TEST_CASE("enumerated resolutions are yields; membership matches the oracle") {
  Rng rng(61);
  for (int i = 0; i < 200; ++i) {
    auto s = random_set_system<Symbol>(rng, 1, symbol_gen(abc()), small(3));
    std::size_t n = 0;
    for_each_direct_resolution(s, 1, [&](const Sys& t, const VertexMap& m) {
      CHECK(is_system(t));
      CHECK(check_morphism(t, s, m).morphism());
      CHECK(in_init_yields(t, s));
      return ++n < 50;
    });
    auto t = random_system<Symbol>(rng, 1, symbol_gen(abc()), small(3));
    CHECK(in_init_yields(t, s) == yield_oracle(t, s));
    if (auto r = sample_direct_resolution(rng, s, 2)) {
      CHECK(check_morphism(r->first, s, r->second).morphism());
      auto u = random_unfolding(rng, r->first, 2);
      CHECK(in_init_yields(u, s));
    }
  }
}

TEST_CASE("root yields are planted init-yields of the uprooted system") {
  Rng rng(62);
  for (int i = 0; i < 100; ++i) {
    auto s = random_set_system<Symbol>(rng, 1, symbol_gen(abc()), small(3));
    auto y = yields(s, 1);
    auto u = direct_resolutions(uproot(s), 1);
    REQUIRE(y.root.systems.size() == u.systems.size());
    for (std::size_t j = 0; j < u.systems.size(); ++j) {
      CHECK(y.root.systems[j] == plant(u.systems[j]));
      CHECK(in_root_yields(y.root.systems[j], s));
    }
    if (s.roots().empty()) CHECK(y.root.systems.empty());
  }
}

TEST_CASE("yield_subsumed") {
  Rng rng(63);
  int refuted = 0;
  for (int i = 0; i < 200; ++i) {
    auto s2 = random_set_system<Symbol>(rng, 1, symbol_gen(abc()), small(3));
    CHECK(!yield_subsumed(s2, s2, 1).refuted());
    auto w = weaken(rng, s2);
    CHECK(!yield_subsumed(w, s2, 1).refuted());
    auto u = random_unfolding(rng, s2, 2);
    CHECK(bounded_yield_equal(u, s2, 1));
    auto other = random_set_system<Symbol>(rng, 1, symbol_gen(abc()), small(3));
    auto v = yield_subsumed(other, s2, 1);
    if (v.refuted()) {
      ++refuted;
      if (v.kind == "init") {
        CHECK(in_init_yields(v.witness, other));
        CHECK(!in_init_yields(v.witness, s2));
      } else {
        CHECK(in_root_yields(v.witness, other));
        CHECK(!in_root_yields(v.witness, s2));
      }
    }
  }
  CHECK(refuted > 20);
}

TEST_CASE("resolutions track variables") {
  auto s = from_expression("a2(x1,x1)", abc());
  auto t = from_expression("a2(x1,x2)", abc());
  CHECK(resolution_witness(t, {1, 1}, s).has_value());
  CHECK(!resolution_witness(t, {1, 2}, s).has_value());
  CHECK(!direct_resolutions(s, 0).systems.empty());
  CHECK(is_small_map({1, 1, 1}, 1, 3));
  CHECK(!is_small_map({1, 1, 1, 1}, 1, 3));
}

TEST_CASE("flatten-resolutions: identity witness") {
  Rng rng(64);
  for (int i = 0; i < 100; ++i) {
    auto n = random_nested(rng, abc(), 1, 2, small(3), true);
    FlattenWitness w;
    for (Vertex v = 0; v < n.size(); ++v) {
      w.delta.push_back(v);
      w.sigma.push_back(identity_map(n.labels[v].rank));
      VertexMap g;
      for (Vertex x = 0; x < n.labels[v].size(); ++x) g.push_back(x);
      w.gamma.push_back(g);
    }
    CHECK(check_flatten_resolution(n, n, w).ok);
    auto m = flatten_resolution_to_direct(n, n, w);
    auto f = flatten(n);
    for (Vertex x = 0; x < f.size(); ++x) CHECK(m[x] == x);
    CHECK(check_morphism(f, f, m).morphism());
  }
}

TEST_CASE("flatten-resolutions: the example over C[S]") {
  auto c = from_expression("[](b + c)", abc());
  auto s = from_expression("a2(x1,x1)", abc());
  auto n = plug_nesting(c, s);
  Vertex hole = static_cast<Vertex>(hole_vertex(c));
  Vertex vb = 0, vc = 0;
  for (Vertex v = 0; v < c.size(); ++v) {
    if (c.labels[v].name == "b") vb = v;
    if (c.labels[v].name == "c") vc = v;
  }
  Nested t;
  Vertex tt = t.add_vertex(from_expression("a2(x1,x2)", abc()), true);
  Vertex tb = t.add_vertex(atomic(Symbol{"b", 0}));
  Vertex tc = t.add_vertex(atomic(Symbol{"c", 0}));
  t.add_edge(tt, 1, Target::vertex(tb));
  t.add_edge(tt, 2, Target::vertex(tc));
  FlattenWitness w{{hole, vb, vc}, {{1, 1}, {}, {}}, {{0}, {0}, {0}}};
  auto ok = check_flatten_resolution(n, t, w);
  CHECK(ok.ok);
  auto m = flatten_resolution_to_direct(n, t, w);
  CHECK(check_morphism(flatten(t), flatten(n), m).morphism());
  CHECK(unfold_equivalent(flatten(t), from_expression("a2(b,c)", abc())).equivalent);

  auto bad = w;
  bad.sigma[0] = {1, 2};
  auto v = check_flatten_resolution(n, t, bad);
  CHECK(!v.ok);
  CHECK(v.violation.find("resolution") == 0);
  auto bad2 = w;
  bad2.delta[1] = vc;
  CHECK(!check_flatten_resolution(n, t, bad2).ok);

  // and back from the direct resolution a2(b,c)
  auto r = from_expression("a2(b,c)", abc());
  auto eta = find_morphism(r, flatten(n));
  REQUIRE(eta);
  auto fd = direct_to_flatten_resolution(n, r, *eta);
  CHECK(check_flatten_resolution(n, fd.t, fd.w).ok);
  Vertex top = fd.t.initials().at(0);
  CHECK(fd.w.delta[top] == hole);
  CHECK(fd.w.sigma[top] == VarMap{1, 1});
  CHECK(fd.t.labels[top].rank == 2);
}

TEST_CASE("flatten-resolutions: round trip through direct resolutions") {
  Rng rng(65);
  int done = 0;
  for (int i = 0; i < 300 && done < 100; ++i) {
    auto n = random_nested(rng, abc(), static_cast<unsigned>(pick(rng, 2)), 2, small(3));
    auto f = flatten(n);
    auto r = sample_direct_resolution(rng, f, static_cast<unsigned>(pick(rng, 3)));
    if (!r) continue;
    ++done;
    auto fd = direct_to_flatten_resolution(n, r->first, r->second);
    auto chk = check_flatten_resolution(n, fd.t, fd.w);
    INFO(chk.violation);
    CHECK(chk.ok);
    auto ft = flatten(fd.t);
    CHECK(check_morphism(ft, f, flatten_resolution_to_direct(n, fd.t, fd.w)).morphism());
    CHECK(check_morphism(ft, r->first, fd.phi).morphism());
    CHECK(unfold_equivalent(ft, r->first).equivalent);
  }
  CHECK(done == 100);
}

TEST_CASE("flatten-resolutions: atomic inner systems") {
  Rng rng(66);
  for (int i = 0; i < 50; ++i) {
    auto s = random_set_system<Symbol>(rng, 1, symbol_gen(abc()), small(3));
    auto n = lift(s, [](const Symbol& a) { return atomic(a); });
    auto r = sample_direct_resolution(rng, flatten(n), 0);
    if (!r) continue;
    auto fd = direct_to_flatten_resolution(n, r->first, r->second);
    CHECK(check_flatten_resolution(n, fd.t, fd.w).ok);
    CHECK(fd.t.size() == r->first.size());
    for (Vertex v = 0; v < fd.t.size(); ++v) CHECK(fd.t.labels[v].size() == 1);
  }
}

TEST_CASE("context smallification") {
  ReachAlgebra alg;
  auto letters = reach_letters({"b"});
  // already small: a bijection
  auto c = from_expression("a2([](c, b), c)", RankedAlphabet{{{"a2", 2}, {"b", 0}, {"c", 0}, {"[]", 2}}});
  auto t = from_expression("a2(x1,x2)", abc());
  auto sm = context_smallification(t, c, {1, 2}, alg, letters);
  CHECK(sm.m2 == 2);
  CHECK(sm.tau == VarMap{1, 2});
  // equal pieces under equal sigma merge
  auto c2 = from_expression("a2([](c, c), c)", RankedAlphabet{{{"a2", 2}, {"b", 0}, {"c", 0}, {"[]", 2}}});
  auto sm2 = context_smallification(t, c2, {1, 1}, alg, letters);
  CHECK(sm2.m2 == 1);
  CHECK(sm2.tau == VarMap{1, 1});
  CHECK(rho(alg, letters, plug(c2, t)) == rho(alg, letters, plug(c2, rename(compose_maps(sm2.tau2, sm2.tau), 2, t))));

  Rng rng(67);
  RankedAlphabet a{{{"a2", 2}, {"a1", 1}, {"b", 0}, {"c", 0}}};
  for (int i = 0; i < 200; ++i) {
    unsigned m = 1 + static_cast<unsigned>(pick(rng, 6));
    unsigned n = 1 + static_cast<unsigned>(pick(rng, 2));
    auto cc = random_system_context(rng, a, m, small(4));
    auto tt = random_system<Symbol>(rng, m, symbol_gen(a), small(3));
    VarMap sigma(m);
    for (auto& x : sigma) x = 1 + static_cast<unsigned>(pick(rng, n));
    auto r = context_smallification(tt, cc, sigma, alg, letters);
    CHECK(compose_maps(compose_maps(sigma, r.tau2), r.tau) == sigma);
    CHECK(is_small_map(compose_maps(sigma, r.tau2), n, alg.carrier_size(1)));
    auto both = compose_maps(r.tau2, r.tau);
    CHECK(rho(alg, letters, plug(cc, tt)) == rho(alg, letters, plug(cc, rename(both, m, tt))));
  }
}

TEST_CASE("profiles: the T_n family") {
  ReachAlgebra alg;
  auto letters = reach_letters({"b"});
  RankedAlphabet a{{{"a", 0}, {"a2", 2}, {"b", 0}}};
  std::string e = "a";
  std::vector<Profile> ps;
  for (unsigned n = 1; n <= 4; ++n) {
    e = "a2(" + e + ",x1)";
    auto t = from_expression(e, a);
    auto p = profile(t, alg, letters, false, false, 0, 5);
    CHECK(!p.truncated);
    std::set<ProfileEntry> want;
    for (unsigned m = 1; m <= 5; ++m)
      for (unsigned mask = 1; mask < (1u << m); ++mask) {
        std::vector<unsigned> xs;
        for (unsigned i = 0; i < m; ++i)
          if (mask >> i & 1) xs.push_back(i + 1);
        if (xs.size() <= n) want.insert({ReachValue::of(m, xs), VarMap(m, 1)});
      }
    CHECK(p.pairs == want);
    ps.push_back(p);
  }
  for (unsigned m = 2; m <= 4; ++m)
    for (unsigned n = 1; n < m; ++n) {
      ProfileEntry full{ReachValue::full(m), VarMap(m, 1)};
      CHECK(ps[m - 1].pairs.count(full) == 1);
      CHECK(ps[n - 1].pairs.count(full) == 0);
    }
}

TEST_CASE("profiles: closed systems") {
  ReachAlgebra alg;
  auto letters = reach_letters({"b"});
  Rng rng(68);
  for (int i = 0; i < 50; ++i) {
    auto s = random_set_system<Symbol>(rng, 0, symbol_gen(abc()), small(4));
    auto p = profile(s, alg, letters, false, false, 1, 3);
    auto q = profile(s, alg, letters, false, true, 1, 3);
    CHECK(p.pairs == q.pairs);
    for (const auto& e : p.pairs) CHECK(e.sigma.empty());
  }
}

TEST_CASE("smallify_flatten_resolution") {
  ReachAlgebra alg;
  auto letters = reach_letters({"b"});
  Rng rng(69);
  int done = 0, shrunk = 0;
  for (int i = 0; i < 1000 && done < 100; ++i) {
    auto n = random_nested(rng, abc(), 0, 2, small(3));
    auto r = sample_direct_resolution(rng, flatten(n), 1);
    if (!r) continue;
    auto fd = direct_to_flatten_resolution(n, r->first, r->second);
    std::vector<Vertex> cand;
    for (Vertex v = 0; v < fd.t.size(); ++v)
      if (fd.t.labels[v].rank > 0) cand.push_back(v);
    if (cand.empty()) continue;
    ++done;
    auto same = smallify_flatten_resolution(n, fd.t, fd.w, alg, letters);
    bool was_small = true;
    for (Vertex v = 0; v < fd.t.size(); ++v)
      was_small = was_small && is_small_map(fd.w.sigma[v], n.labels[fd.w.delta[v]].rank, 3);
    if (was_small) {
      CHECK(same.iterations == 0);
      CHECK(same.t == fd.t);
    }
    Vertex u = cand[pick(rng, cand.size())];
    inflate(rng, fd.t, fd.w, u, 4 + static_cast<unsigned>(pick(rng, 3)));
    REQUIRE(check_flatten_resolution(n, fd.t, fd.w).ok);
    auto sm = smallify_flatten_resolution(n, fd.t, fd.w, alg, letters);
    shrunk += sm.iterations > 0;
    auto chk = check_flatten_resolution(n, sm.t, sm.w);
    INFO(chk.violation);
    CHECK(chk.ok);
    for (Vertex v = 0; v < sm.t.size(); ++v) CHECK(is_small_map(sm.w.sigma[v], n.labels[sm.w.delta[v]].rank, 3));
    CHECK(rho(alg, letters, flatten(fd.t)) == rho(alg, letters, flatten(sm.t)));
  }
  CHECK(done == 100);
  CHECK(shrunk > 50);
}

TEST_CASE("bounded yield-equivalence is a congruence") {
  Rng rng(70);
  for (int i = 0; i < 100; ++i) {
    auto n = random_nested(rng, abc(), 1, 2, small(3));
    auto n2 = n;
    for (auto& in : n2.labels) in = coin(rng, 0.5) ? random_unfolding(rng, in, 2) : sum(in, in);
    for (Vertex v = 0; v < n.size(); ++v) REQUIRE(bounded_yield_equal(n.labels[v], n2.labels[v], 1));
    CHECK(bounded_yield_equal(flatten(n), flatten(n2), 1));
  }
}

TEST_CASE("context decomposition preserves yields") {
  Rng rng(71);
  for (int i = 0; i < 100; ++i) {
    auto c = random_context(rng, abc(), static_cast<unsigned>(pick(rng, 3)), small(3));
    auto back = make_context(pieces(c));
    CHECK(bounded_yield_equal(c, back, 1));
    CHECK(find_morphism(back, c, {true}).has_value());
  }
}
