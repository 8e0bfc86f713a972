#include "regtree/examples.hpp"

#include "regtree/algebra.hpp"
#include "regtree/automata.hpp"
#include "regtree/equivalence.hpp"
#include "regtree/expression.hpp"
#include "regtree/iso.hpp"
#include "regtree/monad.hpp"
#include "regtree/parallel.hpp"
#include "regtree/random.hpp"
#include "regtree/resolution.hpp"
#include "regtree/validate.hpp"
#include "regtree/yield_algebra.hpp"

namespace regtree {

namespace {

RankedAlphabet abc() { return {{{"a2", 2}, {"a1", 1}, {"b", 0}, {"c", 0}, {"a3", 3}}}; }

GenParams small(unsigned n) {
  GenParams p;
  p.max_vertices = n;
  return p;
}

ExampleOutcome verdict(bool ok, std::string detail = {}) { return {ok, ok ? std::string("ok") : std::move(detail)}; }

// Counts failures over seeded random instances.
template <class F>
ExampleOutcome sweep(std::uint64_t seed, int count, F f) {
  Rng rng(seed);
  for (int i = 0; i < count; ++i)
    if (!f(rng)) return {false, "instance " + std::to_string(i) + " fails"};
  return {true, std::to_string(count) + " instances"};
}

Sys a1_cycle(unsigned n, const std::string& label = "a1") {
  Sys s;
  for (unsigned i = 0; i < n; ++i) s.add_vertex({label, 1}, i == 0);
  for (Vertex i = 0; i < n; ++i) s.add_edge(i, 1, Target::vertex((i + 1) % n));
  return s;
}

// p -> q, q -> q
Sys a1_lead_in(const std::string& label = "a1") {
  Sys s;
  s.add_vertex({label, 1}, true);
  s.add_vertex({label, 1});
  s.add_edge(0, 1, Target::vertex(1));
  s.add_edge(1, 1, Target::vertex(1));
  return s;
}

// Rank-2 set-system over b1, a2, c3 with a root and a doubled direction.
Sys mixed_set_system() {
  Sys s;
  s.rank = 2;
  Vertex u = s.add_vertex({"a2", 2}, true, false, "u");
  Vertex v = s.add_vertex({"b1", 1}, false, false, "v");
  Vertex w = s.add_vertex({"c3", 3}, false, true, "w");
  s.add_edge(u, 1, Target::vertex(v));
  s.add_edge(u, 1, Target::variable(2));
  s.add_edge(u, 2, Target::variable(1));
  s.add_edge(v, 1, Target::vertex(u));
  s.add_edge(v, 1, Target::variable(1));
  s.add_edge(w, 1, Target::variable(1));
  s.add_edge(w, 2, Target::variable(2));
  s.add_edge(w, 3, Target::vertex(u));
  return s;
}

bool contains_class(const std::vector<Sys>& v, const Sys& t) {
  for (const auto& x : v)
    if (unfold_equivalent(x, t).equivalent) return true;
  return false;
}

bool reaches_symbol(const Sys& s, const std::string& name) {
  auto seen = reachable(s, false);
  for (Vertex v = 0; v < s.size(); ++v)
    if (seen[v] && s.labels[v].name == name) return true;
  return false;
}

std::vector<Example> catalogue() {
  std::vector<Example> ex;
  auto add = [&](std::string id, std::string module, std::string claim, std::function<ExampleOutcome()> f) {
    ex.push_back({std::move(id), std::move(module), std::move(claim), std::move(f)});
  };

  // ---- core model ----
  add("expression-rank-2", "core_model", "a2(x1, a2(b, x2)) is a valid system of rank 2", [] {
    auto s = from_expression("a2(x1, a2(b, x2))", abc());
    auto v = validate(s);
    return verdict(v.ok() && v.system && s.rank == 2, "validation or rank differs");
  });
  add("expression-a2-b-c", "core_model", "a2(b,c) has three vertices with edges to b and c", [] {
    auto t = from_expression("a2(b,c)", abc());
    Vertex r = t.initials().at(0);
    auto s1 = t.succ(r, 1), s2 = t.succ(r, 2);
    bool ok = t.size() == 3 && s1.size() == 1 && s2.size() == 1 && t.labels[s1[0].idx].name == "b" &&
              t.labels[s2[0].idx].name == "c";
    return verdict(ok, "unexpected shape");
  });

  // ---- morphisms ----
  add("folding-cycle-onto-loop", "morphisms", "both vertices of an a1 two-cycle map onto a single loop", [] {
    auto c = check_morphism(a1_cycle(2), a1_cycle(1), {0, 0});
    return verdict(c.locally_surjective(), c.witness);
  });
  add("locally-surjective-composition", "morphisms", "the composite of locally surjective morphisms is locally surjective",
      [] {
        VertexMap a{0, 1, 0, 1}, b{0, 0};
        bool pre = check_morphism(a1_cycle(4), a1_cycle(2), a).locally_surjective() &&
                   check_morphism(a1_cycle(2), a1_cycle(1), b).locally_surjective();
        auto c = check_morphism(a1_cycle(4), a1_cycle(1), compose(a, b));
        return verdict(pre && c.locally_surjective(), c.witness);
      });

  // ---- monad ----
  add("flatten-unit-atomic", "monad_ops", "flatten of atomic(atomic(a)) is atomic(a)", [] {
    for (const auto& sym : abc().symbols) {
      auto a = atomic(sym);
      if (!isomorphic(flatten(atomic(a)), a)) return verdict(false, "fails for " + sym.name);
    }
    return verdict(true);
  });
  add("flatten-atomic-labels", "monad_ops", "flatten of the lift of atomic reproduces the outer system", [] {
    return sweep(101, 100, [](Rng& rng) {
      auto s = random_set_system<Symbol>(rng, 2, symbol_gen(abc()), small(4));
      return isomorphic(flatten(map_labels(s, [](const Symbol& a) { return atomic(a); })), s);
    });
  });
  add("flatten-associative", "monad_ops", "flatten o flatten = flatten o lift(flatten) on 3-level nestings", [] {
    return sweep(102, 100, [](Rng& rng) {
      auto s3 = random_nested3(rng, abc(), static_cast<unsigned>(pick(rng, 4)), 3, small(4));
      return isomorphic(flatten(flatten(s3)), flatten(map_labels(s3, [](const Nested& n) { return flatten(n); })));
    });
  });
  add("sum-as-target", "monad_ops", "in [](b + c) the hole has two successors; a set-system, not a system", [] {
    auto c = from_expression("[](b + c)", abc());
    auto v = validate(c);
    Vertex h = static_cast<Vertex>(hole_vertex(c));
    return verdict(v.ok() && !v.system && c.succ(h, 1).size() == 2, "unexpected shape");
  });
  add("dupname-leaves-systems", "monad_ops", "dupname of a system need not be a system", [] {
    auto dup = dupname({1, 1}, from_expression("a2(x1,b)", abc()));
    auto v = validate(dup);
    return verdict(v.ok() && !v.system, "dupname stayed a system");
  });
  add("fuproot-morphism", "monad_ops", "flatten(fuproot N) maps locally surjectively onto uproot(flatten N)", [] {
    return sweep(103, 200, [](Rng& rng) {
      auto n = random_nested(rng, abc(), static_cast<unsigned>(pick(rng, 3)), 3, small(4));
      return check_morphism(flatten(fuproot(n)), uproot(flatten(n)), fuproot_map(n)).locally_surjective();
    });
  });
  add("plug-rank-2", "monad_ops", "plugging a2(a1(x2), x1) into a1([](b, a1(c)))", [] {
    auto r = plug(from_expression("a1([](b, a1(c)))", abc()), from_expression("a2(a1(x2), x1)", abc()));
    return verdict(isomorphic(r, from_expression("a1(a2(a1(a1(c)), b))", abc())), "unexpected plug result");
  });
  add("context-of-a1-pieces", "monad_ops", "Context(a1(x1), a1(x1)) has an initial piece, a unary hole and a piece behind it",
      [] {
        auto p = from_expression("a1(x1)", abc());
        auto c = make_context({p, p});
        Vertex h = static_cast<Vertex>(hole_vertex(c));
        bool ok = validate(c).ok() && c.rank == 0 && c.size() == 3 && c.labels[h] == Symbol::hole(1) &&
                  c.initials().size() == 1 && c.labels[c.initials()[0]].name == "a1" && c.succ(h, 1).size() == 1;
        return verdict(ok, "unexpected shape");
      });
  add("pieces-recompose", "monad_ops", "Context(pieces C) maps locally surjectively onto C", [] {
    return sweep(104, 100, [](Rng& rng) {
      auto c = random_context(rng, abc(), static_cast<unsigned>(pick(rng, 3)), small(4));
      return check_morphism(make_context(pieces(c)), c, recomposition_map(c)).locally_surjective();
    });
  });
  add("pieces-yield-equal", "monad_ops", "C and Context(pieces C) have the same bounded yields", [] {
    return sweep(105, 200, [](Rng& rng) {
      auto c = random_context(rng, abc(), static_cast<unsigned>(pick(rng, 3)), small(3));
      return bounded_yield_equal(c, make_context(pieces(c)), 1);
    });
  });

  // ---- resolutions ----
  add("four-direct-resolutions", "resolutions", "[](b + c)[a2(x1,x1)] has the four classes a2(b,b), a2(b,c), a2(c,b), a2(c,c)",
      [] {
        auto r = direct_resolutions(plug(from_expression("[](b + c)", abc()), from_expression("a2(x1,x1)", abc())), 0);
        bool ok = r.systems.size() == 4 && !r.truncated;
        for (const char* e : {"a2(b,b)", "a2(b,c)", "a2(c,b)", "a2(c,c)"})
          ok = ok && contains_class(r.systems, from_expression(e, abc()));
        return verdict(ok, std::to_string(r.systems.size()) + " classes");
      });
  add("one-direct-resolution", "resolutions", "a2(x1,x1) alone has one direct resolution, itself", [] {
    auto s = from_expression("a2(x1,x1)", abc());
    auto r = direct_resolutions(s, 0);
    return verdict(r.systems.size() == 1 && unfold_equivalent(r.systems[0], s).equivalent,
                   std::to_string(r.systems.size()) + " classes");
  });
  add("system-among-yields", "resolutions", "a2(b1(x1), x1) is a direct resolution of a rank-2 set-system over b1, a2, c3",
      [] {
        auto s1 = mixed_set_system();
        RankedAlphabet a{{{"a2", 2}, {"b1", 1}, {"c3", 3}}};
        auto s2 = from_expression("a2(b1(x1), x1)", a, 2);
        bool ok = validate(s1).set_system && !validate(s1).system && validate(s2).system && in_init_yields(s2, s1) &&
                  contains_class(direct_resolutions(s1, 0).systems, s2);
        return verdict(ok, "not found among the yields");
      });
  add("locally-surjective-yield-consistent", "resolutions", "an unfolding and its system subsume each other's yields", [] {
    return sweep(106, 100, [](Rng& rng) {
      auto s = random_set_system<Symbol>(rng, 1, symbol_gen(abc()), small(3));
      return bounded_yield_equal(random_unfolding(rng, s, 2), s, 1);
    });
  });
  add("flatten-resolution-witness", "resolutions", "A2(b,c) with the hole, constant [2]->[1], is a flatten-resolution of C[S]",
      [] {
        auto c = from_expression("[](b + c)", abc());
        auto n = plug_nesting(c, from_expression("a2(x1,x1)", abc()));
        Vertex hole = static_cast<Vertex>(hole_vertex(c)), vb = 0, vc = 0;
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
        auto chk = check_flatten_resolution(n, t, w);
        return verdict(chk.ok, chk.violation);
      });
  add("flatten-resolution-from-direct", "resolutions", "a2(b,c) over C[S] gives back T with the constant renaming", [] {
    auto c = from_expression("[](b + c)", abc());
    auto n = plug_nesting(c, from_expression("a2(x1,x1)", abc()));
    auto r = from_expression("a2(b,c)", abc());
    auto eta = find_morphism(r, flatten(n));
    if (!eta) return verdict(false, "no morphism into C[S]");
    auto fd = direct_to_flatten_resolution(n, r, *eta);
    Vertex top = fd.t.initials().at(0);
    bool ok = check_flatten_resolution(n, fd.t, fd.w).ok && fd.w.delta[top] == static_cast<Vertex>(hole_vertex(c)) &&
              fd.w.sigma[top] == VarMap{1, 1} && fd.t.labels[top].rank == 2;
    return verdict(ok, "unexpected witness");
  });
  add("closed-profile-small", "resolutions", "on closed systems profile and small-profile coincide", [] {
    ReachAlgebra alg;
    auto letters = reach_letters({"b"});
    return sweep(107, 50, [&](Rng& rng) {
      auto s = random_set_system<Symbol>(rng, 0, symbol_gen(abc()), small(4));
      return profile(s, alg, letters, false, false, 1, 3).pairs == profile(s, alg, letters, false, true, 1, 3).pairs;
    });
  });
  add("profile-of-t-n", "resolutions", "profile(T_n) = {(X, const_m) | 1 <= |X| <= n} for n <= 4, m <= 5", [] {
    ReachAlgebra alg;
    auto letters = reach_letters({"b"});
    RankedAlphabet a{{{"a", 0}, {"a2", 2}, {"b", 0}}};
    std::string e = "a";
    for (unsigned n = 1; n <= 4; ++n) {
      e = "a2(" + e + ",x1)";
      auto p = profile(from_expression(e, a), alg, letters, false, false, 0, 5);
      std::set<ProfileEntry> want;
      for (unsigned m = 1; m <= 5; ++m)
        for (unsigned mask = 1; mask < (1u << m); ++mask) {
          std::vector<unsigned> xs;
          for (unsigned i = 0; i < m; ++i)
            if (mask >> i & 1) xs.push_back(i + 1);
          if (xs.size() <= n) want.insert({ReachValue::of(m, xs), VarMap(m, 1)});
        }
      if (p.truncated || p.pairs != want) return verdict(false, "mismatch at n = " + std::to_string(n));
    }
    return verdict(true);
  });
  add("profiles-separate-t-m-t-n", "resolutions", "T_m and T_n differ at ([m], const) for m > n", [] {
    ReachAlgebra alg;
    auto letters = reach_letters({"b"});
    RankedAlphabet a{{{"a", 0}, {"a2", 2}, {"b", 0}}};
    std::vector<Profile> ps;
    std::string e = "a";
    for (unsigned n = 1; n <= 4; ++n) {
      e = "a2(" + e + ",x1)";
      ps.push_back(profile(from_expression(e, a), alg, letters, false, false, 0, 4));
    }
    for (unsigned m = 2; m <= 4; ++m)
      for (unsigned n = 1; n < m; ++n) {
        ProfileEntry full{ReachValue::full(m), VarMap(m, 1)};
        if (ps[m - 1].pairs.count(full) != 1 || ps[n - 1].pairs.count(full) != 0)
          return verdict(false, "m = " + std::to_string(m) + ", n = " + std::to_string(n));
      }
    return verdict(true);
  });

  // ---- equivalences ----
  add("unfold-equivalent-pair", "equivalences", "an a1 two-cycle and a lead-in loop share a folding and an unfolding", [] {
    auto s1 = a1_cycle(2), s2 = a1_lead_in(), f = a1_cycle(1);
    VertexMap e1{0, 0}, e2{0, 0};
    auto u = pullback(s1, e1, s2, e2, true);
    bool ok = unfold_equivalent(s1, s2).equivalent && check_morphism(s1, f, e1).locally_surjective() &&
              check_morphism(s2, f, e2).locally_surjective() && check_morphism(u.apex, s1, u.pi).morphism() &&
              check_morphism(u.apex, s2, u.pi2).morphism();
    return verdict(ok, "missing folding or unfolding");
  });
  add("unfold-pair-bisimilar", "equivalences", "the same pair over transition-system symbols is bisimilar", [] {
    auto v = bisimilar_systems(a1_cycle(2, "{p}_1"), a1_lead_in("{p}_1"));
    return verdict(v.bisimilar, v.reason);
  });

  // ---- algebras ----
  add("rho-all-variables", "algebras", "rho(a(x1..xk)) = {1..k} for a outside R", [] {
    ReachAlgebra alg;
    auto letters = reach_letters({"b"});
    for (unsigned k = 1; k <= 4; ++k) {
      std::string e = "a(";
      std::vector<unsigned> all;
      for (unsigned i = 1; i <= k; ++i) {
        e += (i > 1 ? ",x" : "x") + std::to_string(i);
        all.push_back(i);
      }
      if (!(rho(alg, letters, from_expression(e + ")")) == ReachValue::of(k, all)))
        return verdict(false, "k = " + std::to_string(k));
    }
    return verdict(true);
  });
  add("rho-x3-x1-x1", "algebras", "rho(a(x3,x1,x1)) = {1,3} for a outside R", [] {
    ReachAlgebra alg;
    auto v = rho(alg, reach_letters({"b"}), from_expression("a(x3,x1,x1)"));
    return verdict(v == ReachValue::of(3, {1, 3}), v.str());
  });
  add("rho-unreachable-bottom", "algebras", "an unreachable bottom vertex does not change rho", [] {
    ReachAlgebra alg;
    auto letters = reach_letters({"b"});
    RankedAlphabet a{{{"a2", 2}, {"b", 0}, {"c", 0}}};
    auto s = from_expression("a2(c, x1)", a);
    auto t = s;
    t.add_vertex({"b", 0});
    return verdict(rho(alg, letters, t) == rho(alg, letters, s), rho(alg, letters, t).str());
  });
  add("recognise-some-r", "algebras", "P = {bottom} accepts exactly the systems reaching an R-symbol", [] {
    ReachAlgebra alg;
    auto letters = reach_letters({"b1"});
    std::vector<ReachValue> bot{ReachValue::bot(0)};
    bool ok = true;
    for_each_closed_system(RankedAlphabet{{{"a2", 2}, {"b1", 1}, {"c0", 0}}}, 3,
                           [&](const Sys& s) { ok = ok && recognises(alg, letters, bot, s) == reaches_symbol(s, "b1"); });
    return verdict(ok, "disagrees with graph search");
  });
  add("recognise-no-r", "algebras", "P = {empty} accepts exactly the systems reaching no R-symbol", [] {
    ReachAlgebra alg;
    auto letters = reach_letters({"b1"});
    std::vector<ReachValue> empty{ReachValue::of(0, {})};
    bool ok = true;
    for_each_closed_system(RankedAlphabet{{{"a2", 2}, {"b1", 1}, {"c0", 0}}}, 3,
                           [&](const Sys& s) { ok = ok && recognises(alg, letters, empty, s) == !reaches_symbol(s, "b1"); });
    return verdict(ok, "disagrees with graph search");
  });
  add("rho-unfold-invariant", "algebras", "rho agrees on unfold-equivalent systems", [] {
    ReachAlgebra alg;
    auto letters = reach_letters({"b"});
    return sweep(108, 200, [&](Rng& rng) {
      auto s = random_system<Symbol>(rng, 2, symbol_gen(abc()), small(4));
      return rho(alg, letters, s) == rho(alg, letters, random_unfolding(rng, s, 2));
    });
  });

  // ---- yield algebras ----
  add("low-ranks-deterministic", "yield_algebras", "the deterministic elements of rank 1 are Y1 and of rank 0 are Y0", [] {
    for (const auto& p : {avoid_presentation(), threshold_presentation(3, 2), cobuchi_presentation()}) {
      auto d1 = det_elements(p, 1), d0 = det_elements(p, 0);
      if (d1.size() != p.y1.size() || d0.size() != p.y0.size()) return verdict(false, "sizes differ");
      for (int y = 0; y < static_cast<int>(p.y1.size()); ++y)
        if (std::find(d1.begin(), d1.end(), ElementRep::one(y)) == d1.end()) return verdict(false, "missing " + p.y1[y]);
      for (int z = 0; z < static_cast<int>(p.y0.size()); ++z)
        if (std::find(d0.begin(), d0.end(), ElementRep::zero(z)) == d0.end()) return verdict(false, "missing " + p.y0[z]);
    }
    return verdict(true);
  });
  add("delta-rank-1", "yield_algebras", "for a letter of rank 1, delta is the letter itself", [] {
    auto p = avoid_presentation();
    auto a1 = letter_rep(p, "a1");
    auto d = build_delta(p, {1, 1}, a1, {1, 1});
    return verdict(d.delta == a1 && d.ok(), d.witness);
  });

  // ---- automata ----
  add("delta-zero-singleton", "automata", "compiled terminal transitions are the singleton of the letter value", [] {
    auto p = avoid_presentation();
    auto a = compile_algebra(p);
    for (const auto& l : p.letters)
      if (l.rank == 0 && a.delta_zero[l.name] != std::vector<int>{l.value0}) return verdict(false, l.name);
    return verdict(true);
  });
  return ex;
}

}  // namespace

const std::vector<Example>& worked_examples() {
  static const std::vector<Example> ex = catalogue();
  return ex;
}

std::vector<ExampleResult> run_examples(unsigned workers) {
  const auto& ex = worked_examples();
  return parallel_map<ExampleResult>(ex.size(), workers, [&](std::size_t i) {
    ExampleResult r{ex[i].id, ex[i].module, ex[i].claim, {}, false};
    try {
      auto o = ex[i].run();
      r.pass = o.pass;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.detail = std::string("exception: ") + e.what();
    }
    return r;
  });
}

}  // namespace regtree
