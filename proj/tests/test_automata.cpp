#include <doctest.h>

#include <fstream>
#include <functional>
#include <sstream>

#include "regtree/automata.hpp"
#include "regtree/io.hpp"
#include "regtree/random.hpp"
#include "regtree/transition_system.hpp"
#include "oracles.hpp"

using namespace regtree;
using namespace oracle;

namespace {

RankedAlphabet avoid_letters() { return {{{"a2", 2}, {"a1", 1}, {"b1", 1}, {"c0", 0}}}; }

bool on_cycle(const Sys& s, Vertex x) {
  std::vector<char> seen(s.size(), 0);
  std::vector<Vertex> st{x};
  while (!st.empty()) {
    auto v = st.back();
    st.pop_back();
    for (const auto& a : s.out[v]) {
      if (a.to.idx == x) return true;
      if (!seen[a.to.idx]) {
        seen[a.to.idx] = 1;
        st.push_back(a.to.idx);
      }
    }
  }
  return false;
}

// Threshold presentations with weighted letters w<i>_1 and w<i>_2.
Presentation weighted_threshold(unsigned h, unsigned theta) {
  auto p = threshold_presentation(h, theta);
  for (int i = 0; i <= static_cast<int>(h); ++i) {
    p.letters.push_back({"w" + std::to_string(i) + "_1", 1, {{i}}, -1});
    p.letters.push_back({"w" + std::to_string(i) + "_2", 2, {{i, i}}, -1});
  }
  return p;
}

int weight(const Symbol& l) { return l.name[0] == 'w' ? l.name[1] - '0' : 99; }

void check_accepting_run(const UnfoldAutomaton& a, const Sys& s, const AcceptVerdict& v) {
  auto rc = check_run(a, s, v.run);
  INFO(rc.witness);
  CHECK(rc.ok);
}

}  // namespace

TEST_CASE("zielonka on small games") {
  ParityGame g;
  auto a = g.add(0, 1), b = g.add(1, 2), c = g.add(0, 3);
  g.moves[a] = {b, c};
  g.moves[b] = {a};
  g.moves[c] = {c};
  auto sol = zielonka(g);
  CHECK(sol.winner[a] == 0);
  CHECK(sol.winner[b] == 0);
  CHECK(sol.winner[c] == 1);
  CHECK(sol.strategy[a] == static_cast<long>(b));
  // dead ends lose for their owner
  ParityGame d;
  auto e = d.add(0, 0), f = d.add(1, 0);
  auto s2 = zielonka(d);
  CHECK(s2.winner[e] == 1);
  CHECK(s2.winner[f] == 0);
}

TEST_CASE("zielonka equals positional strategy enumeration on 500 games") {
  Rng rng(7);
  for (int i = 0; i < 500; ++i) {
    auto g = random_game(rng);
    auto sol = zielonka(g);
    auto ref = brute_winners(g);
    for (std::size_t v = 0; v < g.owner.size(); ++v) {
      CHECK(sol.winner[v] == ref[v]);
      CHECK(strategy_wins(g, sol.strategy, sol.winner[v], v));
    }
  }
}

TEST_CASE("compiled AVOID accepts exactly when no b is reachable") {
  auto w = compile_algebra(avoid_presentation());
  auto d = with_dpa(w, threshold_dpa(1, 1));
  CHECK(check_automaton(w).empty());
  CHECK(check_automaton(d).empty());
  std::size_t count = 0;
  for_each_closed_system(avoid_letters(), 3, [&](const Sys& s) {
    const bool expect = no_b_reachable(s);
    auto vw = accepts(w, s);
    auto vd = accepts(d, s);
    CHECK(vw.accepted == expect);
    CHECK(vd.accepted == expect);
    if (vw.accepted) check_accepting_run(w, s, vw);
    if (vd.accepted) check_accepting_run(d, s, vd);
    ++count;
  });
  CHECK(count > 1000);
  Rng rng(11);
  GenParams gp;
  gp.max_vertices = 7;
  gp.var_prob = 0;
  for (int i = 0; i < 500; ++i) {
    auto s = random_system<Symbol>(rng, 0, symbol_gen(avoid_letters()), gp);
    CHECK(accepts(w, s).accepted == no_b_reachable(s));
    CHECK(accepts(d, s).accepted == no_b_reachable(s));
  }
}

TEST_CASE("Wilke and DPA engines agree on threshold and coBuchi") {
  Rng rng(13);
  GenParams gp;
  gp.max_vertices = 6;
  gp.var_prob = 0;
  for (unsigned h = 1; h <= 3; ++h)
    for (unsigned theta = 0; theta <= h; ++theta) {
      auto p = weighted_threshold(h, theta);
      auto w = compile_algebra(p);
      auto d = with_dpa(w, threshold_dpa(h, theta));
      for (int i = 0; i < 100; ++i) {
        auto s = random_system<Symbol>(rng, 0, symbol_gen(p.alphabet()), gp);
        bool expect = true;
        for (auto v : bfs_reachable(s))
          if (weight(s.labels[v]) < static_cast<int>(theta)) expect = false;
        auto vw = accepts(w, s), vd = accepts(d, s);
        CHECK(vw.accepted == expect);
        CHECK(vd.accepted == expect);
        if (vw.accepted) check_accepting_run(w, s, vw);
        if (vd.accepted) check_accepting_run(d, s, vd);
      }
    }
  auto p = cobuchi_presentation();
  auto w = compile_algebra(p);
  auto d = with_dpa(w, cobuchi_dpa());
  for (int i = 0; i < 500; ++i) {
    auto s = random_system<Symbol>(rng, 0, symbol_gen(p.alphabet()), gp);
    bool expect = true;
    for (auto v : bfs_reachable(s))
      if (s.labels[v].name == "b1" && on_cycle(s, v)) expect = false;
    auto vw = accepts(w, s), vd = accepts(d, s);
    CHECK(vw.accepted == expect);
    CHECK(vd.accepted == expect);
    if (vw.accepted) check_accepting_run(w, s, vw);
    if (vd.accepted) check_accepting_run(d, s, vd);
  }
}

TEST_CASE("check_run rejects foreign tuples and partial runs") {
  auto w = compile_algebra(avoid_presentation());
  auto d = with_dpa(w, threshold_dpa(1, 1));
  Sys s;
  s.add_vertex({"a1", 1}, true);
  s.add_vertex({"c0", 0});
  s.add_edge(0, 1, Target::vertex(1));
  for (const auto* a : {&w, &d}) {
    auto v = accepts(*a, s);
    REQUIRE(v.accepted);
    auto run = v.run;
    for (auto& [key, t] : run.choice)
      if (key.first == 1) t = {0};  // rej is not a transition of c0
    CHECK_FALSE(check_run(*a, s, run).ok);
    Run partial;
    CHECK_THROWS_AS(check_run(*a, s, partial), std::invalid_argument);
  }
  // an empty transition set makes the vertex losing
  auto e = w;
  e.delta_plus["a1"].clear();
  CHECK_FALSE(accepts(e, s).accepted);
  CHECK_FALSE(accepts(with_dpa(e, threshold_dpa(1, 1)), s).accepted);
  // a symbol outside the alphabet is an error
  Sys bad;
  bad.add_vertex({"zz", 0}, true);
  CHECK_THROWS_AS(accepts(w, bad), std::invalid_argument);
}

TEST_CASE("acceptance is invariant under unfolding") {
  Rng rng(17);
  auto w = compile_algebra(cobuchi_presentation());
  auto d = with_dpa(w, cobuchi_dpa());
  GenParams gp;
  gp.max_vertices = 4;
  gp.var_prob = 0;
  for (int i = 0; i < 500; ++i) {
    auto s = random_system<Symbol>(rng, 0, symbol_gen(cobuchi_presentation().alphabet()), gp);
    auto u = random_unfolding(rng, s, 2);
    CHECK(accepts(w, s).accepted == accepts(w, u).accepted);
    CHECK(accepts(d, s).accepted == accepts(d, u).accepted);
  }
}

TEST_CASE("automaton json round trip and errors") {
  auto w = compile_algebra(avoid_presentation());
  auto d = with_dpa(w, threshold_dpa(1, 1));
  for (const auto* a : {&w, &d}) {
    auto j = to_json(*a);
    auto back = automaton_from_json(j);
    CHECK(to_json(back) == j);
  }
  auto j = to_json(d);
  j["delta"]["a2"][0] = json::array({"ok"});
  try {
    automaton_from_json(j);
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(e.where == "/delta/a2/0");
  }
  j = to_json(d);
  j["delta"]["a1"][0][0] = "maybe";
  CHECK_THROWS_AS(automaton_from_json(j), InputError);
  j = to_json(d);
  j["omega"]["kind"] = "rabin";
  CHECK_THROWS_AS(automaton_from_json(j), InputError);
}

TEST_CASE("bisimulation closure") {
  UnfoldAutomaton a;
  a.x1 = {"dead", "ok"};
  a.x0 = {"rej", "acc"};
  a.alphabet = ts_alphabet({{}}, 3);
  a.delta_plus["{}_2"] = {{1, 0}};
  auto c = bisim_closure(a);
  CHECK(c.delta_plus["{}_1"].empty());
  CHECK(c.delta_plus["{}_2"] == std::vector<std::vector<int>>{{0, 1}, {1, 0}});
  // surjections [3] -> [2] composed with (ok, dead)
  CHECK(c.delta_plus["{}_3"] ==
        std::vector<std::vector<int>>{{0, 0, 1}, {0, 1, 0}, {0, 1, 1}, {1, 0, 0}, {1, 0, 1}, {1, 1, 0}});
  auto cc = bisim_closure(c);
  CHECK(cc.delta_plus == c.delta_plus);

  UnfoldAutomaton plain = a;
  plain.alphabet.symbols.push_back({"a1", 1});
  CHECK_THROWS_AS(bisim_closure(plain), std::invalid_argument);
}

TEST_CASE("closed AVOID is bisimulation invariant") {
  Rng rng(19);
  auto w = bisim_closure(compile_algebra(avoid_ts_presentation(8)));
  auto d = with_dpa(w, threshold_dpa(1, 1));
  for (int i = 0; i < 500; ++i) {
    auto ts = random_ts(rng, 4, {"b"});
    auto vt = bisimilar_variant(rng, ts);
    auto s = encode_ts(ts), v = encode_ts(vt);
    const bool expect = no_b_reachable(s);
    CHECK(accepts(w, s).accepted == expect);
    CHECK(accepts(w, v).accepted == expect);
    CHECK(accepts(d, v).accepted == expect);
  }
}

TEST_CASE("disjunctive formula") {
  auto a = bisim_closure(compile_algebra(avoid_ts_presentation(2)));
  auto f = emit_disjunctive_formula(a);
  std::ifstream in(std::string(REGTREE_SOURCE_DIR) + "/tests/golden/avoid_formula.txt");
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(f == ss.str());
  UnfoldAutomaton e = a;
  for (auto& [k, v] : e.delta_plus) v.clear();
  for (auto& [k, v] : e.delta_zero) v.clear();
  CHECK(emit_disjunctive_formula(e) == "δ({b}) = false\nδ({}) = false\n");
}
