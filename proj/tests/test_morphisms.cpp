#include <doctest.h>

#include "regtree/expression.hpp"
#include "regtree/morphism.hpp"
#include "regtree/random.hpp"

using namespace regtree;

namespace {

RankedAlphabet alpha() { return {{{"a2", 2}, {"a1", 1}, {"b", 0}}}; }

// Oracle: every total map, checked one by one.
template <class F>
void all_maps(std::size_t n, std::size_t m, F f) {
  if (m == 0) {
    if (n == 0) f(VertexMap{});
    return;
  }
  VertexMap x(n, 0);
  for (;;) {
    f(x);
    std::size_t i = 0;
    while (i < n && ++x[i] == m) x[i++] = 0;
    if (i == n) return;
  }
}

// Two-vertex a1 cycle and the one-vertex loop it folds onto.
Sys two_cycle() {
  Sys s;
  Vertex u = s.add_vertex({"a1", 1}, true, false, "u");
  Vertex w = s.add_vertex({"a1", 1}, false, false, "w");
  s.add_edge(u, 1, Target::vertex(w));
  s.add_edge(w, 1, Target::vertex(u));
  return s;
}

Sys loop() {
  Sys s;
  Vertex l = s.add_vertex({"a1", 1}, true, false, "l");
  s.add_edge(l, 1, Target::vertex(l));
  return s;
}

}  // namespace

TEST_CASE("check_morphism: identity is locally surjective") {
  Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    auto s = random_set_system<Symbol>(rng, 1, symbol_gen(alpha()));
    VertexMap id(s.size());
    for (Vertex v = 0; v < s.size(); ++v) id[v] = v;
    CHECK(check_morphism(s, s, id).locally_surjective());
  }
}

TEST_CASE("check_morphism: folding a cycle onto a loop") {
  auto u = two_cycle();
  auto f = loop();
  auto r = check_morphism(u, f, {0, 0});
  CHECK(r.locally_surjective());
}

TEST_CASE("check_morphism: initial sent to non-initial") {
  auto u = two_cycle();
  auto r = check_morphism(u, u, {1, 0});
  CHECK(!r.morphism());
  CHECK(r.witness.find("initial") != std::string::npos);
}

TEST_CASE("check_morphism: rank mismatch rejected") {
  auto a = from_expression("a1(x1)", alpha());
  auto b = from_expression("b", alpha());
  CHECK_THROWS_AS(check_morphism(a, b, {0}), std::invalid_argument);
}

TEST_CASE("find_morphism agrees with exhaustive enumeration") {
  Rng rng(2);
  GenParams p;
  p.max_vertices = 4;
  for (int i = 0; i < 300; ++i) {
    auto s = random_set_system<Symbol>(rng, 1, symbol_gen(alpha()), p);
    auto t = random_set_system<Symbol>(rng, 1, symbol_gen(alpha()), p);
    if (i % 3 == 0) t = s;
    std::size_t brute = 0, brute_ls = 0;
    all_maps(s.size(), t.size(), [&](const VertexMap& m) {
      auto c = check_morphism(s, t, m);
      brute += c.morphism();
      brute_ls += c.locally_surjective();
    });
    std::size_t found = 0, found_ls = 0;
    for_each_morphism<Symbol>(s, t, [&](const VertexMap& m) {
      CHECK(check_morphism(s, t, m).morphism());
      ++found;
      return true;
    });
    for_each_morphism<Symbol>(s, t, [&](const VertexMap&) { ++found_ls; return true; }, {true});
    CHECK(found == brute);
    CHECK(found_ls == brute_ls);
    CHECK(find_morphism(s, t).has_value() == (brute > 0));
  }
}

TEST_CASE("find_morphism: examples") {
  auto s = from_expression("a2(x1, a1(b))", alpha());
  CHECK(find_morphism(s, s).has_value());
  CHECK(find_morphism(two_cycle(), loop()).has_value());
  auto x1 = from_expression("a2(x1, b)", alpha(), 2);
  auto x2 = from_expression("a2(x2, b)", alpha(), 2);
  CHECK(!find_morphism(x1, x2).has_value());
}

TEST_CASE("compose: chains and local surjectivity") {
  auto u = two_cycle();
  // four-cycle -> two-cycle -> loop
  Sys four;
  for (int i = 0; i < 4; ++i) four.add_vertex({"a1", 1}, i == 0);
  for (Vertex i = 0; i < 4; ++i) four.add_edge(i, 1, Target::vertex((i + 1) % 4));
  VertexMap a{0, 1, 0, 1}, b{0, 0};
  REQUIRE(check_morphism(four, u, a).locally_surjective());
  REQUIRE(check_morphism(u, loop(), b).locally_surjective());
  auto c = compose(a, b);
  CHECK(check_morphism(four, loop(), c).locally_surjective());
  VertexMap id{0, 1};
  CHECK(compose(id, id) == id);
}

TEST_CASE("pullback: identities and the two-cycle square") {
  auto u = two_cycle();
  VertexMap id{0, 1};
  auto p = pullback(u, id, u, id);
  CHECK(p.apex.size() == 2);
  CHECK(check_morphism(p.apex, u, p.pi).locally_surjective());

  VertexMap eta{0, 0};
  auto q = pullback(u, eta, u, eta);
  CHECK(q.apex.size() == 4);
  CHECK(compose(q.pi, eta) == compose(q.pi2, eta));
  // (u,u) steps to (w,w), (u,w) to (w,u)
  for (Vertex v = 0; v < 4; ++v) {
    auto s = q.apex.succ(v, 1);
    REQUIRE(s.size() == 1);
    CHECK(q.pi[s[0].idx] == 1 - q.pi[v]);
    CHECK(q.pi2[s[0].idx] == 1 - q.pi2[v]);
  }
}

TEST_CASE("rename_transport: both formulations agree") {
  auto s = from_expression("a2(x1,x2)", alpha());
  auto t = from_expression("a2(x1,x1)", alpha());
  auto r = rename_transport({1, 1}, {0}, s, t);
  CHECK(r.via_rename);
  CHECK(r.agree());

  Rng rng(4);
  GenParams p;
  p.max_vertices = 3;
  int positives = 0;
  for (int i = 0; i < 400; ++i) {
    unsigned m = 1 + pick(rng, 3), n = 1 + pick(rng, 2);
    VarMap sigma(m);
    for (auto& x : sigma) x = 1 + pick(rng, n);
    auto a = random_set_system<Symbol>(rng, m, symbol_gen(alpha()), p);
    auto b = random_set_system<Symbol>(rng, n, symbol_gen(alpha()), p);
    if (i % 2 == 0) b = rename(sigma, n, a);
    all_maps(a.size(), b.size(), [&](const VertexMap& rho) {
      auto c = rename_transport(sigma, rho, a, b);
      CHECK(c.agree());
      positives += c.via_rename;
    });
  }
  CHECK(positives > 0);
}
