#include <doctest.h>

#include "regtree/expression.hpp"
#include "regtree/io.hpp"
#include "regtree/iso.hpp"
#include "regtree/random.hpp"
#include "regtree/transition_system.hpp"
#include "regtree/validate.hpp"

using namespace regtree;

namespace {

RankedAlphabet abc() { return {{{"a2", 2}, {"a1", 1}, {"b", 0}, {"c", 0}, {"a", 3}}}; }

}  // namespace

TEST_CASE("validate: minimal closed system") {
  Sys s;
  s.add_vertex({"c", 0}, true);
  auto v = validate(s);
  CHECK(v.ok());
  CHECK(v.system);
  CHECK(v.closed);
}

TEST_CASE("validate: expression system of rank 2") {
  auto s = from_expression("a2(x1, a2(b, x2))", abc());
  auto v = validate(s);
  CHECK(v.ok());
  CHECK(v.system);
  CHECK(s.rank == 2);
  CHECK(s.size() == 3);
}

TEST_CASE("validate: direction exceeds rank") {
  Sys s;
  Vertex v = s.add_vertex({"a2", 2}, true);
  Vertex w = s.add_vertex({"b", 0});
  s.add_edge(v, 1, Target::vertex(w));
  s.add_edge(v, 2, Target::vertex(w));
  s.add_edge(v, 3, Target::vertex(w));
  auto r = validate(s);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].kind == "direction");
  CHECK(r.violations[0].message.find("direction exceeds symbol rank") != std::string::npos);
}

TEST_CASE("validate: single-field mutations are flagged") {
  auto s = from_expression("a2(x1, a2(b, x2))", abc());
  REQUIRE(validate(s).system);
  const Vertex top = s.initials().at(0);
  {
    auto m = s;
    m.out[top][0].to = Target::variable(3);  // variable beyond rank
    CHECK(!validate(m).ok());
  }
  {
    auto m = s;
    m.out[top][0].to = Target::vertex(17);  // dangling vertex
    CHECK(!validate(m).ok());
  }
  {
    auto m = s;
    m.out[top][0].dir = 0;
    CHECK(!validate(m).ok());
  }
  {
    auto m = s;
    m.initial.pop_back();
    CHECK(!validate(m).ok());
  }
  {
    auto m = s;
    m.root[1] = 1;  // still a set-system, no longer a system
    auto v = validate(m);
    CHECK(v.ok());
    CHECK(!v.system);
  }
  {
    auto m = s;
    m.add_edge(top, 1, Target::variable(2));  // two edges in one direction
    auto v = validate(m);
    CHECK(v.ok());
    CHECK(!v.system);
  }
}

TEST_CASE("from_expression: shapes") {
  auto s = from_expression("a2(x1,x2)", abc());
  CHECK(s.size() == 1);
  CHECK(s.rank == 2);
  CHECK(s.out[0].size() == 2);
  CHECK(s.has_edge(0, 1, Target::variable(1)));
  CHECK(s.has_edge(0, 2, Target::variable(2)));

  auto t = from_expression("a2(b,c)", abc());
  CHECK(t.size() == 3);
  CHECK(t.rank == 0);
  Vertex root = t.initials().at(0);
  CHECK(t.labels[root].name == "a2");
  auto s1 = t.succ(root, 1), s2 = t.succ(root, 2);
  REQUIRE(s1.size() == 1);
  REQUIRE(s2.size() == 1);
  CHECK(t.labels[s1[0].idx].name == "b");
  CHECK(t.labels[s2[0].idx].name == "c");

  auto u = from_expression("a1(a1(x1))", abc());
  CHECK(u.size() == 2);
  CHECK(validate(u).system);
  Vertex top = u.initials().at(0);
  auto next = u.succ(top, 1).at(0);
  CHECK(!next.var);
  CHECK(u.succ(next.idx, 1).at(0) == Target::variable(1));
}

TEST_CASE("from_expression: errors carry positions") {
  try {
    from_expression("a2(b)", abc());
    FAIL("expected an error");
  } catch (const ExpressionError& e) {
    CHECK(e.position == 0);
  }
  try {
    from_expression("a2(b, zz)", abc());
    FAIL("expected an error");
  } catch (const ExpressionError& e) {
    CHECK(e.position == 6);
  }
}

TEST_CASE("from_expression: sums point at every initial vertex") {
  auto c = from_expression("[](b + c)", abc());
  CHECK(c.size() == 3);
  CHECK(c.initials().size() == 1);
  CHECK(c.out[c.initials()[0]].size() == 2);
  CHECK(validate(c).ok());
  CHECK(!validate(c).system);
}

TEST_CASE("from_expression: output always validates as a system") {
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    auto s = random_system<Symbol>(rng, 2, symbol_gen(abc()));
    CHECK(validate(s).system);
  }
  for (const char* e : {"a(x3,x1,x1)", "a2(a1(b), a2(c, x1))", "a1(x1)", "b"}) CHECK(validate(from_expression(e, abc())).system);
}

TEST_CASE("transition systems: decode") {
  Sys s;
  s.add_vertex({"{}_0", 0}, true);
  auto ts = decode_ts(s);
  CHECK(ts.size() == 1);
  CHECK(ts.transitions.empty());

  auto two = from_expression("{p}_2({}_0, {}_0)");
  // both directions to one child
  Sys d;
  Vertex r = d.add_vertex({"{p}_2", 2}, true);
  Vertex c = d.add_vertex({"{}_0", 0});
  d.add_edge(r, 1, Target::vertex(c));
  d.add_edge(r, 2, Target::vertex(c));
  auto dts = decode_ts(d);
  CHECK(dts.transitions.size() == 1);
  CHECK(dts.props[0] == std::vector<std::string>{"p"});
  CHECK(decode_ts(two).transitions.size() == 2);

  Sys loop;
  Vertex l = loop.add_vertex({"{}_1", 1}, true);
  loop.add_edge(l, 1, Target::vertex(l));
  auto lts = decode_ts(loop);
  CHECK(lts.transitions == std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}});

  CHECK_THROWS_AS(decode_ts(from_expression("a2(b,c)", abc())), std::invalid_argument);
  CHECK_THROWS_AS(decode_ts(from_expression("{}_1(x1)")), std::invalid_argument);
}

TEST_CASE("transition systems: encode") {
  TransitionSystem one;
  one.add_state({});
  auto s = encode_ts(one);
  CHECK(s.size() == 1);
  CHECK(s.labels[0].name == "{}_0");
  CHECK(s.labels[0].rank == 0);

  TransitionSystem ij;
  auto i = ij.add_state({}, "i");
  auto j = ij.add_state({}, "j");
  ij.add_transition(i, j);
  ij.add_transition(i, i);
  auto e = encode_ts(ij);
  CHECK(e.labels[i].rank == 2);
  CHECK(e.succ(i, 1).at(0) == Target::vertex(i));
  CHECK(e.succ(i, 2).at(0) == Target::vertex(j));
  CHECK(validate(e).system);
}

TEST_CASE("transition systems: round trip up to isomorphism") {
  Rng rng(5);
  for (int k = 0; k < 200; ++k) {
    auto ts = random_ts(rng, 6, {"p", "q"});
    CHECK(ts_isomorphic(decode_ts(encode_ts(ts)), ts));
    CHECK(ts_isomorphic(decode_ts(encode_ts(ts, true)), ts));
  }
}

TEST_CASE("json round trip") {
  Rng rng(3);
  for (int k = 0; k < 50; ++k) {
    auto s = random_set_system<Symbol>(rng, 2, symbol_gen(abc()));
    auto back = system_from_json(to_json(s), nullptr);
    CHECK(back == s);
    auto alpha = abc();
    CHECK(system_from_json(to_json(s), &alpha) == s);
  }
  CHECK(alphabet_from_json(to_json(abc())).symbols == abc().symbols);
  auto ts = random_ts(rng, 5, {"p"});
  CHECK(ts_from_json(to_json(ts)).transitions == ts.transitions);
}

TEST_CASE("json: malformed input reports location") {
  json j = json::parse(R"({"rank":0,"vertices":[{"id":"a","label":"b"}],"edges":[{"src":"a","dir":1,"dst":"zz"}]})");
  try {
    system_from_json(j);
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(e.where == "/edges/0");
  }
}

TEST_CASE("canonical form and isomorphism") {
  Rng rng(9);
  for (int k = 0; k < 100; ++k) {
    auto s = random_set_system<Symbol>(rng, 2, symbol_gen(abc()));
    // permute vertices
    std::vector<Vertex> perm(s.size());
    for (Vertex v = 0; v < s.size(); ++v) perm[v] = v;
    std::shuffle(perm.begin(), perm.end(), rng);
    Sys p;
    p.rank = s.rank;
    std::vector<Vertex> inv(s.size());
    for (Vertex v = 0; v < s.size(); ++v) inv[perm[v]] = v;
    for (Vertex i = 0; i < s.size(); ++i) p.add_vertex(s.labels[inv[i]], s.initial[inv[i]], s.root[inv[i]]);
    for (Vertex v = 0; v < s.size(); ++v)
      for (const auto& a : s.out[v]) p.add_edge(perm[v], a.dir, a.to.var ? a.to : Target::vertex(perm[a.to.idx]));
    CHECK(isomorphic(s, p));
    CHECK(canonical_form(s) == canonical_form(p));
    auto q = p;
    q.initial[0] = !q.initial[0];
    CHECK(!isomorphic(s, q));
    CHECK(canonical_form(s) != canonical_form(q));
  }
}
