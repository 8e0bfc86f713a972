#include "regtree/yield_algebra.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "regtree/io.hpp"
#include "regtree/transition_system.hpp"

namespace regtree {

// ---- presentation basics ----

int Presentation::find1(const std::string& n) const {
  for (std::size_t i = 0; i < y1.size(); ++i)
    if (y1[i] == n) return static_cast<int>(i);
  return -1;
}

int Presentation::find0(const std::string& n) const {
  for (std::size_t i = 0; i < y0.size(); ++i)
    if (y0[i] == n) return static_cast<int>(i);
  return -1;
}

const Presentation::Letter* Presentation::letter(const std::string& n) const {
  for (const auto& l : letters)
    if (l.name == n) return &l;
  return nullptr;
}

RankedAlphabet Presentation::alphabet() const {
  RankedAlphabet a;
  for (const auto& l : letters) a.symbols.push_back({l.name, l.rank});
  return a;
}

namespace {

using nlohmann::json;

int lookup(const std::vector<std::string>& names, const json& v, const std::string& where) {
  if (!v.is_string()) throw InputError("expected an element name", where);
  auto it = std::find(names.begin(), names.end(), v.get<std::string>());
  if (it == names.end()) throw InputError("unknown element '" + v.get<std::string>() + "'", where);
  return static_cast<int>(it - names.begin());
}

std::vector<std::string> names_from(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) throw InputError(std::string("missing array '") + key + "'", "");
  std::vector<std::string> r;
  for (std::size_t i = 0; i < j[key].size(); ++i) {
    if (!j[key][i].is_string()) throw InputError("expected a name", std::string("/") + key + "/" + std::to_string(i));
    r.push_back(j[key][i].get<std::string>());
  }
  return r;
}

std::vector<std::vector<int>> table_from(const json& j, const char* key, const std::vector<std::string>& rows,
                                         const std::vector<std::string>& cols, const std::vector<std::string>& vals) {
  const std::string base = std::string("/") + key;
  if (!j.contains(key) || !j[key].is_object()) throw InputError("missing table", base);
  std::vector<std::vector<int>> t(rows.size(), std::vector<int>(cols.size(), -1));
  for (std::size_t a = 0; a < rows.size(); ++a) {
    const std::string w = base + "/" + rows[a];
    if (!j[key].contains(rows[a]) || !j[key][rows[a]].is_object()) throw InputError("missing row", w);
    for (std::size_t b = 0; b < cols.size(); ++b) {
      const auto& row = j[key][rows[a]];
      if (!row.contains(cols[b])) throw InputError("missing entry", w + "/" + cols[b]);
      t[a][b] = lookup(vals, row[cols[b]], w + "/" + cols[b]);
    }
  }
  return t;
}

json table_to(const std::vector<std::vector<int>>& t, const std::vector<std::string>& rows,
              const std::vector<std::string>& cols, const std::vector<std::string>& vals) {
  json r = json::object();
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b) r[rows[a]][cols[b]] = vals[t[a][b]];
  return r;
}

std::string tuple_str(const Presentation& p, const std::vector<int>& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + p.y1[t[i]];
  return s + ")";
}

}  // namespace

Presentation presentation_from_json(const json& j) {
  if (!j.is_object()) throw InputError("expected a presentation object", "");
  Presentation p;
  p.y1 = names_from(j, "Y1");
  p.y0 = names_from(j, "Y0");
  p.product = table_from(j, "product", p.y1, p.y1, p.y1);
  p.act = table_from(j, "act", p.y1, p.y0, p.y0);
  p.meet1 = table_from(j, "meet1", p.y1, p.y1, p.y1);
  p.meet0 = table_from(j, "meet0", p.y0, p.y0, p.y0);
  p.omega.assign(p.y1.size(), -1);
  if (!j.contains("omega") || !j["omega"].is_object()) throw InputError("missing table", "/omega");
  for (auto it = j["omega"].begin(); it != j["omega"].end(); ++it) {
    int e = lookup(p.y1, json(it.key()), "/omega/" + it.key());
    p.omega[e] = lookup(p.y0, it.value(), "/omega/" + it.key());
  }
  p.accept.assign(p.y0.size(), 0);
  if (!j.contains("P") || !j["P"].is_array()) throw InputError("missing array", "/P");
  for (std::size_t i = 0; i < j["P"].size(); ++i) p.accept[lookup(p.y0, j["P"][i], "/P/" + std::to_string(i))] = 1;
  if (j.contains("letters")) {
    if (!j["letters"].is_array()) throw InputError("expected an array", "/letters");
    for (std::size_t i = 0; i < j["letters"].size(); ++i) {
      const auto& l = j["letters"][i];
      const std::string w = "/letters/" + std::to_string(i);
      if (!l.is_object() || !l.contains("name") || !l["name"].is_string()) throw InputError("letter needs a name", w);
      if (!l.contains("rank") || !l["rank"].is_number_unsigned()) throw InputError("letter needs a rank", w);
      Presentation::Letter L;
      L.name = l["name"].get<std::string>();
      L.rank = l["rank"].get<unsigned>();
      if (L.rank == 0) {
        if (!l.contains("value0")) throw InputError("rank-0 letter needs value0", w);
        L.value0 = lookup(p.y0, l["value0"], w + "/value0");
      } else {
        if (!l.contains("decomps") || !l["decomps"].is_array()) throw InputError("letter needs decomps", w);
        for (std::size_t d = 0; d < l["decomps"].size(); ++d) {
          const auto& t = l["decomps"][d];
          const std::string wd = w + "/decomps/" + std::to_string(d);
          if (!t.is_array() || t.size() != L.rank) throw InputError("tuple length differs from the rank", wd);
          std::vector<int> tup;
          for (std::size_t c = 0; c < t.size(); ++c) tup.push_back(lookup(p.y1, t[c], wd + "/" + std::to_string(c)));
          L.decomps.push_back(tup);
        }
      }
      p.letters.push_back(L);
    }
  }
  return p;
}

json to_json(const Presentation& p) {
  json j;
  j["Y1"] = p.y1;
  j["Y0"] = p.y0;
  j["product"] = table_to(p.product, p.y1, p.y1, p.y1);
  j["act"] = table_to(p.act, p.y1, p.y0, p.y0);
  j["meet1"] = table_to(p.meet1, p.y1, p.y1, p.y1);
  j["meet0"] = table_to(p.meet0, p.y0, p.y0, p.y0);
  j["omega"] = json::object();
  for (std::size_t e = 0; e < p.y1.size(); ++e)
    if (p.omega[e] >= 0) j["omega"][p.y1[e]] = p.y0[p.omega[e]];
  j["P"] = json::array();
  for (std::size_t z = 0; z < p.y0.size(); ++z)
    if (p.accept[z]) j["P"].push_back(p.y0[z]);
  j["letters"] = json::array();
  for (const auto& l : p.letters) {
    json lj{{"name", l.name}, {"rank", l.rank}};
    if (l.rank == 0) {
      lj["value0"] = p.y0[l.value0];
    } else {
      lj["decomps"] = json::array();
      for (const auto& t : l.decomps) {
        json tj = json::array();
        for (int y : t) tj.push_back(p.y1[y]);
        lj["decomps"].push_back(tj);
      }
    }
    j["letters"].push_back(lj);
  }
  return j;
}

// ---- shipped presentations ----

Presentation threshold_presentation(unsigned h, unsigned theta) {
  if (theta > h) throw std::invalid_argument("threshold_presentation: theta exceeds h");
  Presentation p;
  const int n = static_cast<int>(h) + 1;
  for (int i = 0; i < n; ++i) {
    p.y1.push_back("l" + std::to_string(i));
    p.y0.push_back("z" + std::to_string(i));
  }
  p.product.assign(n, std::vector<int>(n));
  p.act = p.meet1 = p.meet0 = p.product;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) p.product[a][b] = p.act[a][b] = p.meet1[a][b] = p.meet0[a][b] = std::min(a, b);
  for (int a = 0; a < n; ++a) {
    p.omega.push_back(a);
    p.accept.push_back(a >= static_cast<int>(theta));
  }
  p.letters.push_back({"c0", 0, {}, n - 1});
  return p;
}

Presentation avoid_presentation() {
  Presentation p = threshold_presentation(1, 1);
  p.y1 = {"dead", "ok"};
  p.y0 = {"rej", "acc"};
  const int dead = 0, ok = 1, rej = 0, acc = 1;
  p.letters = {{"a2", 2, {{ok, ok}}, -1},     {"a1", 1, {{ok}}, -1}, {"b2", 2, {{dead, dead}}, -1},
               {"b1", 1, {{dead}}, -1},       {"c0", 0, {}, acc},    {"b0", 0, {}, rej}};
  return p;
}

Presentation avoid_ts_presentation(unsigned max_rank, const std::vector<std::string>& props, const std::string& bad) {
  Presentation p = avoid_presentation();
  p.letters.clear();
  const std::size_t k = props.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    std::vector<std::string> val;
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1) val.push_back(props[i]);
    std::sort(val.begin(), val.end());
    const bool is_bad = std::find(val.begin(), val.end(), bad) != val.end();
    for (unsigned n = 0; n <= max_rank; ++n) {
      Presentation::Letter l{ts_symbol_name(val, n), n, {}, -1};
      if (n == 0) l.value0 = is_bad ? 0 : 1;
      else l.decomps.push_back(std::vector<int>(n, is_bad ? 0 : 1));
      p.letters.push_back(l);
    }
  }
  return p;
}

Presentation cobuchi_presentation() {
  Presentation p;
  p.y1 = {"b", "1"};
  p.y0 = {"rej", "acc"};
  p.product = {{0, 0}, {0, 1}};
  p.meet1 = {{0, 0}, {0, 1}};
  p.meet0 = {{0, 0}, {0, 1}};
  p.act = {{0, 1}, {0, 1}};
  p.omega = {0, 1};
  p.accept = {0, 1};
  p.letters = {{"a2", 2, {{1, 1}}, -1}, {"a1", 1, {{1}}, -1}, {"b1", 1, {{0}}, -1}, {"c0", 0, {}, 1}};
  return p;
}

// ---- validation ----

PresentationReport validate_presentation(const Presentation& p) {
  PresentationReport r;
  auto fail = [&](const std::string& law, const std::string& w) { r.failures.push_back({law, w}); };
  const int n1 = static_cast<int>(p.y1.size()), n0 = static_cast<int>(p.y0.size());
  auto square = [](const std::vector<std::vector<int>>& t, int rows, int cols, int vals) {
    if (static_cast<int>(t.size()) != rows) return false;
    for (const auto& row : t) {
      if (static_cast<int>(row.size()) != cols) return false;
      for (int v : row)
        if (v < 0 || v >= vals) return false;
    }
    return true;
  };
  if (n1 == 0 || n0 == 0) fail("shape", "empty carrier");
  if (!square(p.product, n1, n1, n1)) fail("shape", "product table");
  if (!square(p.act, n1, n0, n0)) fail("shape", "act table");
  if (!square(p.meet1, n1, n1, n1)) fail("shape", "meet1 table");
  if (!square(p.meet0, n0, n0, n0)) fail("shape", "meet0 table");
  if (static_cast<int>(p.omega.size()) != n1 || static_cast<int>(p.accept.size()) != n0) fail("shape", "omega or P");
  if (!r.ok()) return r;
  for (int v : p.omega)
    if (v < -1 || v >= n0) fail("shape", "omega value out of range");
  if (!r.ok()) return r;

  auto n1s = [&](int a) { return p.y1[a]; };
  auto n0s = [&](int a) { return p.y0[a]; };
  auto meet_laws = [&](const std::vector<std::vector<int>>& m, int n, auto name, const std::string& which) {
    for (int a = 0; a < n; ++a) {
      if (m[a][a] != a) fail(which + " idempotent", name(a));
      for (int b = 0; b < n; ++b) {
        if (m[a][b] != m[b][a]) fail(which + " commutative", name(a) + "," + name(b));
        for (int c = 0; c < n; ++c)
          if (m[m[a][b]][c] != m[a][m[b][c]]) fail(which + " associative", name(a) + "," + name(b) + "," + name(c));
      }
    }
  };
  meet_laws(p.meet1, n1, n1s, "meet1");
  meet_laws(p.meet0, n0, n0s, "meet0");

  for (int a = 0; a < n1; ++a)
    for (int b = 0; b < n1; ++b) {
      for (int c = 0; c < n1; ++c)
        if (p.product[p.product[a][b]][c] != p.product[a][p.product[b][c]])
          fail("product associative", n1s(a) + "," + n1s(b) + "," + n1s(c));
      for (int t = 0; t < n0; ++t)
        if (p.act[p.product[a][b]][t] != p.act[a][p.act[b][t]]) fail("act compatible", n1s(a) + "," + n1s(b) + "," + n0s(t));
    }
  for (int a = 0; a < n1; ++a)
    for (int a2 = 0; a2 < n1; ++a2) {
      if (!p.leq1(a, a2)) continue;
      for (int b = 0; b < n1; ++b)
        for (int b2 = 0; b2 < n1; ++b2)
          if (p.leq1(b, b2) && !p.leq1(p.product[a][b], p.product[a2][b2]))
            fail("product monotone", n1s(a) + "<=" + n1s(a2) + ", " + n1s(b) + "<=" + n1s(b2));
      for (int t = 0; t < n0; ++t)
        for (int t2 = 0; t2 < n0; ++t2)
          if (p.leq0(t, t2) && !p.leq0(p.act[a][t], p.act[a2][t2]))
            fail("act monotone", n1s(a) + "<=" + n1s(a2) + ", " + n0s(t) + "<=" + n0s(t2));
    }

  auto idem_power = [&](int x) {
    int y = x;
    for (int i = 0; i <= n1 && !p.idempotent(y); ++i) y = p.product[y][x];
    return y;
  };
  bool omega_total = true;
  for (int e = 0; e < n1; ++e) {
    if (!p.idempotent(e)) continue;
    if (p.omega[e] < 0) {
      fail("omega defined on idempotents", n1s(e));
      omega_total = false;
      continue;
    }
    if (p.act[e][p.omega[e]] != p.omega[e]) fail("omega act-fixed", n1s(e));
  }
  if (omega_total) {
    for (int e = 0; e < n1; ++e)
      for (int f = 0; f < n1; ++f)
        if (p.idempotent(e) && p.idempotent(f) && p.leq1(e, f) && !p.leq0(p.omega[e], p.omega[f]))
          fail("omega monotone", n1s(e) + "<=" + n1s(f));
    for (int a = 0; a < n1; ++a)
      for (int b = 0; b < n1; ++b) {
        int e = idem_power(p.product[a][b]), f = idem_power(p.product[b][a]);
        if (p.act[a][p.omega[f]] != p.omega[e]) fail("omega shift", n1s(a) + "," + n1s(b));
      }
  }

  for (int z = 0; z < n0; ++z) {
    if (!p.accept[z]) continue;
    for (int z2 = 0; z2 < n0; ++z2) {
      if (p.leq0(z, z2) && !p.accept[z2]) fail("P upward closed", n0s(z) + "<=" + n0s(z2));
      if (p.accept[z2] && !p.accept[p.meet0[z][z2]]) fail("P meet-closed", n0s(z) + "," + n0s(z2));
    }
  }

  std::set<std::string> seen;
  for (const auto& l : p.letters) {
    if (!seen.insert(l.name).second) fail("letters", "duplicate letter " + l.name);
    if (l.rank == 0) {
      if (l.value0 < 0 || l.value0 >= n0) fail("letters", l.name + ": value0 out of range");
      continue;
    }
    if (l.decomps.empty()) fail("letters", l.name + ": no decomposition");
    for (const auto& t : l.decomps) {
      if (t.size() != l.rank) fail("letters", l.name + ": tuple length differs from the rank");
      for (int y : t)
        if (y < 0 || y >= n1) fail("letters", l.name + ": tuple value out of range");
    }
  }
  return r;
}

// ---- words and lassos ----

int fold(const Presentation& p, const std::vector<int>& w) {
  int s = none;
  for (int y : w) s = s == none ? y : p.product[s][y];
  return s;
}

int eval_word(const Presentation& p, const std::vector<int>& w, int t) {
  int s = fold(p, w);
  return s == none ? t : p.act[s][t];
}

int eval_lasso(const Presentation& p, const std::vector<int>& u, const std::vector<int>& v) {
  if (v.empty()) throw std::invalid_argument("eval_lasso: empty loop");
  const int s = fold(p, u), e0 = fold(p, v);
  int e = e0;
  std::size_t k = 1;
  while (!p.idempotent(e)) {
    e = p.product[e][e0];
    if (++k > p.y1.size() + 1) throw PresentationError("eval_lasso: no idempotent power");
  }
  if (p.omega[e] < 0) throw PresentationError("eval_lasso: omega undefined on idempotent " + p.y1[e]);
  int result = -1, pre = s;
  for (std::size_t j = 0; j < k; ++j) {
    int val = pre == none ? p.omega[e] : p.act[pre][p.omega[e]];
    if (result >= 0 && val != result)
      throw PresentationError("eval_lasso: alignments disagree (" + p.y0[result] + " vs " + p.y0[val] + ")");
    result = val;
    pre = pre == none ? e0 : p.product[pre][e0];
  }
  return result;
}

// ---- represented elements ----

std::string label_name(const ElementRep& e) {
  std::string s = "rep" + std::to_string(e.rank) + "[";
  if (e.rank == 0)
    for (std::size_t i = 0; i < e.values0.size(); ++i) s += (i ? "|" : "") + std::to_string(e.values0[i]);
  for (std::size_t i = 0; i < e.tuples.size(); ++i) {
    s += i ? "|" : "";
    for (std::size_t j = 0; j < e.tuples[i].size(); ++j) s += (j ? "," : "") + std::to_string(e.tuples[i][j]);
  }
  return s + "]";
}

std::string rep_str(const Presentation& p, const ElementRep& e) {
  std::string s;
  if (e.rank == 0) {
    for (std::size_t i = 0; i < e.values0.size(); ++i) s += (i ? " | " : "") + p.y0[e.values0[i]];
    return s.empty() ? "{}" : s;
  }
  for (std::size_t i = 0; i < e.tuples.size(); ++i) s += (i ? " | " : "") + tuple_str(p, e.tuples[i]);
  return s.empty() ? "{}" : s;
}

ElementRep letter_rep(const Presentation& p, const std::string& name) {
  const auto* l = p.letter(name);
  if (!l) throw std::invalid_argument("letter '" + name + "' is not in the presentation");
  ElementRep e;
  e.rank = l->rank;
  if (l->rank == 0) e.values0 = {l->value0};
  else e.tuples = l->decomps;
  return e;
}

YSys y_relabel(const Presentation& p, const Sys& s) {
  return map_labels(s, [&](const Symbol& a) {
    auto e = letter_rep(p, a.name);
    if (e.rank != a.rank) throw std::invalid_argument("letter '" + a.name + "' has a different rank in the presentation");
    return e;
  });
}

namespace {

bool tuple_leq(const Presentation& p, const std::vector<int>& a, const std::vector<int>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!p.leq1(a[i], b[i])) return false;
  return true;
}

// Indices of the maximal choices of e, first occurrence of equal ones.
std::vector<int> maximal_indices(const Presentation& p, const ElementRep& e) {
  std::vector<int> r;
  const std::size_t n = e.rank == 0 ? e.values0.size() : e.tuples.size();
  auto leq = [&](std::size_t i, std::size_t j) {
    return e.rank == 0 ? p.leq0(e.values0[i], e.values0[j]) : tuple_leq(p, e.tuples[i], e.tuples[j]);
  };
  for (std::size_t i = 0; i < n; ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < n && !dominated; ++j) {
      if (i == j || !leq(i, j)) continue;
      if (!leq(j, i) || j < i) dominated = true;
    }
    if (!dominated) r.push_back(static_cast<int>(i));
  }
  return r;
}

}  // namespace

ElementRep rep_maximal(const Presentation& p, const ElementRep& e) {
  ElementRep r;
  r.rank = e.rank;
  for (int i : maximal_indices(p, e)) {
    if (e.rank == 0) r.values0.push_back(e.values0[i]);
    else r.tuples.push_back(e.tuples[i]);
  }
  std::sort(r.values0.begin(), r.values0.end());
  std::sort(r.tuples.begin(), r.tuples.end());
  return r;
}

bool rep_leq(const Presentation& p, const ElementRep& x, const ElementRep& y) {
  if (x.rank != y.rank) throw std::invalid_argument("rep_leq: rank mismatch");
  if (x.rank == 0) {
    for (int a : x.values0)
      if (std::none_of(y.values0.begin(), y.values0.end(), [&](int b) { return p.leq0(a, b); })) return false;
    return true;
  }
  for (const auto& t : x.tuples)
    if (std::none_of(y.tuples.begin(), y.tuples.end(), [&](const auto& u) { return tuple_leq(p, t, u); })) return false;
  return true;
}

ElementRep rep_meet(const Presentation& p, const ElementRep& x, const ElementRep& y) {
  if (x.rank != y.rank) throw std::invalid_argument("rep_meet: rank mismatch");
  ElementRep r;
  r.rank = x.rank;
  if (x.rank == 0) {
    for (int a : x.values0)
      for (int b : y.values0) r.values0.push_back(p.meet0[a][b]);
  } else {
    for (const auto& t : x.tuples)
      for (const auto& u : y.tuples) {
        std::vector<int> m(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) m[i] = p.meet1[t[i]][u[i]];
        r.tuples.push_back(m);
      }
  }
  return rep_maximal(p, r);
}

std::vector<ElementRep> det_elements(const Presentation& p, unsigned n) {
  std::vector<ElementRep> r;
  if (n == 0) {
    for (int z = 0; z < static_cast<int>(p.y0.size()); ++z) r.push_back(ElementRep::zero(z));
    return r;
  }
  std::vector<int> t(n, 0);
  const int k = static_cast<int>(p.y1.size());
  for (;;) {
    auto e = ElementRep::tuple(t);
    bool dup = false;
    for (const auto& x : r)
      if (rep_leq(p, x, e) && rep_leq(p, e, x)) dup = true;
    if (!dup) r.push_back(e);
    std::size_t i = 0;
    while (i < n && t[i] == k - 1) t[i++] = 0;
    if (i == n) break;
    ++t[i];
  }
  return r;
}

// ---- branch semantics ----

namespace {

void require_closed(const YSys& g, const char* who) {
  for (Vertex v = 0; v < g.size(); ++v)
    for (const auto& a : g.out[v])
      if (a.to.var) throw std::invalid_argument(std::string(who) + ": graph must be closed");
      else if (a.to.idx >= g.size()) throw std::invalid_argument(std::string(who) + ": edge target out of range");
}

// Greatest set of vertices that have a yield: every direction keeps a live successor.
std::vector<char> live_vertices(const YSys& g) {
  std::vector<char> live(g.size(), 1);
  for (bool changed = true; changed;) {
    changed = false;
    for (Vertex v = 0; v < g.size(); ++v) {
      if (!live[v]) continue;
      for (unsigned d = 1; d <= g.labels[v].rank; ++d) {
        bool any = false;
        for (const auto& a : g.out[v])
          if (a.dir == d && live[a.to.idx]) any = true;
        if (!any) {
          live[v] = 0;
          changed = true;
          break;
        }
      }
    }
  }
  return live;
}

std::string value_str(const Presentation& p, int s) { return s == none ? "()" : p.y1[s]; }

}  // namespace

BranchVerdict universal_branch_check(const Presentation& p, const YSys& g, bool roots) {
  require_closed(g, "universal_branch_check");
  const int n1 = static_cast<int>(p.y1.size());
  for (Vertex v = 0; v < g.size(); ++v) {
    const auto& l = g.labels[v];
    if (l.rank > 1 || !l.deterministic()) throw std::invalid_argument("universal_branch_check: vertex " + g.id(v) + " is not a deterministic rank <= 1 label");
  }
  auto live = live_vertices(g);
  auto label1 = [&](Vertex v) { return g.labels[v].tuples[0][0]; };
  auto succs = [&](Vertex v) {
    std::vector<Vertex> r;
    for (const auto& a : g.out[v])
      if (a.dir == 1 && live[a.to.idx]) r.push_back(a.to.idx);
    return r;
  };
  const std::size_t W = static_cast<std::size_t>(n1) + 1;
  auto key = [&](Vertex v, int s) { return v * W + static_cast<std::size_t>(s + 1); };
  std::vector<char> seen(g.size() * W, 0);
  std::vector<std::pair<Vertex, int>> order;
  for (Vertex v = 0; v < g.size(); ++v)
    if (live[v] && (g.initial[v] || (roots && g.root[v])) && !seen[key(v, none)]) {
      seen[key(v, none)] = 1;
      order.push_back({v, none});
    }
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto [v, s] = order[i];
    if (g.labels[v].rank == 0) continue;
    int y = label1(v);
    int s2 = s == none ? y : p.product[s][y];
    for (Vertex w : succs(v))
      if (!seen[key(w, s2)]) {
        seen[key(w, s2)] = 1;
        order.push_back({w, s2});
      }
  }
  BranchVerdict r;
  for (auto [v, s] : order) {
    if (g.labels[v].rank != 0) continue;
    int z = g.labels[v].values0[0];
    int val = s == none ? z : p.act[s][z];
    if (!p.accept[val]) {
      r.accepted = false;
      r.witness = "finite branch with prefix " + value_str(p, s) + " ending at " + g.id(v) + " evaluates to " + p.y0[val];
      return r;
    }
  }
  // loop values per vertex, closed under concatenation
  std::vector<std::vector<char>> loops(g.size());
  auto loop_values = [&](Vertex v) -> const std::vector<char>& {
    auto& lv = loops[v];
    if (!lv.empty()) return lv;
    lv.assign(n1, 0);
    std::vector<char> vis(g.size() * n1, 0);
    std::vector<std::pair<Vertex, int>> q;
    int y = label1(v);
    for (Vertex w : succs(v))
      if (!vis[w * n1 + y]) {
        vis[w * n1 + y] = 1;
        q.push_back({w, y});
      }
    for (std::size_t i = 0; i < q.size(); ++i) {
      auto [w, t] = q[i];
      if (w == v) lv[t] = 1;
      if (g.labels[w].rank == 0) continue;
      int t2 = p.product[t][label1(w)];
      for (Vertex x : succs(w))
        if (!vis[x * n1 + t2]) {
          vis[x * n1 + t2] = 1;
          q.push_back({x, t2});
        }
    }
    return lv;
  };
  for (auto [v, s] : order) {
    if (g.labels[v].rank == 0) continue;
    const auto& lv = loop_values(v);
    for (int e = 0; e < n1; ++e) {
      if (!lv[e] || !p.idempotent(e)) continue;
      if (p.omega[e] < 0) throw PresentationError("omega undefined on idempotent " + p.y1[e]);
      int val = s == none ? p.omega[e] : p.act[s][p.omega[e]];
      if (!p.accept[val]) {
        r.accepted = false;
        r.witness = "lasso with prefix " + value_str(p, s) + " and loop " + p.y1[e] + " at " + g.id(v) +
                    " evaluates to " + p.y0[val];
        return r;
      }
    }
  }
  return r;
}

namespace {

struct Positions {
  const Presentation& p;
  const YSys& g;
  std::vector<char> live;
  std::size_t W;
  std::size_t key(Vertex v, int s) const { return v * W + static_cast<std::size_t>(s + 1); }
};

}  // namespace

YSys strategy_graph(const Presentation& p, const YSys& g, const Strategy& st, bool roots) {
  require_closed(g, "strategy_graph");
  Positions P{p, g, live_vertices(g), p.y1.size() + 1};
  YSys r;
  r.rank = 0;
  std::map<std::pair<Vertex, int>, std::vector<Vertex>> entry;
  std::vector<std::pair<Vertex, int>> order;
  // entry nodes of a position are created when it is first discovered
  auto discover = [&](Vertex v, int s) -> const std::vector<Vertex>& {
    auto it = entry.find({v, s});
    if (it != entry.end()) return it->second;
    int c = v < st.choice.size() && static_cast<std::size_t>(s + 1) < st.choice[v].size() ? st.choice[v][s + 1] : -1;
    const auto& l = g.labels[v];
    const std::size_t options = l.rank == 0 ? l.values0.size() : l.tuples.size();
    if (c < 0 || static_cast<std::size_t>(c) >= options)
      throw std::invalid_argument("strategy has no choice at " + g.id(v) + " with prefix " + value_str(p, s));
    std::vector<Vertex> nodes;
    const std::string base = g.id(v) + "@" + value_str(p, s);
    if (l.rank == 0) {
      nodes.push_back(r.add_vertex(ElementRep::zero(l.values0[c]), false, false, base));
    } else {
      for (unsigned i = 1; i <= l.rank; ++i)
        nodes.push_back(r.add_vertex(ElementRep::one(l.tuples[c][i - 1]), false, false, base + "." + std::to_string(i)));
    }
    order.push_back({v, s});
    return entry[{v, s}] = nodes;
  };
  for (Vertex v = 0; v < g.size(); ++v) {
    if (!P.live[v]) continue;
    const bool ini = g.initial[v], rt = roots && g.root[v];
    if (!ini && !rt) continue;
    for (Vertex x : discover(v, none)) {
      if (ini) r.initial[x] = 1;
      if (rt) r.root[x] = 1;
    }
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto [v, s] = order[i];
    const auto& l = g.labels[v];
    if (l.rank == 0) continue;
    const auto nodes = entry[{v, s}];
    for (unsigned d = 1; d <= l.rank; ++d) {
      int y = r.labels[nodes[d - 1]].tuples[0][0];
      int s2 = s == none ? y : p.product[s][y];
      for (const auto& a : g.out[v])
        if (a.dir == d && P.live[a.to.idx]) {
          const auto targets = discover(a.to.idx, s2);
          for (Vertex t : targets) r.add_edge(nodes[d - 1], 1, Target::vertex(t));
        }
    }
  }
  return r;
}

CompositionVerdict eval_closed_composition(const Presentation& p, const YSys& g, bool roots, std::size_t max_strategies) {
  require_closed(g, "eval_closed_composition");
  for (Vertex v = 0; v < g.size(); ++v) {
    const auto& l = g.labels[v];
    for (const auto& t : l.tuples)
      if (t.size() != l.rank) throw std::invalid_argument("eval_closed_composition: tuple length differs from the rank at " + g.id(v));
  }
  Positions P{p, g, live_vertices(g), p.y1.size() + 1};
  std::vector<std::vector<int>> options(g.size());
  for (Vertex v = 0; v < g.size(); ++v) options[v] = maximal_indices(p, g.labels[v]);

  CompositionVerdict out;
  Strategy st;
  st.choice.assign(g.size(), std::vector<int>(P.W, -1));
  std::size_t tried = 0;
  std::string last_witness;

  // Returns the first reachable position that still needs a choice, or
  // (-1,-1) when the strategy is complete on the reachable part; sets lost
  // when a reachable position offers nothing.
  auto open_position = [&](bool& lost) -> std::pair<long, int> {
    std::vector<char> seen(g.size() * P.W, 0);
    std::vector<std::pair<Vertex, int>> q;
    for (Vertex v = 0; v < g.size(); ++v)
      if (P.live[v] && (g.initial[v] || (roots && g.root[v])) && !seen[P.key(v, none)]) {
        seen[P.key(v, none)] = 1;
        q.push_back({v, none});
      }
    for (std::size_t i = 0; i < q.size(); ++i) {
      auto [v, s] = q[i];
      const auto& l = g.labels[v];
      if (options[v].empty()) {
        lost = true;
        last_witness = "no choice available at " + g.id(v);
        return {-1, -1};
      }
      int c = st.choice[v][s + 1];
      if (c < 0) {
        if (options[v].size() > 1) return {static_cast<long>(v), s};
        c = st.choice[v][s + 1] = options[v][0];
      }
      if (l.rank == 0) continue;
      for (unsigned d = 1; d <= l.rank; ++d) {
        int y = l.tuples[c][d - 1];
        int s2 = s == none ? y : p.product[s][y];
        for (const auto& a : g.out[v])
          if (a.dir == d && P.live[a.to.idx] && !seen[P.key(a.to.idx, s2)]) {
            seen[P.key(a.to.idx, s2)] = 1;
            q.push_back({a.to.idx, s2});
          }
      }
    }
    return {-1, -1};
  };

  std::function<bool()> search = [&]() -> bool {
    bool lost = false;
    auto saved = st.choice;
    auto [v, s] = open_position(lost);
    if (lost) {
      st.choice = saved;
      return false;
    }
    if (v < 0) {
      if (++tried > max_strategies) throw std::runtime_error("eval_closed_composition: strategy limit exceeded");
      auto verdict = universal_branch_check(p, strategy_graph(p, g, st, roots), roots);
      if (verdict.accepted) return true;
      last_witness = verdict.witness;
      st.choice = saved;
      return false;
    }
    for (int c : options[v]) {
      st.choice[v][s + 1] = c;
      if (search()) return true;
    }
    st.choice = saved;
    return false;
  };
  out.accepted = search();
  if (out.accepted) out.strategy = st;
  else out.witness = last_witness;
  return out;
}

// ---- contexts, extremal contexts, delta ----

YSys atomic_rep(const ElementRep& a) {
  YSys s;
  s.rank = a.rank;
  Vertex v = s.add_vertex(a, true);
  for (unsigned i = 1; i <= a.rank; ++i) s.add_edge(v, i, Target::variable(i));
  return s;
}

YSys plant_graph(const YSys& g) {
  YSys r = g;
  for (Vertex v = 0; v < g.size(); ++v) r.root[v] = g.root[v] || g.initial[v];
  r.initial.assign(g.size(), 0);
  return r;
}

YSys context_graph(const std::vector<std::vector<int>>& alternatives, const YSys& inner) {
  if (alternatives.empty() || inner.rank != alternatives.size() - 1)
    throw std::invalid_argument("context_graph: the inner rank must be the number of parts minus one");
  YSys c;
  c.rank = 0;
  std::vector<std::vector<Vertex>> part(alternatives.size());
  for (int y : alternatives[0]) part[0].push_back(c.add_vertex(ElementRep::one(y), true, false, "m0"));
  const Vertex off = static_cast<Vertex>(c.size());
  for (Vertex v = 0; v < inner.size(); ++v) c.add_vertex(inner.labels[v], false, inner.root[v], "in." + inner.id(v));
  for (std::size_t i = 1; i < alternatives.size(); ++i)
    for (int y : alternatives[i]) part[i].push_back(c.add_vertex(ElementRep::one(y), false, false, "m" + std::to_string(i)));
  auto to_inner_initials = [&](Vertex src) {
    for (Vertex w = 0; w < inner.size(); ++w)
      if (inner.initial[w]) c.add_edge(src, 1, Target::vertex(off + w));
  };
  for (const auto& pv : part)
    for (Vertex u : pv) to_inner_initials(u);
  for (Vertex v = 0; v < inner.size(); ++v)
    for (const auto& a : inner.out[v]) {
      if (!a.to.var) {
        c.add_edge(off + v, a.dir, Target::vertex(off + a.to.idx));
        continue;
      }
      for (Vertex u : part[a.to.idx]) c.add_edge(off + v, a.dir, Target::vertex(u));
    }
  return c;
}

namespace {

std::vector<std::vector<int>> singletons(const std::vector<int>& t) {
  std::vector<std::vector<int>> r;
  for (int y : t) r.push_back({y});
  return r;
}

bool accepts(const Presentation& p, const YSys& g) { return eval_closed_composition(p, g).accepted; }

bool accepts_context(const Presentation& p, const std::vector<int>& t, const ElementRep& a) {
  return accepts(p, context_graph(singletons(t), atomic_rep(a)));
}

// Number of elements strictly below y.
int height(const Presentation& p, int y) {
  int h = 0;
  for (std::size_t x = 0; x < p.y1.size(); ++x)
    if (static_cast<int>(x) != y && p.leq1(static_cast<int>(x), y)) ++h;
  return h;
}

template <class F>
void for_each_tuple(std::size_t n, int k, F f) {
  std::vector<int> t(n, 0);
  for (;;) {
    f(t);
    std::size_t i = 0;
    while (i < n && t[i] == k - 1) t[i++] = 0;
    if (i == n) return;
    ++t[i];
  }
}

}  // namespace

Extremal extremal_context(const Presentation& p, const std::vector<int>& t, const ElementRep& a) {
  if (t.size() != a.rank + 1) throw std::invalid_argument("extremal_context: context needs rank(a) + 1 parts");
  if (!accepts(p, plant_graph(context_graph(singletons(t), atomic_rep(a)))))
    throw std::invalid_argument("extremal_context: the context does not accept the element");
  const int k1 = static_cast<int>(p.y1.size());
  Extremal r;
  int best = -1;
  for_each_tuple(t.size(), k1, [&](const std::vector<int>& m) {
    for (std::size_t i = 0; i < m.size(); ++i)
      if (!p.leq1(m[i], t[i])) return;
    int h = 0;
    for (int y : m) h += height(p, y);
    if (best >= 0 && h >= best) return;
    if (!accepts_context(p, m, a)) return;
    best = h;
    r.m = m;
  });
  // the extremality conditions, re-checked directly
  for (std::size_t i = 0; i < t.size(); ++i)
    if (!p.leq1(r.m[i], t[i])) r.failures.push_back({"below the context", "m" + std::to_string(i)});
  if (!accepts_context(p, r.m, a)) r.failures.push_back({"accepts", "Context(m)[a] is rejected"});
  for (std::size_t i = 0; i < t.size(); ++i)
    for (int y = 0; y < k1; ++y) {
      auto alts = singletons(r.m);
      if (y != r.m[i]) alts[i].push_back(y);
      if (accepts(p, context_graph(alts, atomic_rep(a))) && !p.leq1(r.m[i], y))
        r.failures.push_back({"minimal", "m" + std::to_string(i) + " + " + p.y1[y] + " still accepts"});
    }
  return r;
}

namespace {

// s.X.t.z for z a terminal, or s.(X.t)^omega when z is none; s and t may be none.
YSys test_graph(const YSys& x, int s, int t, int z) {
  YSys g;
  g.rank = 0;
  const Vertex off = static_cast<Vertex>(g.size());
  for (Vertex v = 0; v < x.size(); ++v) g.add_vertex(x.labels[v], s == none && x.initial[v], x.root[v], x.id(v));
  for (Vertex v = 0; v < x.size(); ++v)
    for (const auto& a : x.out[v])
      if (!a.to.var) g.add_edge(off + v, a.dir, Target::vertex(off + a.to.idx));
  auto to_x = [&](Vertex src) {
    for (Vertex w = 0; w < x.size(); ++w)
      if (x.initial[w]) g.add_edge(src, 1, Target::vertex(off + w));
  };
  if (s != none) to_x(g.add_vertex(ElementRep::one(s), true, false, "s"));
  std::vector<Vertex> after;
  if (t != none) {
    Vertex tv = g.add_vertex(ElementRep::one(t), false, false, "t");
    after.push_back(tv);
    if (z != none) g.add_edge(tv, 1, Target::vertex(g.add_vertex(ElementRep::zero(z), false, false, "z")));
    else to_x(tv);
  } else if (z != none) {
    after.push_back(g.add_vertex(ElementRep::zero(z), false, false, "z"));
  } else {
    for (Vertex w = 0; w < x.size(); ++w)
      if (x.initial[w]) after.push_back(off + w);
  }
  for (Vertex v = 0; v < x.size(); ++v)
    for (const auto& a : x.out[v])
      if (a.to.var)
        for (Vertex u : after) g.add_edge(off + v, a.dir, Target::vertex(u));
  return g;
}

struct Unary {
  int value = 0;
  bool exact = true;
};

// The Y1 value of a rank-1 graph: the meet of every y that accepts wherever x does.
Unary unary_value(const Presentation& p, const YSys& x) {
  const int k1 = static_cast<int>(p.y1.size()), k0 = static_cast<int>(p.y0.size());
  std::vector<YSys> tests_x;
  std::vector<std::tuple<int, int, int>> params;
  for (int s = none; s < k1; ++s)
    for (int t = none; t < k1; ++t)
      for (int z = none; z < k0; ++z) params.push_back({s, t, z});
  std::vector<char> acc_x;
  for (auto [s, t, z] : params) acc_x.push_back(accepts(p, test_graph(x, s, t, z)));
  auto acc_y = [&](int y) {
    std::vector<char> r;
    for (auto [s, t, z] : params) r.push_back(accepts(p, test_graph(atomic_rep(ElementRep::one(y)), s, t, z)));
    return r;
  };
  Unary u;
  int meet = -1;
  std::vector<std::vector<char>> ys;
  for (int y = 0; y < k1; ++y) {
    ys.push_back(acc_y(y));
    bool above = true;
    for (std::size_t i = 0; i < params.size(); ++i)
      if (acc_x[i] && !ys[y][i]) above = false;
    if (above) meet = meet < 0 ? y : p.meet1[meet][y];
  }
  if (meet < 0) {
    u.exact = false;
    for (int y = 0; y < k1; ++y) {
      bool top = true;
      for (int y2 = 0; y2 < k1; ++y2)
        if (!p.leq1(y2, y)) top = false;
      if (top) meet = y;
    }
    if (meet < 0) meet = 0;
  }
  u.value = meet;
  u.exact = u.exact && ys[meet] == acc_x;
  return u;
}

}  // namespace

DeltaResult build_delta(const Presentation& p, const std::vector<int>& m, const ElementRep& a,
                        const std::vector<int>& c, DeltaOptions opt) {
  const unsigned k = a.rank;
  if (m.size() != k + 1 || c.size() != k + 1) throw std::invalid_argument("build_delta: contexts need rank(a) + 1 parts");
  DeltaResult r;
  if (k <= 1) {
    r.delta = a;
    r.big_delta = atomic_rep(a);
  } else {
    r.big_delta.rank = k;
    std::vector<int> d(k);
    for (unsigned i = 1; i <= k; ++i) {
      YSys u;
      u.rank = 1;
      Vertex root = u.add_vertex(ElementRep::one(m[0]), false, true, "r" + std::to_string(i));
      Vertex ui = u.add_vertex(a, true, false, "u" + std::to_string(i));
      u.add_edge(root, 1, Target::vertex(ui));
      u.add_edge(ui, i, Target::variable(1));
      for (unsigned j = 1; j <= k; ++j) {
        Vertex vj = u.add_vertex(ElementRep::one(m[j]), false, false, "v" + std::to_string(i) + std::to_string(j));
        u.add_edge(ui, j, Target::vertex(vj));
        u.add_edge(vj, 1, Target::vertex(ui));
      }
      auto uv = unary_value(p, u);
      d[i - 1] = uv.value;
      r.exact = r.exact && uv.exact;
      // rename x1 -> xi while summing into Delta
      const Vertex off = static_cast<Vertex>(r.big_delta.size());
      for (Vertex v = 0; v < u.size(); ++v) r.big_delta.add_vertex(u.labels[v], u.initial[v], u.root[v], u.id(v));
      for (Vertex v = 0; v < u.size(); ++v)
        for (const auto& e : u.out[v])
          r.big_delta.add_edge(off + v, e.dir, e.to.var ? Target::variable(i) : Target::vertex(off + e.to.idx));
      r.u.push_back(std::move(u));
    }
    if (opt.mutate_index >= 0) d.at(opt.mutate_index) = opt.mutate_value;
    r.delta = ElementRep::tuple(d);
  }
  r.deterministic = r.delta.deterministic() && r.delta.rank == k;
  r.accepts = accepts_context(p, c, r.delta);
  r.accepts_literal = accepts(p, plant_graph(context_graph(singletons(m), r.big_delta)));
  r.leq = rep_leq(p, r.delta, a);
  r.bounded_leq = true;
  for_each_tuple(k + 1, static_cast<int>(p.y1.size()), [&](const std::vector<int>& t) {
    if (!r.bounded_leq) return;
    if (accepts_context(p, t, r.delta) && !accepts_context(p, t, a)) {
      r.bounded_leq = false;
      r.witness = "Context" + tuple_str(p, t) + " accepts delta but not a";
    }
  });
  if (r.witness.empty()) {
    if (!r.accepts) r.witness = "C[delta] is rejected";
    else if (!r.accepts_literal) r.witness = "M[Delta] is rejected";
    else if (!r.leq) r.witness = "delta is not below a";
  }
  return r;
}

}  // namespace regtree
