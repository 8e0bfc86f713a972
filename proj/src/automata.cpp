#include "regtree/automata.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "regtree/io.hpp"
#include "regtree/transition_system.hpp"

namespace regtree {

using nlohmann::json;

// ---- json ----

namespace {

int index_of(const std::vector<std::string>& names, const json& v, const std::string& where) {
  if (!v.is_string()) throw InputError("expected a type name", where);
  auto it = std::find(names.begin(), names.end(), v.get<std::string>());
  if (it == names.end()) throw InputError("unknown type '" + v.get<std::string>() + "'", where);
  return static_cast<int>(it - names.begin());
}

std::vector<std::string> string_list(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) throw InputError(std::string("missing array '") + key + "'", "");
  std::vector<std::string> r;
  for (std::size_t i = 0; i < j[key].size(); ++i) {
    if (!j[key][i].is_string()) throw InputError("expected a name", std::string("/") + key + "/" + std::to_string(i));
    r.push_back(j[key][i].get<std::string>());
  }
  return r;
}

}  // namespace

UnfoldAutomaton automaton_from_json(const json& j) {
  if (!j.is_object()) throw InputError("expected an automaton object", "");
  UnfoldAutomaton a;
  a.x1 = string_list(j, "X1");
  a.x0 = string_list(j, "X0");
  if (!j.contains("alphabet")) throw InputError("missing alphabet", "/alphabet");
  try {
    a.alphabet = alphabet_from_json(j["alphabet"]);
  } catch (const InputError& e) {
    throw InputError(e.what(), "/alphabet" + e.where);
  }
  if (!j.contains("delta") || !j["delta"].is_object()) throw InputError("missing object", "/delta");
  for (auto it = j["delta"].begin(); it != j["delta"].end(); ++it) {
    const std::string w = "/delta/" + it.key();
    auto sym = a.alphabet.find(it.key());
    if (!sym) throw InputError("symbol not in the alphabet", w);
    if (!it.value().is_array()) throw InputError("expected an array", w);
    for (std::size_t i = 0; i < it.value().size(); ++i) {
      const auto& t = it.value()[i];
      const std::string wi = w + "/" + std::to_string(i);
      if (sym->rank == 0) {
        a.delta_zero[sym->name].push_back(index_of(a.x0, t, wi));
        continue;
      }
      if (!t.is_array() || t.size() != sym->rank) throw InputError("tuple length differs from the rank", wi);
      std::vector<int> tup;
      for (std::size_t c = 0; c < t.size(); ++c) tup.push_back(index_of(a.x1, t[c], wi + "/" + std::to_string(c)));
      a.delta_plus[sym->name].push_back(tup);
    }
  }
  if (!j.contains("omega") || !j["omega"].is_object() || !j["omega"].contains("kind"))
    throw InputError("missing acceptance", "/omega");
  const auto& o = j["omega"];
  const std::string kind = o["kind"].is_string() ? o["kind"].get<std::string>() : "";
  if (kind == "wilke") {
    a.mode = UnfoldAutomaton::Mode::Wilke;
    try {
      a.wilke = presentation_from_json(o.value("presentation", json::object()));
    } catch (const InputError& e) {
      throw InputError(e.what(), "/omega/presentation" + e.where);
    }
    if (a.wilke.y1 != a.x1 || a.wilke.y0 != a.x0) throw InputError("presentation sorts differ from X1/X0", "/omega/presentation");
  } else if (kind == "dpa") {
    a.mode = UnfoldAutomaton::Mode::Dpa;
    auto& d = a.dpa;
    try {
      d.states = o.at("states").get<std::size_t>();
      d.initial = o.at("initial").get<std::size_t>();
      d.next = o.at("next").get<std::vector<std::vector<std::size_t>>>();
      d.priority = o.at("priority").get<std::vector<std::vector<unsigned>>>();
      auto fin = o.at("final").get<std::vector<std::vector<int>>>();
      for (const auto& row : fin) d.final.emplace_back(row.begin(), row.end());
    } catch (const json::exception& e) {
      throw InputError(std::string("malformed dpa: ") + e.what(), "/omega");
    }
  } else {
    throw InputError("kind must be \"wilke\" or \"dpa\"", "/omega/kind");
  }
  auto problems = check_automaton(a);
  if (!problems.empty()) throw InputError(problems[0], "");
  return a;
}

json to_json(const UnfoldAutomaton& a) {
  json j;
  j["X1"] = a.x1;
  j["X0"] = a.x0;
  j["alphabet"] = to_json(a.alphabet);
  j["delta"] = json::object();
  for (const auto& [name, ts] : a.delta_plus) {
    json arr = json::array();
    for (const auto& t : ts) {
      json tj = json::array();
      for (int x : t) tj.push_back(a.x1[x]);
      arr.push_back(tj);
    }
    j["delta"][name] = arr;
  }
  for (const auto& [name, vs] : a.delta_zero) {
    json arr = json::array();
    for (int x : vs) arr.push_back(a.x0[x]);
    j["delta"][name] = arr;
  }
  if (a.mode == UnfoldAutomaton::Mode::Wilke) {
    auto p = a.wilke;
    p.letters.clear();
    j["omega"] = {{"kind", "wilke"}, {"presentation", to_json(p)}};
  } else {
    json fin = json::array();
    for (const auto& row : a.dpa.final) fin.push_back(std::vector<int>(row.begin(), row.end()));
    j["omega"] = {{"kind", "dpa"},          {"states", a.dpa.states},     {"initial", a.dpa.initial},
                  {"next", a.dpa.next},     {"priority", a.dpa.priority}, {"final", fin}};
  }
  return j;
}

std::vector<std::string> check_automaton(const UnfoldAutomaton& a) {
  std::vector<std::string> r;
  const int n1 = static_cast<int>(a.x1.size()), n0 = static_cast<int>(a.x0.size());
  for (const auto& [name, ts] : a.delta_plus) {
    auto sym = a.alphabet.find(name);
    if (!sym || sym->rank == 0) {
      r.push_back("delta_plus of '" + name + "' needs a symbol of positive rank");
      continue;
    }
    for (const auto& t : ts) {
      if (t.size() != sym->rank) r.push_back("delta_plus of '" + name + "': tuple length differs from the rank");
      for (int x : t)
        if (x < 0 || x >= n1) r.push_back("delta_plus of '" + name + "': type out of range");
    }
  }
  for (const auto& [name, vs] : a.delta_zero) {
    auto sym = a.alphabet.find(name);
    if (!sym || sym->rank != 0) r.push_back("delta_zero of '" + name + "' needs a symbol of rank 0");
    for (int x : vs)
      if (x < 0 || x >= n0) r.push_back("delta_zero of '" + name + "': type out of range");
  }
  if (a.mode == UnfoldAutomaton::Mode::Dpa) {
    const auto& d = a.dpa;
    if (d.states == 0 || d.initial >= d.states) r.push_back("dpa: bad initial state");
    if (d.next.size() != d.states || d.priority.size() != d.states || d.final.size() != d.states)
      r.push_back("dpa: tables must have one row per state");
    else
      for (std::size_t q = 0; q < d.states; ++q) {
        if (d.next[q].size() != a.x1.size() || d.priority[q].size() != a.x1.size())
          r.push_back("dpa: transition row " + std::to_string(q) + " is not total over X1");
        for (auto q2 : d.next[q])
          if (q2 >= d.states) r.push_back("dpa: target state out of range");
        if (d.final[q].size() != a.x0.size()) r.push_back("dpa: final row " + std::to_string(q) + " is not total over X0");
      }
  } else {
    if (a.wilke.y1 != a.x1 || a.wilke.y0 != a.x0) r.push_back("wilke tables: sorts differ from X1/X0");
    for (const auto& f : validate_presentation(a.wilke).failures)
      if (f.law != "letters") r.push_back("wilke tables: " + f.law + " (" + f.witness + ")");
  }
  return r;
}

// ---- parity games ----

namespace {

struct Zielonka {
  const ParityGame& g;
  std::vector<std::vector<std::size_t>> preds;

  explicit Zielonka(const ParityGame& game) : g(game), preds(game.owner.size()) {
    for (std::size_t v = 0; v < g.moves.size(); ++v)
      for (auto w : g.moves[v]) preds[w].push_back(v);
  }

  // Attractor of `target` for `player` inside `in`; strategy records the move
  // of the player's positions that were attracted.
  std::vector<char> attractor(const std::vector<char>& in, const std::vector<char>& target, char player,
                              std::vector<long>& strategy) const {
    const std::size_t n = in.size();
    std::vector<char> attr(n, 0);
    std::vector<std::size_t> count(n, 0), q;
    for (std::size_t v = 0; v < n; ++v) {
      if (!in[v]) continue;
      for (auto w : g.moves[v]) count[v] += in[w];
      if (target[v]) {
        attr[v] = 1;
        q.push_back(v);
      }
    }
    for (std::size_t i = 0; i < q.size(); ++i) {
      auto v = q[i];
      for (auto u : preds[v]) {
        if (!in[u] || attr[u]) continue;
        if (g.owner[u] == player) {
          attr[u] = 1;
          strategy[u] = static_cast<long>(v);
          q.push_back(u);
        } else if (--count[u] == 0) {
          attr[u] = 1;
          q.push_back(u);
        }
      }
    }
    return attr;
  }

  // win[v] for v in `in`; strategy for the winner's own positions.
  void solve(const std::vector<char>& in, std::vector<char>& win, std::vector<long>& strategy) const {
    const std::size_t n = in.size();
    long pmax = -1;
    for (std::size_t v = 0; v < n; ++v)
      if (in[v]) pmax = std::max<long>(pmax, g.priority[v]);
    if (pmax < 0) return;
    const char i = static_cast<char>(pmax % 2), o = static_cast<char>(1 - i);
    std::vector<char> top(n, 0);
    for (std::size_t v = 0; v < n; ++v) top[v] = in[v] && g.priority[v] == static_cast<unsigned>(pmax);
    std::vector<long> sa(n, -1);
    auto A = attractor(in, top, i, sa);
    std::vector<char> in2(n, 0);
    for (std::size_t v = 0; v < n; ++v) in2[v] = in[v] && !A[v];
    std::vector<char> win2(n, 0);
    std::vector<long> s2(n, -1);
    solve(in2, win2, s2);
    bool opponent_wins = false;
    for (std::size_t v = 0; v < n; ++v)
      if (in2[v] && win2[v] == o) opponent_wins = true;
    if (!opponent_wins) {
      for (std::size_t v = 0; v < n; ++v) {
        if (!in[v]) continue;
        win[v] = i;
        if (g.owner[v] != i) continue;
        if (in2[v]) strategy[v] = s2[v];
        else if (!top[v]) strategy[v] = sa[v];
        else
          for (auto w : g.moves[v])
            if (in[w]) {
              strategy[v] = static_cast<long>(w);
              break;
            }
      }
      return;
    }
    std::vector<char> B(n, 0);
    for (std::size_t v = 0; v < n; ++v) B[v] = in2[v] && win2[v] == o;
    std::vector<long> sb(n, -1);
    auto Battr = attractor(in, B, o, sb);
    std::vector<char> in3(n, 0);
    for (std::size_t v = 0; v < n; ++v) in3[v] = in[v] && !Battr[v];
    std::vector<char> win3(n, 0);
    std::vector<long> s3(n, -1);
    solve(in3, win3, s3);
    for (std::size_t v = 0; v < n; ++v) {
      if (!in[v]) continue;
      if (in3[v]) {
        win[v] = win3[v];
        strategy[v] = s3[v];
      } else {
        win[v] = o;
        if (g.owner[v] == o) strategy[v] = B[v] ? s2[v] : sb[v];
      }
    }
  }
};

}  // namespace

GameSolution zielonka(const ParityGame& game) {
  // dead ends move to a sink won by the other player
  ParityGame g = game;
  const std::size_t n = game.owner.size();
  const std::size_t eve_sink = g.add(0, 0), adam_sink = g.add(1, 1);
  g.moves[eve_sink] = {eve_sink};
  g.moves[adam_sink] = {adam_sink};
  for (std::size_t v = 0; v < n; ++v)
    if (g.moves[v].empty()) g.moves[v] = {g.owner[v] == 0 ? adam_sink : eve_sink};
  Zielonka z(g);
  std::vector<char> in(g.owner.size(), 1), win(g.owner.size(), 0);
  std::vector<long> strategy(g.owner.size(), -1);
  z.solve(in, win, strategy);
  GameSolution r;
  r.winner.assign(win.begin(), win.begin() + static_cast<long>(n));
  r.strategy.assign(strategy.begin(), strategy.begin() + static_cast<long>(n));
  for (std::size_t v = 0; v < n; ++v)
    if (game.moves[v].empty() || r.winner[v] != g.owner[v]) r.strategy[v] = -1;
  return r;
}

bool strategy_wins(const ParityGame& g, const std::vector<long>& strategy, char player, std::size_t from) {
  const std::size_t n = g.owner.size();
  auto succ = [&](std::size_t v) {
    std::vector<std::size_t> r;
    if (g.owner[v] == player) {
      if (strategy[v] >= 0) r.push_back(static_cast<std::size_t>(strategy[v]));
    } else {
      r = g.moves[v];
    }
    return r;
  };
  std::vector<char> reach(n, 0);
  std::vector<std::size_t> q{from};
  reach[from] = 1;
  for (std::size_t i = 0; i < q.size(); ++i) {
    auto v = q[i];
    if (g.moves[v].empty()) {
      if (g.owner[v] == player) return false;
      continue;
    }
    auto s = succ(v);
    if (s.empty()) return false;  // no choice recorded
    for (auto w : s) {
      if (std::find(g.moves[v].begin(), g.moves[v].end(), w) == g.moves[v].end()) return false;
      if (!reach[w]) {
        reach[w] = 1;
        q.push_back(w);
      }
    }
  }
  // a reachable cycle whose largest priority has the wrong parity
  for (std::size_t x = 0; x < n; ++x) {
    if (!reach[x] || static_cast<char>(g.priority[x] % 2) == player) continue;
    const unsigned p = g.priority[x];
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> st;
    for (auto w : succ(x))
      if (g.priority[w] <= p && !seen[w]) {
        seen[w] = 1;
        st.push_back(w);
      }
    while (!st.empty()) {
      auto v = st.back();
      st.pop_back();
      if (v == x) return false;
      if (g.moves[v].empty()) continue;
      for (auto w : succ(v))
        if (g.priority[w] <= p && !seen[w]) {
          seen[w] = 1;
          st.push_back(w);
        }
    }
  }
  return true;
}

// ---- membership ----

namespace {

const Symbol& checked_symbol(const UnfoldAutomaton& a, const Sys& s, Vertex v) {
  const auto& l = s.labels[v];
  auto sym = a.alphabet.find(l.name);
  if (!sym || sym->rank != l.rank)
    throw std::invalid_argument("vertex " + s.id(v) + ": symbol '" + l.name + "' of rank " + std::to_string(l.rank) +
                                " is not in the automaton alphabet");
  return l;
}

void check_input(const UnfoldAutomaton& a, const Sys& s) {
  if (s.rank != 0) throw std::invalid_argument("accepts: the system must be closed");
  if (s.initials().size() != 1) throw std::invalid_argument("accepts: expected one initial vertex");
  for (Vertex v = 0; v < s.size(); ++v) {
    checked_symbol(a, s, v);
    for (unsigned d = 1; d <= s.labels[v].rank; ++d) {
      auto t = s.succ(v, d);
      if (t.size() != 1 || t[0].var) throw std::invalid_argument("accepts: vertex " + s.id(v) + " needs one successor per direction");
    }
  }
}

const std::vector<std::vector<int>>& plus_of(const UnfoldAutomaton& a, const std::string& name) {
  static const std::vector<std::vector<int>> empty;
  auto it = a.delta_plus.find(name);
  return it == a.delta_plus.end() ? empty : it->second;
}

const std::vector<int>& zero_of(const UnfoldAutomaton& a, const std::string& name) {
  static const std::vector<int> empty;
  auto it = a.delta_zero.find(name);
  return it == a.delta_zero.end() ? empty : it->second;
}

YSys transition_graph(const UnfoldAutomaton& a, const Sys& s) {
  return map_labels(s, [&](const Symbol& l) {
    ElementRep e;
    e.rank = l.rank;
    if (l.rank == 0) e.values0 = zero_of(a, l.name);
    else e.tuples = plus_of(a, l.name);
    return e;
  });
}

Vertex succ1(const Sys& s, Vertex v, unsigned d) { return s.succ(v, d).at(0).idx; }

struct Product {
  ParityGame game;
  std::map<std::pair<Vertex, std::size_t>, std::size_t> eve;
  // Eve's moves: position -> (tuple or terminal) it stands for
  std::map<std::size_t, std::vector<int>> meaning;
};

Product product_game(const UnfoldAutomaton& a, const Sys& s) {
  Product P;
  auto& g = P.game;
  const auto& d = a.dpa;
  unsigned pmax = 0;
  for (const auto& row : d.priority)
    for (unsigned p : row) pmax = std::max(pmax, p);
  const unsigned peven = pmax + pmax % 2;
  const std::size_t win = g.add(0, 0), lose = g.add(0, 1);
  g.moves[win] = {win};
  g.moves[lose] = {lose};
  std::map<std::tuple<std::size_t, int, Vertex>, std::size_t> mids;
  std::vector<std::pair<Vertex, std::size_t>> todo;
  auto eve_pos = [&](Vertex v, std::size_t q) {
    auto [it, fresh] = P.eve.try_emplace({v, q}, 0);
    if (fresh) {
      it->second = g.add(0, 0);
      todo.push_back({v, q});
    }
    return it->second;
  };
  g.initial = eve_pos(s.initials()[0], d.initial);
  while (!todo.empty()) {
    auto [v, q] = todo.back();
    todo.pop_back();
    const std::size_t e = P.eve[{v, q}];
    const auto& l = s.labels[v];
    if (l.rank == 0) {
      for (int x : zero_of(a, l.name)) {
        std::size_t c = g.add(1, 0);
        g.moves[c] = {d.final[q][x] ? win : lose};
        g.moves[e].push_back(c);
        P.meaning[c] = {x};
      }
      continue;
    }
    for (const auto& t : plus_of(a, l.name)) {
      std::size_t adam = g.add(1, 0);
      g.moves[e].push_back(adam);
      P.meaning[adam] = t;
      for (unsigned i = 1; i <= l.rank; ++i) {
        Vertex w = succ1(s, v, i);
        const int y = t[i - 1];
        auto key = std::make_tuple(q, y, w);
        auto it = mids.find(key);
        if (it == mids.end()) {
          std::size_t m = g.add(1, peven - d.priority[q][y]);
          it = mids.emplace(key, m).first;
          std::size_t target = eve_pos(w, d.next[q][y]);
          g.moves[m] = {target};
        }
        if (std::find(g.moves[adam].begin(), g.moves[adam].end(), it->second) == g.moves[adam].end())
          g.moves[adam].push_back(it->second);
      }
    }
  }
  return P;
}

std::string memory_str(const UnfoldAutomaton& a, int m) {
  if (a.mode == UnfoldAutomaton::Mode::Dpa) return "q" + std::to_string(m);
  return m == none ? "()" : a.x1[m];
}

}  // namespace

AcceptVerdict accepts(const UnfoldAutomaton& a, const Sys& s) {
  check_input(a, s);
  AcceptVerdict r;
  if (a.mode == UnfoldAutomaton::Mode::Wilke) {
    auto g = transition_graph(a, s);
    auto v = eval_closed_composition(a.wilke, g, false);
    r.accepted = v.accepted;
    r.witness = v.witness;
    if (v.accepted)
      for (Vertex x = 0; x < g.size(); ++x)
        for (std::size_t m = 0; m < v.strategy.choice[x].size(); ++m) {
          int c = v.strategy.choice[x][m];
          if (c < 0) continue;
          r.run.choice[{x, static_cast<int>(m) - 1}] =
              g.labels[x].rank == 0 ? std::vector<int>{g.labels[x].values0[c]} : g.labels[x].tuples[c];
        }
    return r;
  }
  auto P = product_game(a, s);
  auto sol = zielonka(P.game);
  r.accepted = sol.winner[P.game.initial] == 0;
  if (!r.accepted) {
    r.witness = "Adam wins the membership game from the initial position";
    return r;
  }
  for (const auto& [key, pos] : P.eve) {
    long c = sol.strategy[pos];
    if (sol.winner[pos] != 0 || c < 0) continue;
    r.run.choice[{key.first, static_cast<int>(key.second)}] = P.meaning.at(static_cast<std::size_t>(c));
  }
  return r;
}

RunCheck check_run(const UnfoldAutomaton& a, const Sys& s, const Run& run) {
  check_input(a, s);
  RunCheck r;
  for (const auto& [key, t] : run.choice) {
    auto [v, m] = key;
    if (v >= s.size()) throw std::invalid_argument("check_run: vertex out of range");
    const auto& l = s.labels[v];
    bool allowed;
    if (l.rank == 0) {
      const auto& z = zero_of(a, l.name);
      allowed = t.size() == 1 && std::find(z.begin(), z.end(), t[0]) != z.end();
    } else {
      const auto& ts = plus_of(a, l.name);
      allowed = std::find(ts.begin(), ts.end(), t) != ts.end();
    }
    if (!allowed) {
      r.witness = "choice at " + s.id(v) + " with memory " + memory_str(a, m) + " is not a transition of " + l.name;
      return r;
    }
  }
  auto choice = [&](Vertex v, int m) -> const std::vector<int>& {
    auto it = run.choice.find({v, m});
    if (it == run.choice.end())
      throw std::invalid_argument("check_run: partial run, no choice at " + s.id(v) + " with memory " + memory_str(a, m));
    return it->second;
  };
  if (a.mode == UnfoldAutomaton::Mode::Wilke) {
    auto g = transition_graph(a, s);
    Strategy st;
    st.choice.assign(g.size(), std::vector<int>(a.x1.size() + 1, -1));
    // positions reachable under the run
    std::set<std::pair<Vertex, int>> seen{{s.initials()[0], none}};
    std::vector<std::pair<Vertex, int>> q(seen.begin(), seen.end());
    for (std::size_t i = 0; i < q.size(); ++i) {
      auto [v, m] = q[i];
      const auto& t = choice(v, m);
      const auto& l = g.labels[v];
      if (l.rank == 0) {
        st.choice[v][m + 1] = static_cast<int>(std::find(l.values0.begin(), l.values0.end(), t[0]) - l.values0.begin());
        continue;
      }
      st.choice[v][m + 1] = static_cast<int>(std::find(l.tuples.begin(), l.tuples.end(), t) - l.tuples.begin());
      for (unsigned d = 1; d <= l.rank; ++d) {
        int m2 = m == none ? t[d - 1] : a.wilke.product[m][t[d - 1]];
        std::pair<Vertex, int> nxt{succ1(s, v, d), m2};
        if (seen.insert(nxt).second) q.push_back(nxt);
      }
    }
    auto v = universal_branch_check(a.wilke, strategy_graph(a.wilke, g, st, false), false);
    r.ok = v.accepted;
    r.witness = v.witness;
    return r;
  }
  // DPA: explore (vertex, state) pairs; every finite branch must end final and
  // no reachable cycle may have an odd least priority
  const auto& d = a.dpa;
  std::map<std::pair<Vertex, std::size_t>, std::size_t> idx;
  std::vector<std::pair<Vertex, std::size_t>> nodes;
  std::vector<std::vector<std::pair<std::size_t, unsigned>>> edges;
  auto node = [&](Vertex v, std::size_t q) {
    auto [it, fresh] = idx.try_emplace({v, q}, nodes.size());
    if (fresh) {
      nodes.push_back({v, q});
      edges.emplace_back();
    }
    return it->second;
  };
  node(s.initials()[0], d.initial);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto [v, q] = nodes[i];
    const auto& t = choice(v, static_cast<int>(q));
    const auto& l = s.labels[v];
    if (l.rank == 0) {
      if (!d.final[q][t[0]]) {
        r.witness = "branch ends at " + s.id(v) + " in non-final state q" + std::to_string(q) + " with type " + a.x0[t[0]];
        return r;
      }
      continue;
    }
    for (unsigned k = 1; k <= l.rank; ++k) {
      int y = t[k - 1];
      std::size_t j = node(succ1(s, v, k), d.next[q][y]);
      edges[i].push_back({j, d.priority[q][y]});
    }
  }
  for (std::size_t x = 0; x < nodes.size(); ++x)
    for (auto [y, p] : edges[x]) {
      if (p % 2 == 0) continue;
      // does y get back to x through priorities >= p?
      std::vector<char> seen(nodes.size(), 0);
      std::vector<std::size_t> st{y};
      seen[y] = 1;
      while (!st.empty()) {
        auto u = st.back();
        st.pop_back();
        if (u == x) {
          r.witness = "cycle through " + s.id(nodes[x].first) + " with least priority " + std::to_string(p);
          return r;
        }
        for (auto [w, p2] : edges[u])
          if (p2 >= p && !seen[w]) {
            seen[w] = 1;
            st.push_back(w);
          }
      }
    }
  r.ok = true;
  return r;
}

// ---- constructions ----

UnfoldAutomaton compile_algebra(const Presentation& p) {
  auto report = validate_presentation(p);
  if (!report.ok())
    throw std::invalid_argument("compile_algebra: invalid presentation: " + report.failures[0].law + " (" +
                                report.failures[0].witness + ")");
  UnfoldAutomaton a;
  a.x1 = p.y1;
  a.x0 = p.y0;
  a.alphabet = p.alphabet();
  a.mode = UnfoldAutomaton::Mode::Wilke;
  a.wilke = p;
  a.wilke.letters.clear();
  const int k = static_cast<int>(p.y1.size());
  for (const auto& l : p.letters) {
    if (l.rank == 0) {
      a.delta_zero[l.name] = {l.value0};
      continue;
    }
    auto& out = a.delta_plus[l.name];
    std::vector<int> t(l.rank, 0);
    for (;;) {
      for (const auto& c : l.decomps) {
        bool below = true;
        for (unsigned i = 0; i < l.rank; ++i)
          if (!p.leq1(t[i], c[i])) below = false;
        if (below) {
          out.push_back(t);
          break;
        }
      }
      unsigned i = 0;
      while (i < l.rank && t[i] == k - 1) t[i++] = 0;
      if (i == l.rank) break;
      ++t[i];
    }
    std::sort(out.begin(), out.end());
  }
  return a;
}

Dpa threshold_dpa(unsigned h, unsigned theta) {
  Dpa d;
  d.states = h + 1;
  d.initial = h;
  for (unsigned q = 0; q <= h; ++q) {
    d.next.emplace_back();
    d.priority.emplace_back();
    d.final.emplace_back();
    for (unsigned y = 0; y <= h; ++y) {
      unsigned m = std::min(q, y);
      d.next[q].push_back(m);
      d.priority[q].push_back(m >= theta ? 0 : 1);
      d.final[q].push_back(m >= theta);
    }
  }
  return d;
}

Dpa cobuchi_dpa() {
  Dpa d;
  d.states = 1;
  d.next = {{0, 0}};
  d.priority = {{1, 2}};  // a b is priority 1: finitely many b keeps the least recurring priority even
  d.final = {{0, 1}};
  return d;
}

UnfoldAutomaton with_dpa(UnfoldAutomaton a, const Dpa& d) {
  a.mode = UnfoldAutomaton::Mode::Dpa;
  a.dpa = d;
  return a;
}

namespace {

struct TsGroups {
  // valuation string -> rank -> symbol name
  std::map<std::string, std::map<unsigned, std::string>> by_valuation;
};

TsGroups ts_groups(const UnfoldAutomaton& a) {
  TsGroups g;
  for (const auto& s : a.alphabet.symbols) {
    auto val = parse_ts_symbol(s.name);
    if (!val) throw std::invalid_argument("symbol '" + s.name + "' is not a transition-system symbol");
    std::string key = ts_symbol_name(*val, 0);
    key = key.substr(0, key.rfind('_'));
    if (s.name != ts_symbol_name(*val, s.rank))
      throw std::invalid_argument("symbol '" + s.name + "' does not carry its rank " + std::to_string(s.rank));
    g.by_valuation[key][s.rank] = s.name;
  }
  return g;
}

}  // namespace

UnfoldAutomaton bisim_closure(const UnfoldAutomaton& a) {
  auto groups = ts_groups(a);
  UnfoldAutomaton r = a;
  const int k = static_cast<int>(a.x1.size());
  for (const auto& [val, ranks] : groups.by_valuation) {
    // count vectors of the tuples of every delta(nu_m)
    std::set<std::vector<unsigned>> counts;
    for (const auto& [n, name] : ranks) {
      if (n == 0) continue;
      auto& out = r.delta_plus[name];
      for (const auto& t : plus_of(a, name)) {
        std::vector<unsigned> c(k, 0);
        for (int x : t) ++c[x];
        counts.insert(c);
      }
      // b' is b o sigma for a surjection iff both use the same types and b'
      // repeats each type at least as often as b
      std::set<std::vector<int>> result;
      std::vector<int> t(n, 0);
      for (;;) {
        std::vector<unsigned> c2(k, 0);
        for (int x : t) ++c2[x];
        for (const auto& c : counts) {
          bool fits = true;
          for (int x = 0; x < k && fits; ++x) fits = (c[x] == 0) == (c2[x] == 0) && c[x] <= c2[x];
          if (fits) {
            result.insert(t);
            break;
          }
        }
        unsigned i = 0;
        while (i < n && t[i] == k - 1) t[i++] = 0;
        if (i == n) break;
        ++t[i];
      }
      out.assign(result.begin(), result.end());
    }
  }
  return r;
}

std::string emit_disjunctive_formula(const UnfoldAutomaton& a) {
  auto groups = ts_groups(a);
  std::string out;
  for (const auto& [val, ranks] : groups.by_valuation) {
    std::vector<std::string> disjuncts;
    if (ranks.count(0))
      for (int x : zero_of(a, ranks.at(0))) disjuncts.push_back("leaf(" + a.x0[x] + ") ∧ ∀z.false");
    std::set<std::vector<int>> seen;
    for (const auto& [m, name] : ranks) {
      if (m == 0) continue;
      for (auto t : plus_of(a, name)) {
        std::sort(t.begin(), t.end());
        if (!seen.insert(t).second) continue;
        std::string d = "∃";
        for (unsigned i = 1; i <= m; ++i) d += (i > 1 ? ",x" : "x") + std::to_string(i);
        d += ". ";
        for (unsigned i = 1; i <= m; ++i) d += a.x1[t[i - 1]] + "(x" + std::to_string(i) + ") ∧ ";
        std::vector<int> types(t.begin(), t.end());
        types.erase(std::unique(types.begin(), types.end()), types.end());
        std::string any;
        for (std::size_t i = 0; i < types.size(); ++i) any += (i ? " ∨ " : "") + a.x1[types[i]] + "(z)";
        d += "∀z.(" + any + ")";
        disjuncts.push_back(d);
      }
    }
    std::string line = "δ(" + val + ") = ";
    if (disjuncts.empty()) line += "false";
    for (std::size_t i = 0; i < disjuncts.size(); ++i) line += (i ? " ∨ " : "") + disjuncts[i];
    out += line + "\n";
  }
  return out;
}

}  // namespace regtree
