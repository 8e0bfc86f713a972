#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "regtree/algebra.hpp"
#include "regtree/automata.hpp"
#include "regtree/equivalence.hpp"
#include "regtree/examples.hpp"
#include "regtree/expression.hpp"
#include "regtree/io.hpp"
#include "regtree/iso.hpp"
#include "regtree/monad.hpp"
#include "regtree/morphism.hpp"
#include "regtree/parallel.hpp"
#include "regtree/random.hpp"
#include "regtree/resolution.hpp"
#include "regtree/validate.hpp"
#include "regtree/yield_algebra.hpp"

using namespace regtree;

namespace {

constexpr const char* kVersion = "1";

// A "no" answer: the report is still printed, the exit code is 1.
struct Outcome {
  json result;
  bool yes = true;
  std::string summary;
};

struct Options {
  std::string out;
  bool quiet = false;
  std::string alphabet;
};

// ---- input ----

struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json load_json(const std::string& path) {
  try {
    return read_json_file(path);
  } catch (const InputError& e) {
    throw FileError(path + ": " + (e.where == path ? std::string(e.what()).substr(path.size() + 2) : e.what()));
  }
}

template <class F>
auto located(const std::string& path, F f) {
  try {
    return f();
  } catch (const InputError& e) {
    throw FileError(path + ": " + (e.where.empty() ? "" : e.where + ": ") +
                    std::string(e.what()).substr(e.where.empty() ? 0 : e.where.size() + 2));
  } catch (const ExpressionError& e) {
    throw FileError(path + ": " + e.what());
  } catch (const json::exception& e) {
    throw FileError(path + ": " + e.what());
  }
}

std::optional<RankedAlphabet> alphabet_of(const Options& o) {
  if (o.alphabet.empty()) return std::nullopt;
  auto j = load_json(o.alphabet);
  return located(o.alphabet, [&] { return alphabet_from_json(j); });
}

// A file path, or "expr:<term>".
Sys load_system(const std::string& arg, const Options& o, std::optional<unsigned> rank = std::nullopt) {
  auto alpha = alphabet_of(o);
  const RankedAlphabet* a = alpha ? &*alpha : nullptr;
  if (arg.rfind("expr:", 0) == 0)
    return located("expression", [&] { return from_expression(arg.substr(5), a, rank); });
  auto j = load_json(arg);
  return located(arg, [&] { return system_from_json(j, a); });
}

Nested load_nested(const std::string& path, const Options& o) {
  auto alpha = alphabet_of(o);
  auto j = load_json(path);
  return located(path, [&] { return nested_from_json(j, alpha ? &*alpha : nullptr); });
}

Presentation load_presentation(const std::string& arg) {
  if (arg == "avoid") return avoid_presentation();
  if (arg == "cobuchi") return cobuchi_presentation();
  unsigned h = 0, t = 0;
  if (std::sscanf(arg.c_str(), "threshold:%u:%u", &h, &t) == 2) return threshold_presentation(h, t);
  if (std::sscanf(arg.c_str(), "avoid-ts:%u", &h) == 1) return avoid_ts_presentation(h);
  auto j = load_json(arg);
  return located(arg, [&] { return presentation_from_json(j); });
}

// An automaton file, or the report written by `aut compile`.
UnfoldAutomaton load_automaton(const std::string& path) {
  auto j = load_json(path);
  if (j.is_object() && j.contains("schema") && j.contains("result") && j["result"].contains("automaton"))
    j = j["result"]["automaton"];
  return located(path, [&] { return automaton_from_json(j); });
}

// Vertex map: array of target ids (or indices), or an object source id -> target id.
VertexMap load_map(const std::string& path, const Sys& s, const Sys& t) {
  auto j = load_json(path);
  auto target = [&](const json& x, const std::string& where) -> Vertex {
    if (x.is_number_unsigned()) return x.get<Vertex>();
    if (x.is_string())
      for (Vertex w = 0; w < t.size(); ++w)
        if (t.id(w) == x.get<std::string>()) return w;
    throw FileError(path + ": " + where + ": unknown target vertex " + x.dump());
  };
  VertexMap m(s.size(), 0);
  if (j.is_array()) {
    if (j.size() != s.size()) throw FileError(path + ": map has " + std::to_string(j.size()) + " entries, expected " + std::to_string(s.size()));
    for (std::size_t i = 0; i < j.size(); ++i) m[i] = target(j[i], "/" + std::to_string(i));
    return m;
  }
  if (!j.is_object()) throw FileError(path + ": expected an array or an object");
  for (Vertex v = 0; v < s.size(); ++v) {
    if (!j.contains(s.id(v))) throw FileError(path + ": no image for vertex '" + s.id(v) + "'");
    m[v] = target(j[s.id(v)], "/" + s.id(v));
  }
  return m;
}

std::set<std::string> parse_letters(const std::string& arg) {
  std::string body = arg.rfind("R=", 0) == 0 ? arg.substr(2) : arg;
  std::set<std::string> r;
  std::stringstream ss(body);
  for (std::string x; std::getline(ss, x, ',');)
    if (!x.empty()) r.insert(x);
  return r;
}

std::vector<int> parse_values(const std::vector<std::string>& names, const std::string& arg, const char* what) {
  std::vector<int> r;
  std::stringstream ss(arg);
  for (std::string x; std::getline(ss, x, ',');) {
    auto it = std::find(names.begin(), names.end(), x);
    if (it == names.end()) throw FileError(std::string(what) + ": unknown value '" + x + "'");
    r.push_back(static_cast<int>(it - names.begin()));
  }
  return r;
}

// ---- output ----

json map_json(const Sys& s, const Sys& t, const VertexMap& m) {
  json j = json::object();
  for (Vertex v = 0; v < s.size(); ++v) j[s.id(v)] = t.id(m[v]);
  return j;
}

json systems_json(const std::vector<Sys>& v) {
  json a = json::array();
  for (const auto& s : v) a.push_back({{"key", unfold_key(s)}, {"system", to_json(s)}});
  return a;
}

json validation_json(const Validation& v) {
  json vs = json::array();
  for (const auto& x : v.violations) vs.push_back({{"kind", x.kind}, {"message", x.message}});
  return {{"set_system", v.set_system}, {"system", v.system}, {"closed", v.closed}, {"violations", vs}};
}

json values_json(const std::vector<std::string>& names, const std::vector<int>& v) {
  json a = json::array();
  for (int x : v) a.push_back(names[x]);
  return a;
}

json rep_json(const Presentation& p, const ElementRep& e) {
  json j{{"rank", e.rank}, {"text", rep_str(p, e)}};
  if (e.rank == 0) {
    j["values"] = values_json(p.y0, e.values0);
  } else {
    json t = json::array();
    for (const auto& x : e.tuples) t.push_back(values_json(p.y1, x));
    j["tuples"] = t;
  }
  return j;
}

int emit(const std::string& command, const Outcome& o, const Options& opt) {
  json report{{"schema", std::string("regtree.") + command + ".v" + kVersion},
              {"command", command},
              {"answer", o.yes ? "yes" : "no"},
              {"result", o.result}};
  std::string text = report.dump(2) + "\n";
  if (opt.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(opt.out);
    if (!f) throw FileError(opt.out + ": cannot write");
    f << text;
  }
  if (!opt.quiet && !o.summary.empty()) (opt.out.empty() ? std::cerr : std::cout) << o.summary << "\n";
  return o.yes ? 0 : 1;
}

// ---- commands ----

Outcome cmd_validate(const std::string& input, const std::string& kind, bool require_system, const Options& opt) {
  Outcome o;
  if (kind == "ts") {
    auto j = load_json(input);
    auto ts = located(input, [&] { return ts_from_json(j); });
    auto s = encode_ts(ts);
    o.result = {{"kind", "ts"}, {"states", ts.size()}, {"transitions", ts.transitions.size()}, {"encoded", to_json(s)}};
    o.summary = "transition system with " + std::to_string(ts.size()) + " states is valid";
    return o;
  }
  if (kind == "nested") {
    auto n = load_nested(input, opt);
    auto v = validate(n);
    json inner = json::array();
    bool all = v.ok();
    for (Vertex x = 0; x < n.size(); ++x) {
      auto vi = validate(n.labels[x]);
      all = all && vi.ok();
      inner.push_back(validation_json(vi));
    }
    o.result = {{"kind", "nested"}, {"outer", validation_json(v)}, {"inner", inner}};
    o.yes = all && (!require_system || v.system);
    o.summary = o.yes ? "nested set-system is valid" : "nested set-system has violations";
    return o;
  }
  auto s = load_system(input, opt);
  auto v = validate(s);
  o.result = validation_json(v);
  o.result["kind"] = "system";
  o.result["rank"] = s.rank;
  o.result["vertices"] = s.size();
  if (v.set_system && !v.system) o.result["system_defects"] = system_defects(s);
  o.yes = v.ok() && (!require_system || v.system);
  o.summary = !v.ok() ? v.violations[0].message
                      : std::string(v.system ? "valid system" : "valid set-system, not a system") + " of rank " +
                            std::to_string(s.rank);
  return o;
}

Outcome cmd_flatten(const std::string& input, const Options& opt) {
  auto n = load_nested(input, opt);
  auto f = flatten(n);
  return {{{"system", to_json(f)}, {"is_system", is_system(f)}},
          true,
          "flattened to " + std::to_string(f.size()) + " vertices"};
}

Outcome cmd_plug(const std::string& ctx, const std::string& sys, const Options& opt) {
  auto c = load_system(ctx, opt);
  auto s = load_system(sys, opt);
  auto r = plug(c, s);
  return {{{"system", to_json(r)}, {"is_system", is_system(r)}}, true, "C[S] has " + std::to_string(r.size()) + " vertices"};
}

Outcome cmd_pieces(const std::string& ctx, const Options& opt) {
  auto c = load_system(ctx, opt);
  auto ps = pieces(c);
  json a = json::array();
  for (const auto& p : ps) a.push_back(to_json(p));
  auto back = make_context(ps);
  bool ls = check_morphism(back, c, recomposition_map(c)).locally_surjective();
  return {{{"pieces", a}, {"recomposition_locally_surjective", ls}}, true,
          std::to_string(ps.size()) + " pieces; recomposition " + (ls ? "maps locally surjectively" : "fails")};
}

Outcome cmd_context(const std::vector<std::string>& parts, const Options& opt) {
  std::vector<Sys> ps;
  for (const auto& p : parts) ps.push_back(load_system(p, opt));
  auto c = make_context(ps);
  return {{{"system", to_json(c)}}, true, "context with a hole of rank " + std::to_string(ps.size() - 1)};
}

Outcome cmd_morphism_check(const std::string& lhs, const std::string& rhs, const std::string& map, const Options& opt) {
  auto s = load_system(lhs, opt), t = load_system(rhs, opt);
  auto m = load_map(map, s, t);
  auto c = check_morphism(s, t, m);
  Outcome o;
  o.result = {{"kind", to_string(c.kind)}, {"witness", c.witness}};
  o.yes = c.morphism();
  o.summary = std::string(to_string(c.kind)) + (c.witness.empty() ? "" : ": " + c.witness);
  return o;
}

Outcome cmd_morphism_find(const std::string& lhs, const std::string& rhs, bool ls, const Options& opt) {
  auto s = load_system(lhs, opt), t = load_system(rhs, opt);
  auto m = find_morphism(s, t, {ls});
  Outcome o;
  o.yes = m.has_value();
  o.result = {{"found", o.yes}};
  if (m) {
    o.result["map"] = map_json(s, t, *m);
    o.result["kind"] = to_string(check_morphism(s, t, *m).kind);
  }
  o.summary = o.yes ? "found a " + o.result["kind"].get<std::string>() : "no morphism";
  return o;
}

Outcome cmd_pullback(const std::string& lhs, const std::string& rhs, const std::string& target, const std::string& map,
                     const std::string& map2, bool trim, const Options& opt) {
  auto s = load_system(lhs, opt), s2 = load_system(rhs, opt), t = load_system(target, opt);
  auto eta = load_map(map, s, t), eta2 = load_map(map2, s2, t);
  if (!check_morphism(s, t, eta).morphism()) throw FileError(map + ": not a morphism");
  if (!check_morphism(s2, t, eta2).morphism()) throw FileError(map2 + ": not a morphism");
  auto p = pullback(s, eta, s2, eta2, trim);
  bool commutes = compose(p.pi, eta) == compose(p.pi2, eta2);
  return {{{"apex", to_json(p.apex)},
           {"pi", map_json(p.apex, s, p.pi)},
           {"pi2", map_json(p.apex, s2, p.pi2)},
           {"commutes", commutes},
           {"pi_kind", to_string(check_morphism(p.apex, s, p.pi).kind)},
           {"pi2_kind", to_string(check_morphism(p.apex, s2, p.pi2).kind)}},
          true,
          "pullback apex with " + std::to_string(p.apex.size()) + " vertices"};
}

Outcome cmd_decide(const std::string& which, const std::string& lhs, const std::string& rhs, const std::string& witness,
                   const Options& opt) {
  Outcome o;
  json w;
  if (which == "unfold-eq") {
    auto a = load_system(lhs, opt), b = load_system(rhs, opt);
    auto v = unfold_equivalent(a, b);
    o.yes = v.equivalent;
    o.result = {{"equivalent", v.equivalent}};
    if (v.equivalent) {
      w = {{"common_unfolding", to_json(v.common)}, {"left", map_json(v.common, a, v.left)}, {"right", map_json(v.common, b, v.right)}};
    } else {
      w = {{"path", v.path}, {"reason", v.reason}};
      o.result["path"] = v.path;
      o.result["reason"] = v.reason;
    }
    o.summary = v.equivalent ? "unfold-equivalent" : "not unfold-equivalent: " + v.reason;
  } else {
    auto load_ts = [&](const std::string& p) {
      if (p.rfind("expr:", 0) != 0) {
        auto j = load_json(p);
        if (j.is_object() && j.contains("states")) return located(p, [&] { return ts_from_json(j); });
      }
      auto s = load_system(p, opt);
      return located(p, [&] {
        try {
          return decode_ts(s);
        } catch (const std::invalid_argument& e) {
          throw InputError(e.what(), "");
        }
      });
    };
    auto a = load_ts(lhs), b = load_ts(rhs);
    auto v = bisimilar(a, b);
    o.yes = v.bisimilar;
    o.result = {{"bisimilar", v.bisimilar}};
    if (v.bisimilar) {
      json rel = json::array();
      for (auto [x, y] : v.relation) rel.push_back({a.ids[x], b.ids[y]});
      w = {{"relation", rel}};
    } else {
      w = {{"depth", v.depth}, {"reason", v.reason}};
      o.result["depth"] = v.depth;
    }
    o.summary = v.bisimilar ? "bisimilar" : "not bisimilar (separated at round " + std::to_string(v.depth) + ")";
  }
  o.result["witness"] = w;
  if (!witness.empty()) {
    std::ofstream f(witness);
    if (!f) throw FileError(witness + ": cannot write");
    f << w.dump(2) << "\n";
  }
  return o;
}

Outcome cmd_yields(const std::string& input, unsigned k, std::size_t max_count, bool direct_only, const Options& opt) {
  auto s = load_system(input, opt);
  Outcome o;
  if (direct_only) {
    auto r = direct_resolutions(s, k, max_count);
    o.result = {{"memory", k}, {"truncated", r.truncated}, {"resolutions", systems_json(r.systems)}};
    o.summary = std::to_string(r.systems.size()) + " direct resolutions up to unfold-equivalence at memory " +
                std::to_string(k) + (r.truncated ? " (truncated)" : "");
    return o;
  }
  auto y = yields(s, k, max_count);
  o.result = {{"memory", k},
              {"init", systems_json(y.init.systems)},
              {"root", systems_json(y.root.systems)},
              {"truncated", y.init.truncated || y.root.truncated}};
  o.summary = std::to_string(y.init.systems.size()) + " init-yields, " + std::to_string(y.root.systems.size()) +
              " root-yields at memory " + std::to_string(k);
  return o;
}

Outcome cmd_profile(const std::string& input, const std::string& letters, unsigned k, unsigned max_m, bool root, bool small,
                    const Options& opt) {
  auto s = load_system(input, opt);
  ReachAlgebra alg;
  auto p = profile(s, alg, reach_letters(parse_letters(letters)), root, small, k, max_m);
  json pairs = json::array();
  for (const auto& e : p.pairs) pairs.push_back({{"value", e.value.str()}, {"sigma", e.sigma}});
  return {{{"pairs", pairs}, {"memory", k}, {"max_m", max_m}, {"root", root}, {"small", small}, {"truncated", p.truncated}},
          true,
          std::to_string(p.pairs.size()) + " profile pairs"};
}

Outcome cmd_recognise(const std::string& input, const std::string& letters, const std::string& accept, const Options& opt) {
  auto s = load_system(input, opt);
  std::vector<ReachValue> P;
  std::stringstream ss(accept);
  for (std::string x; std::getline(ss, x, ',');) {
    if (x == "bottom") P.push_back(ReachValue::bot(0));
    else if (x == "empty") P.push_back(ReachValue::of(0, {}));
    else throw FileError("--accept: expected bottom or empty, got '" + x + "'");
  }
  ReachAlgebra alg;
  auto lm = reach_letters(parse_letters(letters));
  auto value = rho(alg, lm, s);
  Outcome o;
  o.yes = recognises(alg, lm, P, s);
  o.result = {{"value", value.str()}, {"accepted", o.yes}};
  o.summary = "rho = " + value.str() + (o.yes ? ", accepted" : ", rejected");
  return o;
}

Outcome cmd_ya_validate(const std::string& pres) {
  auto p = load_presentation(pres);
  auto r = validate_presentation(p);
  json f = json::array();
  for (const auto& x : r.failures) f.push_back({{"law", x.law}, {"witness", x.witness}});
  Outcome o;
  o.yes = r.ok();
  o.result = {{"failures", f}, {"Y1", p.y1}, {"Y0", p.y0}, {"letters", p.letters.size()}};
  o.summary = r.ok() ? "presentation satisfies every law" : std::to_string(r.failures.size()) + " law failures, first: " +
                                                                r.failures[0].law + " (" + r.failures[0].witness + ")";
  return o;
}

Outcome cmd_ya_eval(const std::string& pres, const std::string& input, const std::string& word, const std::string& loop,
                    const std::string& terminal, const Options& opt) {
  auto p = load_presentation(pres);
  Outcome o;
  if (!input.empty()) {
    auto s = load_system(input, opt);
    auto v = eval_closed_composition(p, y_relabel(p, s));
    o.yes = v.accepted;
    o.result = {{"accepted", v.accepted}, {"witness", v.witness}};
    o.summary = v.accepted ? "accepted" : "rejected: " + v.witness;
    return o;
  }
  auto u = word.empty() ? std::vector<int>{} : parse_values(p.y1, word, "--word");
  if (!loop.empty()) {
    auto v = parse_values(p.y1, loop, "--loop");
    int z = eval_lasso(p, u, v);
    o.yes = p.accept[z];
    o.result = {{"value", p.y0[z]}, {"accepted", o.yes}};
  } else if (!terminal.empty()) {
    int z = eval_word(p, u, parse_values(p.y0, terminal, "--terminal").at(0));
    o.yes = p.accept[z];
    o.result = {{"value", p.y0[z]}, {"accepted", o.yes}};
  } else {
    int y = fold(p, u);
    o.result = {{"value", y == none ? "()" : p.y1[y]}};
  }
  o.summary = "value " + o.result["value"].get<std::string>();
  return o;
}

Outcome cmd_ya_extremal(const std::string& pres, const std::string& letter, const std::string& ctx) {
  auto p = load_presentation(pres);
  auto a = letter_rep(p, letter);
  auto e = extremal_context(p, parse_values(p.y1, ctx, "--context"), a);
  json f = json::array();
  for (const auto& x : e.failures) f.push_back({{"law", x.law}, {"witness", x.witness}});
  Outcome o;
  o.yes = e.failures.empty();
  o.result = {{"m", values_json(p.y1, e.m)}, {"failures", f}};
  o.summary = "extremal context (" + [&] {
    std::string s;
    for (std::size_t i = 0; i < e.m.size(); ++i) s += (i ? "," : "") + p.y1[e.m[i]];
    return s;
  }() + ")";
  return o;
}

Outcome cmd_ya_delta(const std::string& pres, const std::string& letter, const std::string& ctx, int mi, const std::string& mv) {
  auto p = load_presentation(pres);
  auto a = letter_rep(p, letter);
  auto c = parse_values(p.y1, ctx, "--context");
  auto e = extremal_context(p, c, a);
  DeltaOptions d;
  if (mi >= 0) {
    d.mutate_index = mi;
    d.mutate_value = parse_values(p.y1, mv, "--mutate-value").at(0);
  }
  auto r = build_delta(p, e.m, a, c, d);
  Outcome o;
  o.yes = r.ok();
  o.result = {{"extremal", values_json(p.y1, e.m)},
              {"delta", rep_json(p, r.delta)},
              {"deterministic", r.deterministic},
              {"accepts", r.accepts},
              {"accepts_literal", r.accepts_literal},
              {"leq", r.leq},
              {"bounded_leq", r.bounded_leq},
              {"exact", r.exact},
              {"witness", r.witness}};
  o.summary = "delta = " + rep_str(p, r.delta) + (r.ok() ? ", all checks pass" : ", failed: " + r.witness);
  return o;
}

Outcome cmd_aut_compile(const std::string& pres, const std::string& dpa) {
  auto p = load_presentation(pres);
  auto a = compile_algebra(p);
  unsigned h = 0, t = 0;
  if (dpa == "cobuchi") a = with_dpa(a, cobuchi_dpa());
  else if (std::sscanf(dpa.c_str(), "threshold:%u:%u", &h, &t) == 2) a = with_dpa(a, threshold_dpa(h, t));
  else if (!dpa.empty()) throw FileError("--dpa: expected cobuchi or threshold:h:theta");
  auto problems = check_automaton(a);
  if (!problems.empty()) throw FileError("--dpa: " + problems[0]);
  return {{{"automaton", to_json(a)}}, true, "automaton over " + std::to_string(a.alphabet.symbols.size()) + " symbols"};
}

Outcome cmd_aut_accept(const std::string& aut, const std::string& input, const Options& opt) {
  auto a = load_automaton(aut);
  auto s = load_system(input, opt);
  AcceptVerdict v;
  try {
    v = accepts(a, s);
  } catch (const std::invalid_argument& e) {
    throw FileError(input + ": " + e.what());
  }
  Outcome o;
  o.yes = v.accepted;
  json run = json::array();
  for (const auto& [key, t] : v.run.choice) {
    const auto& l = s.labels[key.first];
    json mem = a.mode == UnfoldAutomaton::Mode::Dpa ? json(key.second)
                                                    : json(key.second == none ? "()" : a.x1[key.second]);
    run.push_back({{"vertex", s.id(key.first)},
                   {"memory", mem},
                   {"choice", l.rank == 0 ? values_json(a.x0, t) : values_json(a.x1, t)}});
  }
  bool checked = v.accepted ? check_run(a, s, v.run).ok : false;
  o.result = {{"accepted", v.accepted}, {"run", run}, {"run_checked", checked}, {"witness", v.witness}};
  o.summary = v.accepted ? "accepted, run checked: " + std::string(checked ? "yes" : "no") : "rejected";
  return o;
}

Outcome cmd_aut_closure(const std::string& aut) {
  auto a = load_automaton(aut);
  auto c = bisim_closure(a);
  std::size_t before = 0, after = 0;
  for (const auto& [k, v] : a.delta_plus) before += v.size();
  for (const auto& [k, v] : c.delta_plus) after += v.size();
  return {{{"automaton", to_json(c)}}, true,
          "closure grows the transitions from " + std::to_string(before) + " to " + std::to_string(after)};
}

Outcome cmd_aut_formula(const std::string& aut) {
  auto a = load_automaton(aut);
  auto f = emit_disjunctive_formula(a);
  json lines = json::array();
  std::stringstream ss(f);
  for (std::string l; std::getline(ss, l);) lines.push_back(l);
  return {{{"formula", lines}}, true, f.substr(0, f.empty() ? 0 : f.size() - 1)};
}

Outcome cmd_corpus(std::uint64_t seed, unsigned count, const std::string& kind, unsigned max_vertices, unsigned rank,
                   const Options& opt) {
  auto alpha = alphabet_of(opt);
  RankedAlphabet a = alpha ? *alpha : RankedAlphabet{{{"a2", 2}, {"a1", 1}, {"b", 0}, {"c", 0}}};
  GenParams gp;
  gp.max_vertices = std::max(1u, max_vertices);
  if (rank == 0) gp.var_prob = 0;
  Rng rng(seed);
  json items = json::array();
  for (unsigned i = 0; i < count; ++i) {
    if (kind == "system") items.push_back(to_json(random_system<Symbol>(rng, rank, symbol_gen(a), gp)));
    else if (kind == "set-system") items.push_back(to_json(random_set_system<Symbol>(rng, rank, symbol_gen(a), gp)));
    else if (kind == "nested") items.push_back(to_json(random_nested(rng, a, rank, 2, gp)));
    else if (kind == "context") items.push_back(to_json(random_context(rng, a, rank, gp)));
    else if (kind == "ts") items.push_back(to_json(random_ts(rng, max_vertices, {"p", "q"})));
    else throw FileError("--kind: expected system, set-system, nested, context or ts");
  }
  return {{{"seed", seed}, {"count", count}, {"kind", kind}, {"alphabet", to_json(a)}, {"items", items}}, true,
          std::to_string(count) + " " + kind + " items from seed " + std::to_string(seed)};
}

Outcome cmd_suite() {
  auto results = run_examples(worker_count());
  json a = json::array();
  std::size_t passed = 0;
  std::string summary;
  for (const auto& r : results) {
    a.push_back({{"id", r.id}, {"module", r.module}, {"claim", r.claim}, {"pass", r.pass}, {"detail", r.detail}});
    passed += r.pass;
    summary += std::string(r.pass ? "PASS " : "FAIL ") + r.id + "  " + r.claim + (r.pass ? "" : "  [" + r.detail + "]") + "\n";
  }
  summary += std::to_string(passed) + "/" + std::to_string(results.size()) + " examples pass";
  return {{{"examples", a}, {"passed", passed}, {"total", results.size()}}, passed == results.size(), summary};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regtree: regular trees, set-systems, yield algebras and unfold-automata"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--out", opt.out, "write the JSON report to this file (summary goes to stdout)");
  app.add_flag("--quiet", opt.quiet, "no human summary");
  app.add_option("--alphabet", opt.alphabet, "ranked alphabet file for system inputs");
  app.set_version_flag("--version", std::string("regtree report schema v") + kVersion);

  std::function<Outcome()> action;
  std::string command;
  auto bind = [&](CLI::App* sub, std::string name, std::function<Outcome()> f) {
    sub->callback([&, name, f] {
      command = name;
      action = f;
    });
  };

  // validate
  std::string input, kind = "system";
  bool require_system = false;
  auto* v = app.add_subcommand("validate", "check the invariants of a (set-)system, nested system or transition system");
  v->add_option("--input", input, "input file or expr:<term>")->required();
  v->add_option("--kind", kind, "system | nested | ts")->check(CLI::IsMember({"system", "nested", "ts"}));
  v->add_flag("--require-system", require_system, "answer no unless the input is a system");
  bind(v, "validate", [&] { return cmd_validate(input, kind, require_system, opt); });

  auto* fl = app.add_subcommand("flatten", "flatten a nested set-system");
  fl->add_option("--input", input)->required();
  bind(fl, "flatten", [&] { return cmd_flatten(input, opt); });

  std::string ctx, sys;
  auto* pl = app.add_subcommand("plug", "plug a system into the hole of a context");
  pl->add_option("--context", ctx)->required();
  pl->add_option("--system", sys)->required();
  bind(pl, "plug", [&] { return cmd_plug(ctx, sys, opt); });

  auto* pc = app.add_subcommand("pieces", "decompose a closed context into its pieces");
  pc->add_option("--context", ctx)->required();
  bind(pc, "pieces", [&] { return cmd_pieces(ctx, opt); });

  std::vector<std::string> parts;
  auto* cx = app.add_subcommand("context", "build Context(S0..Sn) from rank-1 set-systems");
  cx->add_option("--pieces", parts)->required()->expected(1, -1);
  bind(cx, "context", [&] { return cmd_context(parts, opt); });

  // morphisms
  std::string lhs, rhs, map, map2, target;
  bool ls = false, trim = false;
  auto* mo = app.add_subcommand("morphism", "check, find or pull back morphisms");
  mo->require_subcommand(1);
  auto* mc = mo->add_subcommand("check", "classify a vertex map");
  mc->add_option("--lhs", lhs)->required();
  mc->add_option("--rhs", rhs)->required();
  mc->add_option("--map", map)->required();
  bind(mc, "morphism.check", [&] { return cmd_morphism_check(lhs, rhs, map, opt); });
  auto* mf = mo->add_subcommand("find", "search for a morphism");
  mf->add_option("--lhs", lhs)->required();
  mf->add_option("--rhs", rhs)->required();
  mf->add_flag("--locally-surjective", ls);
  bind(mf, "morphism.find", [&] { return cmd_morphism_find(lhs, rhs, ls, opt); });
  auto add_pullback = [&](CLI::App* p, const std::string& name) {
    p->add_option("--lhs", lhs, "first source")->required();
    p->add_option("--rhs", rhs, "second source")->required();
    p->add_option("--target", target, "common target")->required();
    p->add_option("--map", map, "morphism lhs -> target")->required();
    p->add_option("--map2", map2, "morphism rhs -> target")->required();
    p->add_flag("--trim", trim, "keep only the reachable part of the apex");
    bind(p, name, [&] { return cmd_pullback(lhs, rhs, target, map, map2, trim, opt); });
  };
  add_pullback(mo->add_subcommand("pullback", "pullback of two morphisms into one system"), "morphism.pullback");
  add_pullback(app.add_subcommand("pullback", "pullback of two morphisms into one system"), "pullback");

  // decide
  std::string witness;
  auto* de = app.add_subcommand("decide", "decide unfold-equivalence or bisimilarity");
  de->require_subcommand(1);
  for (const char* w : {"unfold-eq", "bisim"}) {
    auto* d = de->add_subcommand(w, std::string(w) == "bisim" ? "bisimilarity of transition systems" : "unfold-equivalence of systems");
    d->add_option("--lhs", lhs)->required();
    d->add_option("--rhs", rhs)->required();
    d->add_option("--witness", witness, "write the witness to this file");
    std::string which = w;
    bind(d, std::string("decide.") + w, [&, which] { return cmd_decide(which, lhs, rhs, witness, opt); });
  }

  // resolutions
  unsigned memory = 1, max_m = 0;
  std::size_t max_count = 100000;
  auto* y = app.add_subcommand("yields", "memory-k init- and root-yields up to unfold-equivalence");
  y->add_option("--input", input)->required();
  y->add_option("--memory", memory, "history length k")->capture_default_str();
  y->add_option("--max-count", max_count, "enumeration cap")->capture_default_str();
  bind(y, "yields", [&] { return cmd_yields(input, memory, max_count, false, opt); });
  auto* rs = app.add_subcommand("resolve", "memory-k direct resolutions up to unfold-equivalence");
  rs->add_option("--input", input)->required();
  rs->add_option("--memory", memory)->capture_default_str();
  rs->add_option("--max-count", max_count)->capture_default_str();
  bind(rs, "resolve", [&] { return cmd_yields(input, memory, max_count, true, opt); });

  std::string letters = "R=b", accept = "bottom", algebra = "reach";
  bool root = false, small = false;
  auto* pr = app.add_subcommand("profile", "profile over the reachability algebra");
  pr->add_option("--input", input)->required();
  pr->add_option("--letters", letters, "R=<symbols>")->capture_default_str();
  pr->add_option("--memory", memory)->capture_default_str();
  pr->add_option("--max-m", max_m, "largest m (default rank * |A_1|)");
  pr->add_option("--algebra", algebra)->check(CLI::IsMember({"reach"}));
  pr->add_flag("--root", root, "root profile");
  pr->add_flag("--small", small, "small profile");
  bind(pr, "profile", [&] {
    if (max_m == 0) {
      auto s = load_system(input, opt);
      max_m = std::max(1u, s.rank * 3);
    }
    return cmd_profile(input, letters, memory, max_m, root, small, opt);
  });

  auto* rc = app.add_subcommand("recognise", "recognition by the reachability algebra");
  rc->add_option("--input", input)->required();
  rc->add_option("--algebra", algebra)->check(CLI::IsMember({"reach"}));
  rc->add_option("--letters", letters, "R=<symbols>")->capture_default_str();
  rc->add_option("--accept", accept, "bottom | empty (comma separated)")->capture_default_str();
  bind(rc, "recognise", [&] { return cmd_recognise(input, letters, accept, opt); });

  // yield algebras
  std::string pres, letter, word, loop, terminal, mutate_value;
  int mutate_index = -1;
  auto* ya = app.add_subcommand("ya", "finite yield-algebra presentations");
  ya->require_subcommand(1);
  const char* pres_help = "file, or avoid | cobuchi | threshold:h:theta | avoid-ts:max_rank";
  auto* yv = ya->add_subcommand("validate", "check the presentation laws");
  yv->add_option("--presentation", pres, pres_help)->required();
  bind(yv, "ya.validate", [&] { return cmd_ya_validate(pres); });
  auto* ye = ya->add_subcommand("eval", "evaluate a closed system or a word/lasso");
  ye->add_option("--presentation", pres, pres_help)->required();
  ye->add_option("--input", input, "closed system over the presentation letters");
  ye->add_option("--word", word, "comma separated Y1 values");
  ye->add_option("--loop", loop, "comma separated Y1 values repeated forever");
  ye->add_option("--terminal", terminal, "Y0 value ending the word");
  bind(ye, "ya.eval", [&] { return cmd_ya_eval(pres, input, word, loop, terminal, opt); });
  auto* yx = ya->add_subcommand("extremal", "minimal accepting context for a letter");
  yx->add_option("--presentation", pres, pres_help)->required();
  yx->add_option("--letter", letter)->required();
  yx->add_option("--context", ctx, "comma separated Y1 values m0..mk")->required();
  bind(yx, "ya.extremal", [&] { return cmd_ya_extremal(pres, letter, ctx); });
  auto* yd = ya->add_subcommand("delta", "deterministic refinement of a letter in a context");
  yd->add_option("--presentation", pres, pres_help)->required();
  yd->add_option("--letter", letter)->required();
  yd->add_option("--context", ctx, "comma separated Y1 values m0..mk")->required();
  yd->add_option("--mutate-index", mutate_index, "negative control: replace delta_i");
  yd->add_option("--mutate-value", mutate_value, "negative control: the replacing Y1 value");
  bind(yd, "ya.delta", [&] { return cmd_ya_delta(pres, letter, ctx, mutate_index, mutate_value); });

  // automata
  std::string aut, dpa;
  auto* au = app.add_subcommand("aut", "unfold-automata");
  au->require_subcommand(1);
  auto* ac = au->add_subcommand("compile", "automaton of a presentation");
  ac->add_option("--presentation", pres, pres_help)->required();
  ac->add_option("--dpa", dpa, "use a parity condition: cobuchi | threshold:h:theta");
  bind(ac, "aut.compile", [&] { return cmd_aut_compile(pres, dpa); });
  auto* aa = au->add_subcommand("accept", "membership of a closed system");
  aa->add_option("--automaton", aut)->required();
  aa->add_option("--input", input)->required();
  bind(aa, "aut.accept", [&] { return cmd_aut_accept(aut, input, opt); });
  auto* al = au->add_subcommand("closure", "bisimulation closure");
  al->add_option("--automaton", aut)->required();
  bind(al, "aut.closure", [&] { return cmd_aut_closure(aut); });
  auto* af = au->add_subcommand("emit-formula", "disjunctive normal form of the transitions");
  af->add_option("--automaton", aut)->required();
  bind(af, "aut.emit-formula", [&] { return cmd_aut_formula(aut); });

  // corpus and suite
  std::uint64_t seed = 0;
  unsigned count = 10, max_vertices = 4, rank = 0;
  std::string ckind = "system";
  auto* co = app.add_subcommand("corpus", "seeded random inputs");
  co->add_option("--seed", seed)->required();
  co->add_option("--count", count)->required();
  co->add_option("--kind", ckind, "system | set-system | nested | context | ts")->capture_default_str();
  co->add_option("--max-vertices", max_vertices)->capture_default_str();
  co->add_option("--rank", rank, "rank of the items (hole rank for contexts)")->capture_default_str();
  bind(co, "corpus", [&] { return cmd_corpus(seed, count, ckind, max_vertices, rank, opt); });

  bool worked = false;
  auto* su = app.add_subcommand("suite", "run the worked examples");
  su->add_flag("--paper-examples", worked, "every worked example with its expected value")->required();
  bind(su, "suite", [&] { return cmd_suite(); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    return emit(command, action(), opt);
  } catch (const FileError& e) {
    std::cerr << "regtree: error: " << e.what() << "\n";
  } catch (const InputError& e) {
    std::cerr << "regtree: error: " << e.what() << "\n";
  } catch (const ExpressionError& e) {
    std::cerr << "regtree: error: " << e.what() << "\n";
  } catch (const PresentationError& e) {
    std::cerr << "regtree: error: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    std::cerr << "regtree: error: " << e.what() << "\n";
  } catch (const std::out_of_range& e) {
    std::cerr << "regtree: error: " << e.what() << "\n";
  }
  return 2;
}
