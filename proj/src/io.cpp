#include "regtree/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace regtree {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file", path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(e.what(), path);
  }
}

namespace {

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'", where);
  return j.at(key);
}

unsigned natural(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long>() < 0) throw InputError("expected a non-negative integer", where);
  return j.get<unsigned>();
}

template <class L, class LabelOf>
SetSystem<L> read_system(const json& j, const std::string& where, LabelOf label_of) {
  SetSystem<L> s;
  s.rank = natural(field(j, "rank", where), where + "/rank");
  const json& vs = field(j, "vertices", where);
  if (!vs.is_array()) throw InputError("expected an array", where + "/vertices");
  std::map<std::string, Vertex> index;
  // ranks of labels without an alphabet may depend on the edges, so read edges first
  std::map<std::string, unsigned> max_dir;
  if (j.contains("edges")) {
    const json& es = j.at("edges");
    if (!es.is_array()) throw InputError("expected an array", where + "/edges");
    for (std::size_t i = 0; i < es.size(); ++i) {
      std::string w = where + "/edges/" + std::to_string(i);
      std::string src = field(es[i], "src", w).get<std::string>();
      unsigned d = natural(field(es[i], "dir", w), w + "/dir");
      max_dir[src] = std::max(max_dir[src], d);
    }
  }
  for (std::size_t i = 0; i < vs.size(); ++i) {
    std::string w = where + "/vertices/" + std::to_string(i);
    const json& v = vs[i];
    std::string id = field(v, "id", w).is_string() ? v.at("id").get<std::string>() : v.at("id").dump();
    if (index.count(id)) throw InputError("duplicate vertex id '" + id + "'", w);
    bool ini = v.value("initial", false);
    bool rt = v.value("root", false);
    index[id] = s.add_vertex(label_of(v, w, max_dir[id]), ini, rt, id);
  }
  if (j.contains("edges")) {
    const json& es = j.at("edges");
    for (std::size_t i = 0; i < es.size(); ++i) {
      std::string w = where + "/edges/" + std::to_string(i);
      const json& e = es[i];
      std::string src = e.at("src").get<std::string>();
      if (!index.count(src)) throw InputError("unknown source vertex '" + src + "'", w);
      unsigned d = natural(e.at("dir"), w + "/dir");
      if (e.contains("dst")) {
        std::string dst = e.at("dst").is_string() ? e.at("dst").get<std::string>() : e.at("dst").dump();
        if (!index.count(dst)) throw InputError("unknown target vertex '" + dst + "'", w);
        s.add_edge(index[src], d, Target::vertex(index[dst]));
      } else if (e.contains("var")) {
        s.add_edge(index[src], d, Target::variable(natural(e.at("var"), w + "/var")));
      } else {
        throw InputError("edge needs 'dst' or 'var'", w);
      }
    }
  }
  return s;
}

template <class L, class LabelJson>
json write_system(const SetSystem<L>& s, LabelJson label_json) {
  json j;
  j["rank"] = s.rank;
  j["vertices"] = json::array();
  for (Vertex v = 0; v < s.size(); ++v) {
    json x;
    x["id"] = s.id(v);
    label_json(x, s.labels[v]);
    if (s.initial[v]) x["initial"] = true;
    if (s.root[v]) x["root"] = true;
    j["vertices"].push_back(x);
  }
  j["edges"] = json::array();
  for (Vertex v = 0; v < s.size(); ++v)
    for (const auto& a : s.out[v]) {
      json e;
      e["src"] = s.id(v);
      e["dir"] = a.dir;
      if (a.to.var)
        e["var"] = a.to.idx;
      else
        e["dst"] = s.id(a.to.idx);
      j["edges"].push_back(e);
    }
  return j;
}

}  // namespace

RankedAlphabet alphabet_from_json(const json& j) {
  RankedAlphabet a;
  const json& syms = field(j, "symbols", "");
  if (!syms.is_array()) throw InputError("expected an array", "/symbols");
  for (std::size_t i = 0; i < syms.size(); ++i) {
    std::string w = "/symbols/" + std::to_string(i);
    a.symbols.push_back({field(syms[i], "name", w).get<std::string>(), natural(field(syms[i], "rank", w), w + "/rank")});
  }
  auto d = a.duplicates();
  if (!d.empty()) throw InputError("duplicate symbol '" + d[0] + "'", "/symbols");
  return a;
}

json to_json(const RankedAlphabet& a) {
  json j;
  j["symbols"] = json::array();
  for (const auto& s : a.symbols) j["symbols"].push_back({{"name", s.name}, {"rank", s.rank}});
  return j;
}

Sys system_from_json(const json& j, const RankedAlphabet* alphabet, const std::string& where) {
  return read_system<Symbol>(j, where, [&](const json& v, const std::string& w, unsigned max_dir) {
    const json& l = field(v, "label", w);
    if (!l.is_string()) throw InputError("label must be a symbol name", w + "/label");
    std::string name = l.get<std::string>();
    if (alphabet && name != "[]") {
      auto sym = alphabet->find(name);
      if (!sym) throw InputError("symbol '" + name + "' is not in the alphabet", w + "/label");
      return *sym;
    }
    unsigned rank = v.contains("arity") ? natural(v.at("arity"), w + "/arity") : max_dir;
    return Symbol{name, rank};
  });
}

json to_json(const Sys& s) {
  return write_system(s, [](json& x, const Symbol& l) {
    x["label"] = l.name;
    x["arity"] = l.rank;
  });
}

Nested nested_from_json(const json& j, const RankedAlphabet* alphabet, const std::string& where) {
  return read_system<Sys>(j, where, [&](const json& v, const std::string& w, unsigned) {
    return system_from_json(field(v, "label", w), alphabet, w + "/label");
  });
}

json to_json(const Nested& s) {
  return write_system(s, [](json& x, const Sys& l) { x["label"] = to_json(l); });
}

TransitionSystem ts_from_json(const json& j) {
  TransitionSystem ts;
  std::map<std::string, std::size_t> index;
  const json& st = field(j, "states", "");
  for (std::size_t i = 0; i < st.size(); ++i) {
    std::string w = "/states/" + std::to_string(i);
    std::string id = field(st[i], "id", w).get<std::string>();
    if (index.count(id)) throw InputError("duplicate state '" + id + "'", w);
    std::vector<std::string> props;
    if (st[i].contains("props")) props = st[i].at("props").get<std::vector<std::string>>();
    index[id] = ts.add_state(props, id);
  }
  std::string ini = field(j, "initial", "").get<std::string>();
  if (!index.count(ini)) throw InputError("unknown initial state '" + ini + "'", "/initial");
  ts.initial = index[ini];
  if (j.contains("transitions"))
    for (std::size_t i = 0; i < j.at("transitions").size(); ++i) {
      const json& t = j.at("transitions")[i];
      std::string w = "/transitions/" + std::to_string(i);
      if (!t.is_array() || t.size() != 2) throw InputError("expected [u, v]", w);
      auto u = t[0].get<std::string>(), v = t[1].get<std::string>();
      if (!index.count(u) || !index.count(v)) throw InputError("unknown state", w);
      ts.add_transition(index[u], index[v]);
    }
  return ts;
}

json to_json(const TransitionSystem& ts) {
  json j;
  j["states"] = json::array();
  for (std::size_t u = 0; u < ts.size(); ++u) j["states"].push_back({{"id", ts.ids[u]}, {"props", ts.props[u]}});
  j["initial"] = ts.ids[ts.initial];
  j["transitions"] = json::array();
  for (auto [u, v] : ts.transitions) j["transitions"].push_back({ts.ids[u], ts.ids[v]});
  return j;
}

std::string to_dot(const Sys& s, const std::string& name) {
  std::ostringstream o;
  o << "digraph \"" << name << "\" {\n";
  for (Vertex v = 0; v < s.size(); ++v) {
    o << "  v" << v << " [label=\"" << s.labels[v].name << "\"";
    if (s.initial[v]) o << ", shape=doublecircle";
    if (s.root[v]) o << ", style=filled";
    o << "];\n";
  }
  bool vars = false;
  for (Vertex v = 0; v < s.size(); ++v)
    for (const auto& a : s.out[v]) {
      if (a.to.var) {
        vars = true;
        o << "  v" << v << " -> x" << a.to.idx << " [label=\"" << a.dir << "\"];\n";
      } else {
        o << "  v" << v << " -> v" << a.to.idx << " [label=\"" << a.dir << "\"];\n";
      }
    }
  if (vars)
    for (unsigned i = 1; i <= s.rank; ++i) o << "  x" << i << " [shape=plaintext];\n";
  o << "}\n";
  return o.str();
}

}  // namespace regtree
