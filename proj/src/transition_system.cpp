#include "regtree/transition_system.hpp"

#include <algorithm>
#include <stdexcept>

#include "regtree/iso.hpp"
#include "regtree/validate.hpp"

namespace regtree {

std::size_t TransitionSystem::add_state(std::vector<std::string> p, std::string id) {
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (id.empty()) id = "s" + std::to_string(ids.size());
  ids.push_back(std::move(id));
  props.push_back(std::move(p));
  return ids.size() - 1;
}

void TransitionSystem::add_transition(std::size_t u, std::size_t v) {
  std::pair<std::size_t, std::size_t> t{u, v};
  auto it = std::lower_bound(transitions.begin(), transitions.end(), t);
  if (it == transitions.end() || *it != t) transitions.insert(it, t);
}

std::vector<std::size_t> TransitionSystem::successors(std::size_t u) const {
  std::vector<std::size_t> r;
  auto it = std::lower_bound(transitions.begin(), transitions.end(), std::pair<std::size_t, std::size_t>{u, 0});
  for (; it != transitions.end() && it->first == u; ++it) r.push_back(it->second);
  return r;
}

std::string ts_symbol_name(const std::vector<std::string>& props, unsigned rank) {
  std::string r = "{";
  for (std::size_t i = 0; i < props.size(); ++i) r += (i ? "," : "") + props[i];
  return r + "}_" + std::to_string(rank);
}

std::optional<std::vector<std::string>> parse_ts_symbol(const std::string& name) {
  if (name.empty() || name[0] != '{') return std::nullopt;
  auto close = name.find('}');
  if (close == std::string::npos || close + 1 >= name.size() || name[close + 1] != '_') return std::nullopt;
  std::vector<std::string> props;
  std::string cur;
  for (std::size_t i = 1; i < close; ++i) {
    if (name[i] == ',') {
      props.push_back(cur);
      cur.clear();
    } else {
      cur += name[i];
    }
  }
  if (!cur.empty()) props.push_back(cur);
  return props;
}

RankedAlphabet ts_alphabet(const std::vector<std::vector<std::string>>& valuations, unsigned max_rank) {
  RankedAlphabet a;
  for (const auto& v : valuations)
    for (unsigned n = 0; n <= max_rank; ++n) a.symbols.push_back({ts_symbol_name(v, n), n});
  return a;
}

Sys encode_ts(const TransitionSystem& ts, bool padded) {
  Sys s;
  unsigned width = 0;
  for (std::size_t u = 0; u < ts.size(); ++u) width = std::max<unsigned>(width, ts.successors(u).size());
  for (std::size_t u = 0; u < ts.size(); ++u) {
    auto succ = ts.successors(u);
    unsigned k = succ.empty() ? 0 : (padded ? width : static_cast<unsigned>(succ.size()));
    s.add_vertex(Symbol{ts_symbol_name(ts.props[u], k), k}, u == ts.initial, false, ts.ids[u]);
  }
  for (std::size_t u = 0; u < ts.size(); ++u) {
    auto succ = ts.successors(u);
    for (unsigned d = 1; d <= s.labels[u].rank; ++d)
      s.add_edge(u, d, Target::vertex(succ[std::min<std::size_t>(d - 1, succ.size() - 1)]));
  }
  return s;
}

TransitionSystem decode_ts(const Sys& s) {
  auto v = validate(s);
  if (!v.system) throw std::invalid_argument("decode_ts: input is not a system");
  if (!v.closed) throw std::invalid_argument("decode_ts: input is not closed");
  TransitionSystem ts;
  for (Vertex u = 0; u < s.size(); ++u) {
    auto props = parse_ts_symbol(s.labels[u].name);
    if (!props || ts_symbol_name(*props, s.labels[u].rank) != s.labels[u].name)
      throw std::invalid_argument("decode_ts: label '" + s.labels[u].name + "' is not a transition-system symbol");
    ts.add_state(*props, s.id(u));
    if (s.initial[u]) ts.initial = u;
  }
  for (Vertex u = 0; u < s.size(); ++u)
    for (const auto& a : s.out[u]) ts.add_transition(u, a.to.idx);
  return ts;
}

namespace {

Sys as_graph(const TransitionSystem& ts) {
  Sys g;
  for (std::size_t u = 0; u < ts.size(); ++u) g.add_vertex(Symbol{ts_symbol_name(ts.props[u], 1), 1}, u == ts.initial);
  for (auto [u, v] : ts.transitions) g.add_edge(u, 1, Target::vertex(v));
  return g;
}

}  // namespace

bool ts_isomorphic(const TransitionSystem& a, const TransitionSystem& b) {
  return isomorphic(as_graph(a), as_graph(b));
}

}  // namespace regtree
