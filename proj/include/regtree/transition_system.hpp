#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "regtree/alphabet.hpp"
#include "regtree/set_system.hpp"

namespace regtree {

struct TransitionSystem {
  std::vector<std::string> ids;
  std::vector<std::vector<std::string>> props;  // sorted per state
  std::size_t initial = 0;
  std::vector<std::pair<std::size_t, std::size_t>> transitions;  // sorted, unique

  std::size_t size() const { return ids.size(); }
  std::size_t add_state(std::vector<std::string> p, std::string id = {});
  void add_transition(std::size_t u, std::size_t v);
  std::vector<std::size_t> successors(std::size_t u) const;
};

// Sigma_TS symbol for a valuation and a rank: "{p,q}_2".
std::string ts_symbol_name(const std::vector<std::string>& props, unsigned rank);
std::optional<std::vector<std::string>> parse_ts_symbol(const std::string& name);

// All Sigma_TS symbols over the given valuations with rank <= max_rank.
RankedAlphabet ts_alphabet(const std::vector<std::vector<std::string>>& valuations, unsigned max_rank);

// Closed system over Sigma_TS. A state of out-degree k gets rank k, with its
// successors in increasing state order. With padded, every state with
// successors gets the maximal out-degree and the last successor is repeated.
Sys encode_ts(const TransitionSystem& ts, bool padded = false);

// Erases directions. Throws std::invalid_argument on a non-closed input or a
// label outside Sigma_TS.
TransitionSystem decode_ts(const Sys& s);

bool ts_isomorphic(const TransitionSystem& a, const TransitionSystem& b);

}  // namespace regtree
