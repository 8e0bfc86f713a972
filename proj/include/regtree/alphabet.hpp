#pragma once

#include <optional>
#include <string>
#include <vector>

#include "regtree/set_system.hpp"

namespace regtree {

struct RankedAlphabet {
  std::vector<Symbol> symbols;

  std::optional<Symbol> find(const std::string& name) const {
    for (const auto& s : symbols)
      if (s.name == name) return s;
    return std::nullopt;
  }

  std::vector<Symbol> of_rank(unsigned n) const {
    std::vector<Symbol> r;
    for (const auto& s : symbols)
      if (s.rank == n) r.push_back(s);
    return r;
  }

  unsigned max_rank() const {
    unsigned m = 0;
    for (const auto& s : symbols) m = std::max(m, s.rank);
    return m;
  }

  // Duplicate names, in order of first repetition.
  std::vector<std::string> duplicates() const {
    std::vector<std::string> d;
    for (std::size_t i = 0; i < symbols.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (symbols[i].name == symbols[j].name) {
          d.push_back(symbols[i].name);
          break;
        }
    return d;
  }
};

}  // namespace regtree
