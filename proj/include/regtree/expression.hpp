#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "regtree/alphabet.hpp"
#include "regtree/set_system.hpp"

namespace regtree {

struct ExpressionError : std::runtime_error {
  std::size_t position;
  ExpressionError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
};

// Builds the tree-shaped set-system of a term such as "a2(x1, a2(b, x2))".
// "+" is the disjoint sum and "[]" the hole symbol. Without an alphabet, a
// symbol's rank is its argument count. The rank of the result is the largest
// variable index unless given explicitly.
Sys from_expression(const std::string& expr, const RankedAlphabet* alphabet = nullptr,
                    std::optional<unsigned> rank = std::nullopt);

inline Sys from_expression(const std::string& expr, const RankedAlphabet& alphabet,
                           std::optional<unsigned> rank = std::nullopt) {
  return from_expression(expr, &alphabet, rank);
}

}  // namespace regtree
