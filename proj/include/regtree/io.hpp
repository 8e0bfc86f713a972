#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "regtree/alphabet.hpp"
#include "regtree/set_system.hpp"
#include "regtree/transition_system.hpp"

namespace regtree {

using json = nlohmann::json;

// Malformed input document; where is a JSON pointer into the document.
struct InputError : std::runtime_error {
  std::string where;
  InputError(const std::string& msg, std::string w)
      : std::runtime_error(w.empty() ? msg : w + ": " + msg), where(std::move(w)) {}
};

json read_json_file(const std::string& path);

RankedAlphabet alphabet_from_json(const json& j);
json to_json(const RankedAlphabet& a);

// Vertex labels are symbol names; the rank comes from the alphabet when one is
// given, otherwise from an "arity" field, otherwise from the largest direction used.
Sys system_from_json(const json& j, const RankedAlphabet* alphabet = nullptr, const std::string& where = "");
json to_json(const Sys& s);

// Nested systems carry full system documents as vertex labels.
Nested nested_from_json(const json& j, const RankedAlphabet* alphabet = nullptr, const std::string& where = "");
json to_json(const Nested& s);

TransitionSystem ts_from_json(const json& j);
json to_json(const TransitionSystem& ts);

std::string to_dot(const Sys& s, const std::string& name = "S");

}  // namespace regtree
