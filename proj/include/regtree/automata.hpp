#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "regtree/alphabet.hpp"
#include "regtree/set_system.hpp"
#include "regtree/yield_algebra.hpp"

namespace regtree {

// Deterministic parity automaton over X1 with priorities on transitions,
// read with the min-even convention; final decides the terminal letters.
struct Dpa {
  std::size_t states = 0;
  std::size_t initial = 0;
  std::vector<std::vector<std::size_t>> next;   // [q][x1]
  std::vector<std::vector<unsigned>> priority;  // [q][x1]
  std::vector<std::vector<char>> final;         // [q][x0]
};

struct UnfoldAutomaton {
  enum class Mode { Wilke, Dpa };

  std::vector<std::string> x1, x0;
  RankedAlphabet alphabet;
  std::map<std::string, std::vector<std::vector<int>>> delta_plus;
  std::map<std::string, std::vector<int>> delta_zero;
  Mode mode = Mode::Wilke;
  Presentation wilke;  // acceptance tables (letters unused)
  Dpa dpa;
};

UnfoldAutomaton automaton_from_json(const nlohmann::json& j);
nlohmann::json to_json(const UnfoldAutomaton& a);

// Structural checks: tuple lengths, value ranges, determinism of the DPA.
std::vector<std::string> check_automaton(const UnfoldAutomaton& a);

// ---- parity games ----

struct ParityGame {
  std::vector<char> owner;  // 0 Eve, 1 Adam
  std::vector<unsigned> priority;
  std::vector<std::vector<std::size_t>> moves;
  std::size_t initial = 0;

  std::size_t add(char who, unsigned prio) {
    owner.push_back(who);
    priority.push_back(prio);
    moves.emplace_back();
    return owner.size() - 1;
  }
};

struct GameSolution {
  std::vector<char> winner;        // 0 Eve, 1 Adam
  std::vector<long> strategy;      // chosen successor of the winner's own positions, -1 elsewhere
};

// Max-parity, Eve wins on even. Positions without moves lose for their owner.
GameSolution zielonka(const ParityGame& g);

// Every play from `from` that follows `strategy` at the positions of `player`
// is won by `player`.
bool strategy_wins(const ParityGame& g, const std::vector<long>& strategy, char player, std::size_t from);

// ---- membership ----

// A run: the tuple (or terminal type) chosen at each (vertex, memory) pair.
// Memory is the prefix value in Wilke mode (none for the empty prefix) and
// the DPA state in DPA mode.
struct Run {
  std::map<std::pair<Vertex, int>, std::vector<int>> choice;
};

struct AcceptVerdict {
  bool accepted = false;
  Run run;
  std::string witness;
};

AcceptVerdict accepts(const UnfoldAutomaton& a, const Sys& s);

struct RunCheck {
  bool ok = false;
  std::string witness;
};

// Throws std::invalid_argument when the run is partial on the explored part.
RunCheck check_run(const UnfoldAutomaton& a, const Sys& s, const Run& run);

// ---- constructions ----

UnfoldAutomaton compile_algebra(const Presentation& p);

// Running minimum below theta sends to priority 1; the AVOID tables are the
// case h = 1, theta = 1.
Dpa threshold_dpa(unsigned h, unsigned theta);
Dpa cobuchi_dpa();
UnfoldAutomaton with_dpa(UnfoldAutomaton a, const Dpa& d);

UnfoldAutomaton bisim_closure(const UnfoldAutomaton& a);
std::string emit_disjunctive_formula(const UnfoldAutomaton& a);

}  // namespace regtree
