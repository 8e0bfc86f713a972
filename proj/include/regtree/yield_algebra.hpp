#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "regtree/alphabet.hpp"
#include "regtree/set_system.hpp"

namespace regtree {

// Finite presentation of a yield-algebra through its sorts 1 and 0.
// Elements are indices into y1 / y0; product[a][b] is a.b (a applied after b).
struct Presentation {
  struct Letter {
    std::string name;
    unsigned rank = 0;
    std::vector<std::vector<int>> decomps;  // rank > 0
    int value0 = -1;                        // rank 0
  };

  std::vector<std::string> y1, y0;
  std::vector<std::vector<int>> product, act, meet1, meet0;
  std::vector<int> omega;    // -1 where undefined
  std::vector<char> accept;  // P as a membership vector over y0
  std::vector<Letter> letters;

  bool leq1(int a, int b) const { return meet1[a][b] == a; }
  bool leq0(int a, int b) const { return meet0[a][b] == a; }
  bool idempotent(int e) const { return product[e][e] == e; }
  int find1(const std::string& n) const;
  int find0(const std::string& n) const;
  const Letter* letter(const std::string& n) const;
  RankedAlphabet alphabet() const;
};

struct PresentationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Presentation presentation_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Presentation& p);

// Y1 = {ok, dead}, Y0 = {acc, rej}, P = {acc}; letters a2, a1 (ok), b2, b1
// (dead), c0 (acc) and b0 (rej).
Presentation avoid_presentation();
// The same tables over the transition-system alphabet: valuations without
// `bad` are ok, valuations with it are dead, up to rank max_rank.
Presentation avoid_ts_presentation(unsigned max_rank, const std::vector<std::string>& props = {"b"},
                                   const std::string& bad = "b");
// Chain 0 < 1 < ... < h on both sorts, product and act are min, omega is the
// identity and P = {z >= theta}. AVOID is the case h = 1, theta = 1.
Presentation threshold_presentation(unsigned h, unsigned theta);
// "Finitely many b on every branch": Y1 = {b < 1}, b absorbing, act ignores
// its first argument, omega(b) = rej.
Presentation cobuchi_presentation();

struct LawViolation {
  std::string law;
  std::string witness;
};

struct PresentationReport {
  std::vector<LawViolation> failures;
  bool ok() const { return failures.empty(); }
};

PresentationReport validate_presentation(const Presentation& p);

// Sort-1 or sort-0 word values; `none` stands for the empty prefix.
constexpr int none = -1;

int fold(const Presentation& p, const std::vector<int>& w);  // none on the empty word
int eval_word(const Presentation& p, const std::vector<int>& w, int t);
int eval_lasso(const Presentation& p, const std::vector<int>& u, const std::vector<int>& v);

// A represented element of rank n: for n > 0 a choice among deterministic
// tuples of Y1^n, for n = 0 a choice among Y0 values.
struct ElementRep {
  unsigned rank = 0;
  std::vector<std::vector<int>> tuples;
  std::vector<int> values0;

  static ElementRep one(int y) { return {1, {{y}}, {}}; }
  static ElementRep zero(int z) { return {0, {}, {z}}; }
  static ElementRep tuple(std::vector<int> t) {
    unsigned n = static_cast<unsigned>(t.size());
    return {n, {std::move(t)}, {}};
  }
  bool deterministic() const { return rank == 0 ? values0.size() == 1 : tuples.size() == 1; }
  auto operator<=>(const ElementRep&) const = default;
};

inline unsigned label_rank(const ElementRep& e) { return e.rank; }
std::string label_name(const ElementRep& e);
std::string rep_str(const Presentation& p, const ElementRep& e);

using YSys = SetSystem<ElementRep>;

ElementRep letter_rep(const Presentation& p, const std::string& name);
YSys y_relabel(const Presentation& p, const Sys& s);

// Only maximal choices: smaller ones are dominated by monotonicity.
ElementRep rep_maximal(const Presentation& p, const ElementRep& e);
bool rep_leq(const Presentation& p, const ElementRep& x, const ElementRep& y);
ElementRep rep_meet(const Presentation& p, const ElementRep& x, const ElementRep& y);
// Deterministic elements of rank n up to equivalence; rank 0 gives the Y0 values.
std::vector<ElementRep> det_elements(const Presentation& p, unsigned n);

struct BranchVerdict {
  bool accepted = true;
  std::string witness;  // a rejected branch: "finite ..." or "lasso ..."
};

// Every maximal branch of a closed graph with rank <= 1 deterministic labels
// evaluates into P. Starts are the initial vertices, plus the roots if asked.
BranchVerdict universal_branch_check(const Presentation& p, const YSys& g, bool roots = true);

// Choices made at (vertex, prefix value) positions; prefix value `none`
// stands for the empty prefix.
struct Strategy {
  std::vector<std::vector<int>> choice;  // [vertex][prefix + 1] -> tuple / value index, -1 if unreached
};

struct CompositionVerdict {
  bool accepted = false;
  Strategy strategy;  // valid when accepted
  std::string witness;
};

// Acceptance of a closed graph labelled by represented elements of any rank:
// vertices without yields are discarded, then Eve chooses a tuple at each
// position and every branch of the resulting graph must evaluate into P.
CompositionVerdict eval_closed_composition(const Presentation& p, const YSys& g, bool roots = true,
                                           std::size_t max_strategies = 1u << 20);

// The rank <= 1 graph of a strategy; used by the checker and by tests.
YSys strategy_graph(const Presentation& p, const YSys& g, const Strategy& s, bool roots = true);

// Context(m0..mk)[inner]: alternatives[i] lists the Y1 values offered in
// part i (several values form a sum); inner has rank k.
YSys context_graph(const std::vector<std::vector<int>>& alternatives, const YSys& inner);
YSys atomic_rep(const ElementRep& a);
YSys plant_graph(const YSys& g);

struct Extremal {
  std::vector<int> m;
  std::vector<LawViolation> failures;  // violated extremality conditions, empty on success
};

Extremal extremal_context(const Presentation& p, const std::vector<int>& t, const ElementRep& a);

struct DeltaOptions {
  int mutate_index = -1;  // replace delta_i by mutate_value (negative controls)
  int mutate_value = -1;
};

struct DeltaResult {
  YSys big_delta;  // the literal sum of the U_i
  std::vector<YSys> u;
  ElementRep delta;
  bool exact = true;  // delta_i matches U_i on every test context
  bool deterministic = false;
  bool accepts = false;       // f below eval(C[delta]), exact
  bool accepts_literal = false;  // f below eval(M[Delta]) with the literal Delta
  bool leq = false;           // rep_leq(delta, a)
  bool bounded_leq = false;   // every Context(t) accepting delta accepts a
  std::string witness;
  bool ok() const { return deterministic && accepts && accepts_literal && leq && bounded_leq; }
};

// m: extremal context for a; c: the original context (Context-shaped).
DeltaResult build_delta(const Presentation& p, const std::vector<int>& m, const ElementRep& a,
                        const std::vector<int>& c, DeltaOptions opt = {});

}  // namespace regtree
