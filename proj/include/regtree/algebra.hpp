#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "regtree/monad.hpp"
#include "regtree/set_system.hpp"

namespace regtree {

// Element of rank n of the reachability algebra: bottom, or a subset of [n].
struct ReachValue {
  unsigned rank = 0;
  bool bottom = false;
  std::vector<unsigned> vars;  // sorted, 1-based

  auto operator<=>(const ReachValue&) const = default;

  static ReachValue bot(unsigned n) { return {n, true, {}}; }
  static ReachValue of(unsigned n, std::vector<unsigned> xs);
  static ReachValue full(unsigned n);
  std::string str() const;
};

inline unsigned label_rank(const ReachValue& v) { return v.rank; }
inline std::string label_name(const ReachValue& v) { return v.str(); }

using ASys = SetSystem<ReachValue>;
using ANested = SetSystem<ASys>;
using LetterMap = std::function<ReachValue(const Symbol&)>;

// The reachability algebra. eval follows, at a vertex labelled X, the
// directions in X; it returns bottom if a bottom label is reached, else the
// set of reached variables. Subclasses may override eval (law-check controls).
class ReachAlgebra {
 public:
  virtual ~ReachAlgebra() = default;
  virtual ReachValue eval(const ASys& s) const;

  std::vector<ReachValue> carrier(unsigned n) const;
  std::size_t carrier_size(unsigned n) const { return (std::size_t{1} << n) + 1; }
  unsigned max_rank = 6;
};

// rho(a) = bottom for a in R, {1..k} otherwise.
LetterMap reach_letters(const std::set<std::string>& r);

// rho(S) for a Sigma-system S.
ReachValue rho(const ReachAlgebra& alg, const LetterMap& letters, const Sys& s);

// rho(S) in P for a closed system.
bool recognises(const ReachAlgebra& alg, const LetterMap& letters, const std::vector<ReachValue>& p, const Sys& s);

struct LawFailure {
  std::string law;
  std::string detail;
};

struct LawReport {
  std::size_t checked = 0;
  std::vector<LawFailure> failures;
  bool ok() const { return failures.empty(); }
};

// Checks eval(atomic(a)) = a on the carriers up to max_rank, and
// eval(lift(eval)(S)) = eval(flatten(S)) plus the context form on each sample.
LawReport check_algebra_laws(const ReachAlgebra& alg, const std::vector<ANested>& sample);

}  // namespace regtree
