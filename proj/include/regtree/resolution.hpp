#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "regtree/algebra.hpp"
#include "regtree/morphism.hpp"
#include "regtree/random.hpp"
#include "regtree/renaming.hpp"
#include "regtree/set_system.hpp"

namespace regtree {

// Vertices from which a system can be carved out: the greatest set in which
// every direction has a variable successor or a successor in the set.
std::vector<char> viable(const Sys& s);

// Enumerates the direct resolutions of s whose vertices are pairs (vertex of s,
// the last k vertices visited before it), one successor chosen per state and
// direction. The callback gets the resolution and its morphism into s, and
// returns false to stop. Returns false if stopped (by the callback or after
// max_count resolutions).
bool for_each_direct_resolution(const Sys& s, unsigned k,
                                const std::function<bool(const Sys&, const VertexMap&)>& cb,
                                std::size_t max_count = 100000);

struct ResolutionSet {
  std::vector<Sys> systems;  // one representative per unfold-equivalence class
  bool truncated = false;
};

ResolutionSet direct_resolutions(const Sys& s, unsigned k, std::size_t max_count = 100000);

// A random memory-k direct resolution with its morphism into s.
std::optional<std::pair<Sys, VertexMap>> sample_direct_resolution(Rng& rng, const Sys& s, unsigned k);

struct Yields {
  ResolutionSet init;
  ResolutionSet root;  // planted
};

Yields yields(const Sys& s, unsigned k, std::size_t max_count = 100000);

// Exact membership: t unfolds to a direct resolution of s.
bool in_init_yields(const Sys& t, const Sys& s);
// p = plant(t) with t an init-yield of uproot(s).
bool in_root_yields(const Sys& p, const Sys& s);

enum class Subsumption { Refuted, ConsistentUpToK };

struct SubsumptionVerdict {
  Subsumption result = Subsumption::ConsistentUpToK;
  Sys witness;       // a yield of the left side missing on the right
  std::string kind;  // "init" or "root"
  bool truncated = false;
  bool refuted() const { return result == Subsumption::Refuted; }
};

// Checks every memory-k yield of s for exact membership in the yields of s2.
SubsumptionVerdict yield_subsumed(const Sys& s, const Sys& s2, unsigned k, std::size_t max_count = 20000);

// Neither direction refuted at memory k.
bool bounded_yield_equal(const Sys& s, const Sys& s2, unsigned k, std::size_t max_count = 20000);

// (t, sigma) is a resolution of s: rename_sigma(t) has a morphism into s.
std::optional<VertexMap> resolution_witness(const Sys& t, const VarMap& sigma, const Sys& s);

// |sigma^-1(i)| <= bound for every i in [n].
bool is_small_map(const VarMap& sigma, unsigned n, std::size_t bound);

// ---- flatten-resolutions ----

struct FlattenWitness {
  VertexMap delta;                 // outer vertices of T -> outer vertices of N
  std::vector<VarMap> sigma;       // sigma_t: [rk T(t)] -> [rk N(delta t)]
  std::vector<VertexMap> gamma;    // gamma_t: rename_sigma_t(T(t)) -> N(delta t)
};

struct FrCheck {
  bool ok = false;
  std::string violation;
};

FrCheck check_flatten_resolution(const Nested& n, const Nested& t, const FlattenWitness& w);

// The morphism flatten(T) -> flatten(N), (t,v) -> (delta t, gamma_t v).
VertexMap flatten_resolution_to_direct(const Nested& n, const Nested& t, const FlattenWitness& w);

struct FromDirect {
  Nested t;
  FlattenWitness w;
  VertexMap phi;  // flatten(T) -> R, (t,r) -> r
};

// eta: R -> flatten(N) a morphism, R a system.
FromDirect direct_to_flatten_resolution(const Nested& n, const Sys& r, const VertexMap& eta);

// ---- smallification ----

struct Smallification {
  unsigned m2 = 0;
  VarMap tau;   // [m] -> [m2]
  VarMap tau2;  // [m2] -> [m], a section of tau
};

// c is a closed system with one hole vertex of rank m = t.rank; sigma: [m] -> [n].
Smallification context_smallification(const Sys& t, const Sys& c, const VarMap& sigma, const ReachAlgebra& alg,
                                      const LetterMap& letters);

struct SmallFlattenResolution {
  Nested t;
  FlattenWitness w;
  unsigned iterations = 0;
};

SmallFlattenResolution smallify_flatten_resolution(const Nested& n, const Nested& t, const FlattenWitness& w,
                                                   const ReachAlgebra& alg, const LetterMap& letters);

// ---- profiles ----

struct ProfileEntry {
  ReachValue value;
  VarMap sigma;
  auto operator<=>(const ProfileEntry&) const = default;
};

struct Profile {
  std::set<ProfileEntry> pairs;
  bool root = false;
  bool small = false;
  unsigned memory = 0;
  unsigned max_m = 0;
  bool truncated = false;
};

// Pairs (rho(T), sigma) over resolutions (T, sigma) with sigma: [m] -> [n],
// m <= max_m, T a memory-k direct resolution of dupname_sigma(S).
Profile profile(const Sys& s, const ReachAlgebra& alg, const LetterMap& letters, bool root, bool small, unsigned k,
                unsigned max_m, std::size_t max_count = 100000);

}  // namespace regtree
