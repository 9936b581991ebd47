#pragma once

// Rational polyhedral cones, constructive fundamental domains (rays, binary
// forms, rank-2 hyperbolic factors) and a sampled tiling verifier.

#include "conecrafter/cone.hpp"
#include "conecrafter/exact.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace conecrafter {

/// { x : equations . x = 0, facets . x >= 0 }, generated by rays.
struct PolyhedralCone {
  Index ambient_dim = 0;
  std::vector<IntegerVector> rays;
  std::vector<IntegerVector> facets;     // primitive, sorted
  std::vector<IntegerVector> equations;  // Z-basis of the rays' orthogonal complement

  /// Rays are made primitive and de-duplicated; facets are enumerated from
  /// (dim - 1)-subsets of rays.
  static PolyhedralCone from_rays(Index ambient_dim, const std::vector<RationalVector>& rays);
  /// Full-dimensional cone cut out by the given inequalities.
  static PolyhedralCone from_facets(Index ambient_dim, const std::vector<IntegerVector>& facets);

  Index dimension() const { return ambient_dim - static_cast<Index>(equations.size()); }
  bool contains(const RationalVector& x) const;
  /// Relative interior.
  bool interior_contains(const RationalVector& x) const;
  /// Empty when rays and facets are mutually consistent.
  std::string consistency_failure() const;
};

/// Letters are (generator index, +1 or -1), applied left to right.
struct GroupWord {
  std::vector<std::pair<int, int>> letters;
  RationalMatrix matrix;  // product of the letter actions, last letter leftmost

  std::size_t length() const { return letters.size(); }
  std::string to_string(const std::vector<std::string>& names) const;
};

/// Action matrix of a word given generator actions and their inverses.
RationalMatrix evaluate_word(const std::vector<std::pair<int, int>>& letters,
                             const std::vector<RationalMatrix>& generators,
                             const std::vector<RationalMatrix>& inverses, Index dim);

struct ReductionResult {
  RationalVector input;
  GroupWord word;
  RationalVector reduced;
  int steps = 0;
};

/// Congruence actions Q -> g^T Q g on binary forms (a, b, c) = a x^2 + b xy + c y^2
/// for S = [[0,-1],[1,0]], T = [[1,1],[0,1]], R = diag(1,-1).
std::vector<RationalMatrix> gauss_generators();
std::vector<std::string> gauss_generator_names();

/// Reduces a positive-definite integral form to 0 <= b <= a <= c.
ReductionResult gauss_reduce(const Integer& a, const Integer& b, const Integer& c);

/// { b >= 0, a - b >= 0, c - a >= 0 } in (a, b, c) coordinates.
PolyhedralCone minkowski_domain_p2();

struct PellSolution {
  Integer x;
  Integer y;
  int norm = 1;  // x^2 - D y^2
};

/// Smallest positive solution of x^2 - D y^2 = +-1 (continued fraction of sqrt D).
PellSolution pell_fundamental_unit(const Integer& d);
/// Smallest positive solution of x^2 - D y^2 = 1.
PellSolution pell_plus_one(const Integer& d);

/// Eigen-type of gamma on a 2-dim invariant subspace with basis `span`.
struct HyperbolicCheck {
  bool hyperbolic = false;
  Rational trace;
  Rational det;
  std::string reason;
};
HyperbolicCheck check_hyperbolic(const RationalMatrix& gamma, const RationalMatrix& span);

/// cone(D, gamma D). Requires D ample and gamma hyperbolic with irrational
/// eigenvalues on the component spanned by `span`.
PolyhedralCone hyperbolic_domain(const RationalMatrix& gamma, const RationalVector& d,
                                 const RationalMatrix& span,
                                 const std::function<bool(const RationalVector&)>& is_ample);

/// A word of length <= max_length with its action, one per distinct non-identity action.
std::vector<GroupWord> enumerate_words(const std::vector<RationalMatrix>& generators, Index dim,
                                       int max_length);

/// True when some word of length <= max_length with non-identity action fixes
/// the height functional eta (M^T eta = eta).
bool eta_has_stabilizer(const RationalVector& eta, const std::vector<GroupWord>& words);

/// eta = gram * y for an interior class y with trivial stabilizer among words of
/// length <= 4. Candidates: `preferred` first, then seeded small integer points.
/// Throws Error after 1000 candidates.
RationalVector find_eta(Index dim, const RationalMatrix& gram,
                        const std::function<bool(const RationalVector&)>& interior,
                        const std::vector<RationalMatrix>& generators, std::uint64_t seed,
                        const std::optional<RationalVector>& preferred = std::nullopt);

struct TilingOptions {
  std::size_t samples = 1000;
  std::uint64_t seed = 42;
  int max_steps = 200;
  int beam_width = 16;
  int overlap_word_length = 3;
  std::size_t overlap_samples = 64;
  std::int64_t sample_box = 40;
};

struct OverlapWitness {
  GroupWord word;
  RationalVector point;  // in the interior of the domain and of its translate
};

struct TilingReport {
  std::size_t samples = 0;
  std::size_t successes = 0;
  int max_steps_used = 0;
  std::vector<std::size_t> failed_samples;  // sample indices
  std::optional<OverlapWitness> overlap;
  std::vector<ReductionResult> reductions;  // successes, by sample index

  bool complete() const { return successes == samples && !overlap; }
};

/// Reduces one class into pi by greedy descent on <eta, x>, with a beam search
/// when no single generator lowers the height. Returns nullopt on failure.
std::optional<ReductionResult> reduce_into(const PolyhedralCone& pi,
                                           const std::vector<RationalMatrix>& generators,
                                           const RationalVector& eta, const RationalVector& x,
                                           int max_steps, int beam_width);

/// Searches for w != identity-action and p with p in int(pi) and w p in int(pi).
std::optional<OverlapWitness> find_overlap(const PolyhedralCone& pi,
                                           const std::vector<RationalMatrix>& generators,
                                           const TilingOptions& options);

/// Samples integer points of the cone interior (via `interior`), reduces each,
/// re-checks every success, and looks for interior overlaps.
TilingReport verify_tiling(const PolyhedralCone& pi, const std::vector<RationalMatrix>& generators,
                           const std::function<bool(const RationalVector&)>& interior,
                           const RationalVector& eta, const TilingOptions& options);

struct PushdownReport {
  RationalMatrix pullback;        // pi^*: invariant coords -> parent coords
  RationalMatrix pushforward;     // pi_*: parent coords -> invariant coords
  RationalMatrix pullback_sum;    // sum over G of g^*
  bool pullpush_ok = false;       // pi^* pi_* = sum g^*
  bool pushpull_ok = false;       // pi_* pi^* = |G| id
  PolyhedralCone domain;          // pi_*(Pi) rescaled by 1/|G|
};

/// The maps and identities alone; `domain` is left empty.
PushdownReport pushdown_maps(const NSLattice& ns, const InvariantNS& inv, const GroupAction& group);

PushdownReport pushdown_domain(const PolyhedralCone& pi, const NSLattice& ns, const InvariantNS& inv,
                               const GroupAction& group);

struct DerivedUnit {
  IntegerMatrix linear;
  Integer discriminant;  // D with u = x + y sqrt(D)
  PellSolution pell;
};

/// A unit x + y s of the symmetric center, s^2 = D, when that center is a
/// real quadratic field; nullopt otherwise.
std::optional<DerivedUnit> derive_real_quadratic_unit(const InvariantSubalgebra& a);

}  // namespace conecrafter
