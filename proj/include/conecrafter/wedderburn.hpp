#pragma once

// Decomposition of a semisimple algebra with positive involution into simple
// factors, each classified over R as Mat_l(R), Mat_m(C) or Mat_t(H) from the
// pair (real dimension, involution-fixed dimension).

#include "conecrafter/endo.hpp"
#include "conecrafter/polynomial.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace conecrafter {

enum class Family { Real, Complex, Quaternion };

struct FactorKind {
  Family family = Family::Real;
  int size = 0;

  /// Dimension of Mat_size(F) over R.
  int real_dimension() const;
  /// Dimension of its Hermitian part over R.
  int fixed_dimension() const;
  /// "RealMatrix(l)", "ComplexMatrix(m)" or "QuaternionMatrix(t)".
  std::string name() const;
  /// "P_l(R)", "P_m(C)" or "P_t(H)".
  std::string cone_name() const;

  friend bool operator==(const FactorKind&, const FactorKind&) = default;
};

/// The kind with the given (real dimension, fixed dimension), if any.
std::optional<FactorKind> classify_pair(int dimension, int fixed_dimension);

/// Same, but a pair with no matching row is an internal inconsistency.
FactorKind classify(int dimension, int fixed_dimension);

/// All (d, f) pairs with d <= max_dimension map to at most one kind.
bool classification_table_collision_free(int max_dimension);

struct SimpleFactor {
  RationalVector idempotent;  // central idempotent, algebra coordinates
  int dim_q = 0;              // dim over Q of e*A
  int fixed_dim = 0;          // dim over Q of { x in e*A : x' = x }
  int center_degree = 0;      // [Z(e*A) : Q]
  Polynomial center_min_poly;
  bool involution_trivial_on_center = false;
  int real_places = 0;        // number of identical R-factors e*A (x) R splits into
  FactorKind kind;            // type of each R-factor
};

struct Decomposition {
  std::vector<SimpleFactor> factors;
  int rank = 0;
  int fixed_dim = 0;
};

/// Z-basis (columns, algebra coordinates) of the center.
IntegerMatrix compute_center(const AlgebraWithInvolution& a);

/// Primitive central idempotents over Q, in a canonical order.
std::vector<RationalVector> central_idempotents(const AlgebraWithInvolution& a,
                                                const IntegerMatrix& center, std::uint64_t seed);

SimpleFactor classify_factor(const AlgebraWithInvolution& a, const IntegerMatrix& center,
                             const RationalVector& idempotent, std::uint64_t seed);

/// Center, idempotents and classification, with the orthogonality, centrality,
/// involution-stability and dimension bookkeeping checked exactly.
Decomposition decompose(const AlgebraWithInvolution& a, std::uint64_t seed = 42);

/// Dimension of the involution-fixed subspace.
int fixed_dimension(const AlgebraWithInvolution& a);

}  // namespace conecrafter
