#pragma once

// Endomorphism rings in the rational representation, the Rosati involution
// and G-invariant subalgebras.

#include "conecrafter/exact.hpp"
#include "conecrafter/linalg.hpp"
#include "conecrafter/torus.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace conecrafter {

/// A finite-dimensional Q-algebra with involution, described entirely in
/// coordinates of a fixed Z-basis. `left_mult[i]` is the matrix of y -> b_i y,
/// so x*y = sum_i x_i left_mult[i] y.
struct AlgebraWithInvolution {
  std::vector<RationalMatrix> left_mult;
  RationalMatrix involution;  // column i = coordinates of b_i'
  RationalMatrix trace_form;  // Tr(b_i b_j')
  RationalVector unit;

  Index rank() const { return involution.rows(); }
  RationalVector multiply(const RationalVector& x, const RationalVector& y) const;
  RationalMatrix left_multiplication(const RationalVector& x) const;
  RationalVector involute(const RationalVector& x) const { return involution * x; }
  Rational trace_pairing(const RationalVector& x, const RationalVector& y) const {
    return (x.transpose() * trace_form * y)(0, 0);
  }
};

struct EndoAlgebra {
  PolarizedTorus torus;
  std::vector<IntegerMatrix> basis;  // Z-basis of End(X) inside Mat_{2n}(Z)
  AlgebraWithInvolution algebra;
  CoordinateSystem coords;           // over flattened 2n x 2n matrices

  Index rank() const { return static_cast<Index>(basis.size()); }
  RationalMatrix to_matrix(const RationalVector& x) const;
  RationalVector coordinates(const RationalMatrix& m) const;
};

struct InvariantSubalgebra {
  std::vector<IntegerMatrix> basis;  // Z-basis of End(X)^G
  RationalMatrix embedding;          // column k = parent coordinates of basis[k]
  AlgebraWithInvolution algebra;
  CoordinateSystem coords;

  Index rank() const { return static_cast<Index>(basis.size()); }
  RationalMatrix to_matrix(const RationalVector& x) const;
  RationalVector coordinates(const RationalMatrix& m) const;
};

/// phi' = E^{-1} phi^T E, the E-adjoint: phi'^T E = E phi.
RationalMatrix rosati(const PolarizedTorus& t, const RationalMatrix& phi);

/// Integer commutant of J with exact structure data.
EndoAlgebra compute_end(const PolarizedTorus& t);

/// Centralizer of the linear parts of G. Requires a G-invariant polarization.
InvariantSubalgebra invariant_subalgebra(const EndoAlgebra& e, const GroupAction& group);

/// Builds structure data for a family of integer matrices closed under
/// product (verified) using the given polarization for the involution.
AlgebraWithInvolution algebra_data(const PolarizedTorus& t, const std::vector<IntegerMatrix>& basis,
                                   const CoordinateSystem& coords);

struct PositivityReport {
  std::size_t samples = 0;
  std::size_t failures = 0;
  bool gram_positive_definite = false;
  Rational min_trace;  // smallest Tr(phi phi') seen among samples

  bool ok() const { return failures == 0 && gram_positive_definite; }
};

/// Tr(phi phi') > 0 on seeded random nonzero integer combinations, plus all
/// leading principal minors of the trace form positive.
PositivityReport trace_positivity_check(const AlgebraWithInvolution& a, std::size_t samples,
                                        std::uint64_t seed);

/// Exact checks of the involution axioms on basis pairs: anti-multiplicativity,
/// involutivity, unit fixed. Returns the name of the first failing property.
std::string involution_failure(const AlgebraWithInvolution& a);

}  // namespace conecrafter
