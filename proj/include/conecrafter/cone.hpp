#pragma once

// Néron–Severi classes as alternating forms, their embedding into the
// symmetric endomorphisms, ample/nef membership and the G-invariant cone.

#include "conecrafter/endo.hpp"
#include "conecrafter/torus.hpp"
#include "conecrafter/wedderburn.hpp"

#include <string>
#include <vector>

namespace conecrafter {

/// A saturated sublattice of NS(X), given by integral alternating forms.
struct ClassSpace {
  PolarizedTorus torus;
  std::vector<IntegerMatrix> basis;
  CoordinateSystem coords;  // over flattened forms

  Index dim() const { return static_cast<Index>(basis.size()); }
  RationalMatrix form(const RationalVector& c) const;
  std::optional<RationalVector> coordinates(const RationalMatrix& form) const;
};

using NSLattice = ClassSpace;

struct InvariantNS : ClassSpace {
  RationalMatrix inclusion;  // column k = parent coordinates of basis[k]
};

/// Z-basis of { F : F^T = -F, J^T F J = F }.
NSLattice compute_ns(const PolarizedTorus& t);

/// Classes fixed by F -> A^T F A for every linear part A of G.
InvariantNS invariant_ns(const NSLattice& ns, const GroupAction& group);

/// f(F) = E^{-1} F.
RationalMatrix embed(const PolarizedTorus& t, const RationalMatrix& form);

bool is_ample_form(const PolarizedTorus& t, const RationalMatrix& form);
bool is_nef_form(const PolarizedTorus& t, const RationalMatrix& form);
bool is_ample(const ClassSpace& s, const RationalVector& c);
bool is_nef(const ClassSpace& s, const RationalVector& c);

/// A^T F A; translations act trivially on classes.
RationalMatrix pullback_form(const RationalMatrix& form, const IntegerMatrix& linear);
RationalVector pullback(const ClassSpace& s, const IntegerMatrix& linear, const RationalVector& c);
/// Matrix of the pullback in s-coordinates; s must be stable under it.
RationalMatrix pullback_matrix(const ClassSpace& s, const IntegerMatrix& linear);

/// Tr(f(x) f(y)').
Rational trace_dual_pairing(const ClassSpace& s, const RationalVector& x, const RationalVector& y);
RationalMatrix trace_gram(const ClassSpace& s);

/// f(F)' = f(F) for every basis form.
bool embedding_is_symmetric(const ClassSpace& s);
/// f(A^T F A) = A' f(F) A for every basis form.
bool equivariance_square_holds(const ClassSpace& s, const IntegerMatrix& linear);

struct ConeFactor {
  FactorKind kind;
  int places = 0;           // identical R-factors
  std::string cone;         // e.g. "P_2(C)"
  int dim = 0;              // dimension of the class component
  std::string type;         // "ray", "hyperbolic" or "hermitian"
  RationalMatrix span;      // columns: basis of the component, class coordinates
  RationalMatrix projection;  // class coordinates -> class coordinates
};

struct ConeStructure {
  std::vector<ConeFactor> factors;
};

/// Splits classes by the central idempotents: F -> E * (e f(F)).
ConeStructure cone_structure(const InvariantNS& ns, const InvariantSubalgebra& algebra,
                             const Decomposition& dec);

}  // namespace conecrafter
