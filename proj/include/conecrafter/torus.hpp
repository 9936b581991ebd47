#pragma once

// Polarized complex tori X = C^n / Lambda in the lattice basis, and finite
// groups of affine automorphisms acting on them.

#include "conecrafter/exact.hpp"

#include <span>
#include <string>
#include <vector>

namespace conecrafter {

struct PolarizedTorus {
  RationalMatrix complex_structure;  // J on Lambda (x) Q, J^2 = -I
  IntegerMatrix polarization;        // alternating form E of the ample line bundle

  Index rank() const { return complex_structure.rows(); }  // 2n
  Index dimension() const { return rank() / 2; }           // n
};

/// x -> linear * x + translation on R^{2n} / Z^{2n}.
struct AffineAuto {
  IntegerMatrix linear;
  RationalVector translation;  // entries in [0, 1)

  static AffineAuto make(IntegerMatrix linear, RationalVector translation);
  static AffineAuto identity(Index rank);

  bool is_identity() const;
  bool is_translation() const;
  friend bool operator==(const AffineAuto& a, const AffineAuto& b) {
    return a.linear == b.linear && a.translation == b.translation;
  }
};

/// (A, t) o (B, s) = (AB, As + t mod 1).
AffineAuto compose(const AffineAuto& a, const AffineAuto& b);

class GroupAction {
 public:
  GroupAction() = default;
  GroupAction(std::vector<AffineAuto> elements, std::vector<std::vector<std::size_t>> table);

  std::size_t order() const { return elements_.size(); }
  const std::vector<AffineAuto>& elements() const { return elements_; }
  const AffineAuto& operator[](std::size_t i) const { return elements_[i]; }
  /// Index of a * b in elements().
  std::size_t product(std::size_t a, std::size_t b) const { return table_[a][b]; }
  std::size_t inverse(std::size_t a) const;
  bool is_trivial() const { return elements_.size() <= 1; }

 private:
  std::vector<AffineAuto> elements_;  // elements_[0] is the identity
  std::vector<std::vector<std::size_t>> table_;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct TorusValidation {
  std::vector<CheckResult> checks;
  /// +1: x^T E J x positive definite as given; -1: negative definite (E was
  /// negated in `normalized`); 0: indefinite or degenerate.
  int polarization_sign = 0;
  PolarizedTorus normalized;

  bool ok() const;
  const CheckResult* failure() const;
};

/// Checks J^2 = -I, E^T = -E, J^T E J = E and definiteness of E J.
TorusValidation validate_torus(const PolarizedTorus& t);

/// Unimodular linear part commuting with J, translation in [0,1)^{2n}.
std::vector<CheckResult> validate_automorphism(const PolarizedTorus& t, const AffineAuto& g);

/// Closure of the generators under composition; throws BoundError when the
/// closure exceeds max_order.
GroupAction close_group(std::span<const AffineAuto> generators, Index rank, std::size_t max_order);

/// True iff g has no fixed point on R^{2n}/Z^{2n}. Rejects the identity.
bool is_free(const PolarizedTorus& t, const AffineAuto& g);

/// True iff some non-identity element has identity linear part.
bool has_translations(const GroupAction& group);

/// Sum over the group of Lin(g)^T E Lin(g).
IntegerMatrix invariant_polarization(const PolarizedTorus& t, const GroupAction& group);

bool preserves_polarization(const IntegerMatrix& polarization, const IntegerMatrix& linear);

}  // namespace conecrafter
