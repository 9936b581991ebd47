#pragma once

// Integer lattice normal forms and integral kernels.

#include "conecrafter/exact.hpp"

#include <optional>
#include <span>
#include <vector>

namespace conecrafter {

struct HermiteForm {
  IntegerMatrix h;  // row-style HNF of the input
  IntegerMatrix u;  // unimodular, h = u * m
  Index rank = 0;
};

/// Row-style Hermite normal form: echelon shape, positive pivots, entries
/// above each pivot reduced into [0, pivot). Zero rows come last.
HermiteForm hermite_normal_form(const IntegerMatrix& m);

struct SmithForm {
  IntegerMatrix d;  // diagonal, d_1 | d_2 | ..., nonnegative
  IntegerMatrix u;  // unimodular
  IntegerMatrix v;  // unimodular, d = u * m * v
};

SmithForm smith_normal_form(const IntegerMatrix& m);

/// Z-basis (columns, in Hermite-canonical order) of { x in Z^k : a x = 0 }.
IntegerMatrix integer_kernel(const IntegerMatrix& a);

/// Z-basis of all integer rows x rows matrices M with c * flatten(M) = 0 for
/// every condition c. Conditions act on the row-major flattening of M.
std::vector<IntegerMatrix> integer_kernel(std::span<const IntegerMatrix> conditions, Index rows,
                                          Index cols);

/// Condition matrix of M -> left * M * right over row-major flattenings.
RationalMatrix sandwich_operator(const RationalMatrix& left, const RationalMatrix& right);

/// Clears denominators row by row.
IntegerMatrix integral_rows(const RationalMatrix& m);

/// Canonical basis (Hermite rows, as columns) of the lattice spanned by the
/// columns of m.
IntegerMatrix lattice_basis(const IntegerMatrix& generators);

/// Integer coefficients expressing v in the lattice spanned by the columns of
/// basis (independent columns), or nullopt when v is not in that lattice.
std::optional<IntegerVector> lattice_coordinates(const IntegerMatrix& basis,
                                                 const RationalVector& v);

/// |det| == 1 for a square integer matrix.
bool is_unimodular(const IntegerMatrix& m);

}  // namespace conecrafter
