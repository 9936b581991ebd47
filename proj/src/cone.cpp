#include "conecrafter/cone.hpp"

#include "conecrafter/lattice.hpp"
#include "conecrafter/linalg.hpp"
#include "conecrafter/polynomial.hpp"

namespace conecrafter {

namespace {

CoordinateSystem form_coords(const std::vector<IntegerMatrix>& basis, Index size) {
  RationalMatrix cols(size * size, static_cast<Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i)
    cols.col(static_cast<Index>(i)) = flatten(to_rational(basis[i]));
  return CoordinateSystem(std::move(cols));
}

}  // namespace

RationalMatrix ClassSpace::form(const RationalVector& c) const {
  RationalMatrix f = RationalMatrix::Zero(torus.rank(), torus.rank());
  for (Index i = 0; i < dim(); ++i)
    if (c(i) != 0) f += c(i) * to_rational(basis[static_cast<std::size_t>(i)]);
  return f;
}

std::optional<RationalVector> ClassSpace::coordinates(const RationalMatrix& form) const {
  return coords.coordinates(flatten(form));
}

NSLattice compute_ns(const PolarizedTorus& t) {
  const Index size = t.rank();
  const RationalMatrix id = RationalMatrix::Identity(size, size);
  const RationalMatrix& j = t.complex_structure;
  // F + F^T = 0 as a condition on flatten(F): transpose is a permutation.
  RationalMatrix transpose_op = RationalMatrix::Zero(size * size, size * size);
  for (Index r = 0; r < size; ++r)
    for (Index c = 0; c < size; ++c) transpose_op(r * size + c, c * size + r) = 1;
  const RationalMatrix alternating = RationalMatrix::Identity(size * size, size * size) + transpose_op;
  const RationalMatrix compatible = sandwich_operator(RationalMatrix(j.transpose()), j) -
                                    RationalMatrix::Identity(size * size, size * size);
  const std::vector<IntegerMatrix> conditions{integral_rows(alternating), integral_rows(compatible)};
  NSLattice ns;
  ns.torus = t;
  ns.basis = integer_kernel(conditions, size, size);
  ns.coords = form_coords(ns.basis, size);
  return ns;
}

InvariantNS invariant_ns(const NSLattice& ns, const GroupAction& group) {
  const Index size = ns.torus.rank();
  const Index r = ns.dim();
  std::vector<RationalMatrix> blocks;
  for (const auto& g : group.elements()) {
    if (g.linear == IntegerMatrix::Identity(size, size)) continue;
    RationalMatrix block(size * size, r);
    for (Index k = 0; k < r; ++k) {
      const IntegerMatrix& f = ns.basis[static_cast<std::size_t>(k)];
      block.col(k) = to_rational(flatten(IntegerMatrix(g.linear.transpose() * f * g.linear - f)));
    }
    blocks.push_back(std::move(block));
  }
  IntegerMatrix kernel;
  if (blocks.empty()) {
    kernel = IntegerMatrix::Identity(r, r);
  } else {
    RationalMatrix stacked(static_cast<Index>(blocks.size()) * size * size, r);
    for (std::size_t b = 0; b < blocks.size(); ++b)
      stacked.middleRows(static_cast<Index>(b) * size * size, size * size) = blocks[b];
    kernel = integer_kernel(integral_rows(stacked));
  }
  InvariantNS inv;
  inv.torus = ns.torus;
  inv.inclusion = to_rational(kernel);
  for (Index k = 0; k < kernel.cols(); ++k) {
    IntegerMatrix f = IntegerMatrix::Zero(size, size);
    for (Index i = 0; i < r; ++i)
      if (kernel(i, k) != 0) f += kernel(i, k) * ns.basis[static_cast<std::size_t>(i)];
    inv.basis.push_back(std::move(f));
  }
  inv.coords = form_coords(inv.basis, size);
  return inv;
}

RationalMatrix embed(const PolarizedTorus& t, const RationalMatrix& form) {
  return inverse(to_rational(t.polarization)) * form;
}

bool is_ample_form(const PolarizedTorus& t, const RationalMatrix& form) {
  return all_roots_positive(char_poly(embed(t, form)));
}

bool is_nef_form(const PolarizedTorus& t, const RationalMatrix& form) {
  return all_roots_nonnegative(char_poly(embed(t, form)));
}

bool is_ample(const ClassSpace& s, const RationalVector& c) { return is_ample_form(s.torus, s.form(c)); }
bool is_nef(const ClassSpace& s, const RationalVector& c) { return is_nef_form(s.torus, s.form(c)); }

RationalMatrix pullback_form(const RationalMatrix& form, const IntegerMatrix& linear) {
  const RationalMatrix a = to_rational(linear);
  return a.transpose() * form * a;
}

RationalVector pullback(const ClassSpace& s, const IntegerMatrix& linear, const RationalVector& c) {
  auto x = s.coordinates(pullback_form(s.form(c), linear));
  if (!x) throw PreconditionError("pullback: class space is not stable under this automorphism");
  return *x;
}

RationalMatrix pullback_matrix(const ClassSpace& s, const IntegerMatrix& linear) {
  const Index r = s.dim();
  RationalMatrix m(r, r);
  const RationalMatrix id = RationalMatrix::Identity(r, r);
  for (Index k = 0; k < r; ++k) m.col(k) = pullback(s, linear, id.col(k));
  return m;
}

Rational trace_dual_pairing(const ClassSpace& s, const RationalVector& x, const RationalVector& y) {
  const RationalMatrix fx = embed(s.torus, s.form(x));
  const RationalMatrix fy = embed(s.torus, s.form(y));
  return RationalMatrix(fx * rosati(s.torus, fy)).trace();
}

RationalMatrix trace_gram(const ClassSpace& s) {
  const Index r = s.dim();
  std::vector<RationalMatrix> f;
  for (Index k = 0; k < r; ++k)
    f.push_back(embed(s.torus, to_rational(s.basis[static_cast<std::size_t>(k)])));
  RationalMatrix g(r, r);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < r; ++j)
      g(i, j) = RationalMatrix(f[static_cast<std::size_t>(i)] * rosati(s.torus, f[static_cast<std::size_t>(j)])).trace();
  return g;
}

bool embedding_is_symmetric(const ClassSpace& s) {
  for (const auto& b : s.basis) {
    const RationalMatrix f = embed(s.torus, to_rational(b));
    if (rosati(s.torus, f) != f) return false;
  }
  return true;
}

bool equivariance_square_holds(const ClassSpace& s, const IntegerMatrix& linear) {
  const RationalMatrix a = to_rational(linear);
  for (const auto& b : s.basis) {
    const RationalMatrix lhs = embed(s.torus, pullback_form(to_rational(b), linear));
    const RationalMatrix rhs = rosati(s.torus, a) * embed(s.torus, to_rational(b)) * a;
    if (lhs != rhs) return false;
  }
  return true;
}

ConeStructure cone_structure(const InvariantNS& ns, const InvariantSubalgebra& algebra,
                             const Decomposition& dec) {
  const Index r = ns.dim();
  const RationalMatrix e_form = to_rational(ns.torus.polarization);
  const RationalMatrix id = RationalMatrix::Identity(r, r);
  ConeStructure out;
  Index total = 0;
  for (const auto& factor : dec.factors) {
    const RationalMatrix le = algebra.algebra.left_multiplication(factor.idempotent);
    ConeFactor cf;
    cf.kind = factor.kind;
    cf.places = factor.real_places;
    cf.cone = factor.kind.cone_name();
    cf.projection.resize(r, r);
    for (Index k = 0; k < r; ++k) {
      const RationalVector x = algebra.coordinates(embed(ns.torus, ns.form(id.col(k))));
      const RationalMatrix component = e_form * algebra.to_matrix(RationalVector(le * x));
      auto c = ns.coordinates(component);
      if (!c) throw Error("cone_structure: factor component of a class is not an invariant class");
      cf.projection.col(k) = *c;
    }
    cf.span = column_space(cf.projection);
    cf.dim = static_cast<int>(cf.span.cols());
    if (cf.dim != factor.fixed_dim)
      throw Error("cone_structure: class component of " + factor.kind.name() + " has dimension " +
                  std::to_string(cf.dim) + ", expected " + std::to_string(factor.fixed_dim));
    cf.type = cf.dim == 1 ? "ray" : cf.dim == 2 ? "hyperbolic" : "hermitian";
    total += cf.dim;
    out.factors.push_back(std::move(cf));
  }
  if (total != r)
    throw Error("cone_structure: factor components have total dimension " + std::to_string(total) +
                ", invariant classes have " + std::to_string(r));
  return out;
}

}  // namespace conecrafter
