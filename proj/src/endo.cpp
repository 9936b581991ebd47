#include "conecrafter/endo.hpp"

#include "conecrafter/lattice.hpp"

namespace conecrafter {

RationalVector AlgebraWithInvolution::multiply(const RationalVector& x, const RationalVector& y) const {
  return left_multiplication(x) * y;
}

RationalMatrix AlgebraWithInvolution::left_multiplication(const RationalVector& x) const {
  RationalMatrix out = RationalMatrix::Zero(rank(), rank());
  for (Index i = 0; i < rank(); ++i)
    if (x(i) != 0) out += x(i) * left_mult[static_cast<std::size_t>(i)];
  return out;
}

namespace {

RationalMatrix combine(const std::vector<IntegerMatrix>& basis, const RationalVector& x, Index size) {
  RationalMatrix m = RationalMatrix::Zero(size, size);
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (x(static_cast<Index>(i)) != 0) m += x(static_cast<Index>(i)) * to_rational(basis[i]);
  return m;
}

CoordinateSystem flattened_coords(const std::vector<IntegerMatrix>& basis, Index size) {
  RationalMatrix cols(size * size, static_cast<Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i)
    cols.col(static_cast<Index>(i)) = flatten(to_rational(basis[i]));
  return CoordinateSystem(std::move(cols));
}

}  // namespace

RationalMatrix EndoAlgebra::to_matrix(const RationalVector& x) const {
  return combine(basis, x, torus.rank());
}

RationalVector EndoAlgebra::coordinates(const RationalMatrix& m) const {
  return coords.require(flatten(m), "EndoAlgebra::coordinates");
}

RationalMatrix InvariantSubalgebra::to_matrix(const RationalVector& x) const {
  return combine(basis, x, basis.empty() ? 0 : basis.front().rows());
}

RationalVector InvariantSubalgebra::coordinates(const RationalMatrix& m) const {
  return coords.require(flatten(m), "InvariantSubalgebra::coordinates");
}

RationalMatrix rosati(const PolarizedTorus& t, const RationalMatrix& phi) {
  const RationalMatrix e = to_rational(t.polarization);
  RationalMatrix e_inv;
  try {
    e_inv = inverse(e);
  } catch (const PreconditionError&) {
    throw Error("rosati: polarization is singular (internal error)");
  }
  return e_inv * phi.transpose() * e;
}

AlgebraWithInvolution algebra_data(const PolarizedTorus& t, const std::vector<IntegerMatrix>& basis,
                                   const CoordinateSystem& coords) {
  const Index r = static_cast<Index>(basis.size());
  const Index size = t.rank();
  AlgebraWithInvolution a;
  std::vector<RationalMatrix> mats;
  std::vector<RationalMatrix> adjoints;
  for (const auto& b : basis) {
    mats.push_back(to_rational(b));
    adjoints.push_back(rosati(t, mats.back()));
  }
  a.left_mult.assign(static_cast<std::size_t>(r), RationalMatrix::Zero(r, r));
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < r; ++j)
      a.left_mult[static_cast<std::size_t>(i)].col(j) =
          coords.require(flatten(RationalMatrix(mats[static_cast<std::size_t>(i)] * mats[static_cast<std::size_t>(j)])),
                         "algebra_data: basis is not closed under products");
  a.involution.resize(r, r);
  a.trace_form.resize(r, r);
  for (Index i = 0; i < r; ++i) {
    a.involution.col(i) = coords.require(flatten(adjoints[static_cast<std::size_t>(i)]),
                                         "algebra_data: basis is not closed under the involution");
    for (Index j = 0; j < r; ++j)
      a.trace_form(i, j) = RationalMatrix(mats[static_cast<std::size_t>(i)] * adjoints[static_cast<std::size_t>(j)]).trace();
  }
  a.unit = coords.require(flatten(RationalMatrix(RationalMatrix::Identity(size, size))),
                          "algebra_data: identity is not in the algebra");
  return a;
}

EndoAlgebra compute_end(const PolarizedTorus& t) {
  const Index size = t.rank();
  const RationalMatrix id = RationalMatrix::Identity(size, size);
  const RationalMatrix& j = t.complex_structure;
  // M J - J M = 0
  const IntegerMatrix condition = integral_rows(sandwich_operator(id, j) - sandwich_operator(j, id));
  const std::vector<IntegerMatrix> conditions{condition};
  EndoAlgebra e;
  e.torus = t;
  e.basis = integer_kernel(conditions, size, size);
  e.coords = flattened_coords(e.basis, size);
  e.algebra = algebra_data(t, e.basis, e.coords);
  return e;
}

InvariantSubalgebra invariant_subalgebra(const EndoAlgebra& e, const GroupAction& group) {
  const Index size = e.torus.rank();
  const Index r = e.rank();
  std::vector<IntegerMatrix> blocks;
  for (const auto& g : group.elements()) {
    if (!preserves_polarization(e.torus.polarization, g.linear))
      throw PreconditionError(
          "invariant_subalgebra: polarization is not G-invariant; average it over G first");
    IntegerMatrix block(size * size, r);
    for (Index i = 0; i < r; ++i) {
      const IntegerMatrix& b = e.basis[static_cast<std::size_t>(i)];
      block.col(i) = flatten(IntegerMatrix(b * g.linear - g.linear * b));
    }
    blocks.push_back(std::move(block));
  }
  Index total = 0;
  for (const auto& b : blocks) total += b.rows();
  IntegerMatrix stacked(total, r);
  Index at = 0;
  for (const auto& b : blocks) {
    stacked.middleRows(at, b.rows()) = b;
    at += b.rows();
  }
  const IntegerMatrix kernel = integer_kernel(stacked);

  InvariantSubalgebra sub;
  sub.embedding = to_rational(kernel);
  for (Index k = 0; k < kernel.cols(); ++k) {
    IntegerMatrix m = IntegerMatrix::Zero(size, size);
    for (Index i = 0; i < r; ++i)
      if (kernel(i, k) != 0) m += kernel(i, k) * e.basis[static_cast<std::size_t>(i)];
    sub.basis.push_back(std::move(m));
  }
  sub.coords = flattened_coords(sub.basis, size);
  sub.algebra = algebra_data(e.torus, sub.basis, sub.coords);
  return sub;
}

PositivityReport trace_positivity_check(const AlgebraWithInvolution& a, std::size_t samples,
                                        std::uint64_t seed) {
  PositivityReport report;
  Rng rng(seed);
  bool have_min = false;
  while (report.samples < samples) {
    RationalVector x(a.rank());
    bool nonzero = false;
    for (Index i = 0; i < a.rank(); ++i) {
      x(i) = Rational(rng.uniform(-5, 5));
      if (x(i) != 0) nonzero = true;
    }
    if (!nonzero) continue;
    ++report.samples;
    const Rational tr = a.trace_pairing(x, x);
    if (tr <= 0) ++report.failures;
    if (!have_min || tr < report.min_trace) {
      report.min_trace = tr;
      have_min = true;
    }
  }
  report.gram_positive_definite = true;
  for (const auto& m : leading_minors(a.trace_form))
    if (m <= 0) report.gram_positive_definite = false;
  return report;
}

std::string involution_failure(const AlgebraWithInvolution& a) {
  const Index r = a.rank();
  const RationalMatrix id = RationalMatrix::Identity(r, r);
  if (RationalMatrix(a.involution * a.involution) != id) return "involutive";
  if (a.involute(a.unit) != a.unit) return "unit_fixed";
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < r; ++j) {
      const RationalVector lhs = a.involute(a.multiply(id.col(i), id.col(j)));
      const RationalVector rhs = a.multiply(a.involute(id.col(j)), a.involute(id.col(i)));
      if (lhs != rhs) return "anti_multiplicative";
    }
  return {};
}

}  // namespace conecrafter
