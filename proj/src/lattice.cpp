#include "conecrafter/lattice.hpp"

#include "conecrafter/linalg.hpp"

#include <algorithm>

namespace conecrafter {

namespace {

void swap_rows(IntegerMatrix& m, Index a, Index b) {
  if (a != b) m.row(a).swap(m.row(b));
}

void swap_cols(IntegerMatrix& m, Index a, Index b) {
  if (a != b) m.col(a).swap(m.col(b));
}

}  // namespace

HermiteForm hermite_normal_form(const IntegerMatrix& m) {
  IntegerMatrix h = m;
  IntegerMatrix u = IntegerMatrix::Identity(m.rows(), m.rows());
  Index pivot = 0;
  for (Index col = 0; col < h.cols() && pivot < h.rows(); ++col) {
    // Euclid down the column until one nonzero entry remains at the pivot row.
    while (true) {
      Index best = -1;
      for (Index r = pivot; r < h.rows(); ++r) {
        if (h(r, col) == 0) continue;
        if (best < 0 || abs(h(r, col)) < abs(h(best, col))) best = r;
      }
      if (best < 0) break;
      swap_rows(h, pivot, best);
      swap_rows(u, pivot, best);
      bool cleared = true;
      for (Index r = pivot + 1; r < h.rows(); ++r) {
        if (h(r, col) == 0) continue;
        const Integer q = floor_div(h(r, col), h(pivot, col));
        h.row(r) -= q * h.row(pivot);
        u.row(r) -= q * u.row(pivot);
        if (h(r, col) != 0) cleared = false;
      }
      if (cleared) break;
    }
    if (h(pivot, col) == 0) continue;
    if (h(pivot, col) < 0) {
      h.row(pivot) *= Integer(-1);
      u.row(pivot) *= Integer(-1);
    }
    for (Index r = 0; r < pivot; ++r) {
      const Integer q = floor_div(h(r, col), h(pivot, col));
      if (q == 0) continue;
      h.row(r) -= q * h.row(pivot);
      u.row(r) -= q * u.row(pivot);
    }
    ++pivot;
  }
  return {std::move(h), std::move(u), pivot};
}

SmithForm smith_normal_form(const IntegerMatrix& m) {
  IntegerMatrix d = m;
  IntegerMatrix u = IntegerMatrix::Identity(m.rows(), m.rows());
  IntegerMatrix v = IntegerMatrix::Identity(m.cols(), m.cols());
  const Index limit = std::min(d.rows(), d.cols());
  for (Index t = 0; t < limit; ++t) {
    while (true) {
      Index br = -1, bc = -1;
      for (Index i = t; i < d.rows(); ++i)
        for (Index j = t; j < d.cols(); ++j)
          if (d(i, j) != 0 && (br < 0 || abs(d(i, j)) < abs(d(br, bc)))) {
            br = i;
            bc = j;
          }
      if (br < 0) break;
      swap_rows(d, t, br);
      swap_rows(u, t, br);
      swap_cols(d, t, bc);
      swap_cols(v, t, bc);
      bool clean = true;
      for (Index i = t + 1; i < d.rows(); ++i) {
        if (d(i, t) == 0) continue;
        const Integer q = floor_div(d(i, t), d(t, t));
        d.row(i) -= q * d.row(t);
        u.row(i) -= q * u.row(t);
        if (d(i, t) != 0) clean = false;
      }
      for (Index j = t + 1; j < d.cols(); ++j) {
        if (d(t, j) == 0) continue;
        const Integer q = floor_div(d(t, j), d(t, t));
        d.col(j) -= q * d.col(t);
        v.col(j) -= q * v.col(t);
        if (d(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      // Divisibility: fold an offending row into the pivot row and retry.
      Index offender = -1;
      for (Index i = t + 1; i < d.rows() && offender < 0; ++i)
        for (Index j = t + 1; j < d.cols(); ++j)
          if (d(i, j) % d(t, t) != 0) {
            offender = i;
            break;
          }
      if (offender < 0) break;
      d.row(t) += d.row(offender);
      u.row(t) += u.row(offender);
    }
    if (d(t, t) < 0) {
      d.row(t) *= Integer(-1);
      u.row(t) *= Integer(-1);
    }
  }
  return {std::move(d), std::move(u), std::move(v)};
}

IntegerMatrix integer_kernel(const IntegerMatrix& a) {
  const Index unknowns = a.cols();
  const HermiteForm form = hermite_normal_form(IntegerMatrix(a.transpose()));
  const Index nullity = unknowns - form.rank;
  if (nullity == 0) return IntegerMatrix(unknowns, 0);
  IntegerMatrix rows = form.u.bottomRows(nullity);
  const HermiteForm canonical = hermite_normal_form(rows);
  return canonical.h.topRows(canonical.rank).transpose();
}

std::vector<IntegerMatrix> integer_kernel(std::span<const IntegerMatrix> conditions, Index rows,
                                          Index cols) {
  const Index unknowns = rows * cols;
  Index total = 0;
  for (const auto& c : conditions) {
    if (c.cols() != unknowns) throw PreconditionError("integer_kernel: condition has wrong width");
    total += c.rows();
  }
  IntegerMatrix stacked(total, unknowns);
  Index at = 0;
  for (const auto& c : conditions) {
    stacked.middleRows(at, c.rows()) = c;
    at += c.rows();
  }
  const IntegerMatrix basis = integer_kernel(stacked);
  std::vector<IntegerMatrix> out;
  out.reserve(static_cast<std::size_t>(basis.cols()));
  for (Index k = 0; k < basis.cols(); ++k) out.push_back(unflatten(basis.col(k), rows, cols));
  return out;
}

RationalMatrix sandwich_operator(const RationalMatrix& left, const RationalMatrix& right) {
  // (L M R)_{ij} = sum_{k,l} L_{ik} M_{kl} R_{lj}
  const Index rows = left.rows(), inner_r = left.cols(), inner_c = right.rows(), cols = right.cols();
  RationalMatrix op = RationalMatrix::Zero(rows * cols, inner_r * inner_c);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j)
      for (Index k = 0; k < inner_r; ++k) {
        if (left(i, k) == 0) continue;
        for (Index l = 0; l < inner_c; ++l)
          if (right(l, j) != 0) op(i * cols + j, k * inner_c + l) += left(i, k) * right(l, j);
      }
  return op;
}

IntegerMatrix integral_rows(const RationalMatrix& m) {
  IntegerMatrix out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i) {
    const Integer den = common_denominator(m.row(i));
    for (Index j = 0; j < m.cols(); ++j) out(i, j) = numerator_of(m(i, j) * Rational(den));
  }
  return out;
}

IntegerMatrix lattice_basis(const IntegerMatrix& generators) {
  const HermiteForm form = hermite_normal_form(IntegerMatrix(generators.transpose()));
  return form.h.topRows(form.rank).transpose();
}

std::optional<IntegerVector> lattice_coordinates(const IntegerMatrix& basis,
                                                 const RationalVector& v) {
  auto x = solve(to_rational(basis), v);
  if (!x) return std::nullopt;
  const RationalMatrix& sol = *x;
  if (RationalVector(to_rational(basis) * sol) != v) return std::nullopt;
  if (!is_integral(sol)) return std::nullopt;
  return IntegerVector(to_integer(sol).col(0));
}

bool is_unimodular(const IntegerMatrix& m) {
  if (m.rows() != m.cols()) return false;
  const Rational det = determinant(to_rational(m));
  return det == 1 || det == -1;
}

}  // namespace conecrafter
