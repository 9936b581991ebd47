#include "conecrafter/wedderburn.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace conecrafter;
using namespace conecrafter::testing;

namespace {

GroupAction group_of(const ProblemDocument& doc) {
  return close_group(std::span<const AffineAuto>(doc.group), doc.lattice_rank, 1024);
}

/// Commutative algebra from left-multiplication matrices of its basis, with
/// the regular trace pairing Tr(L(b_i b_j')).
AlgebraWithInvolution commutative_algebra(std::vector<RationalMatrix> left, RationalMatrix involution,
                                          RationalVector unit) {
  AlgebraWithInvolution a;
  a.left_mult = std::move(left);
  a.involution = std::move(involution);
  a.unit = std::move(unit);
  const Index k = a.involution.rows();
  a.trace_form = RationalMatrix::Zero(k, k);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j) {
      const RationalVector prod = a.left_mult[static_cast<std::size_t>(i)] * a.involution.col(j);
      a.trace_form(i, j) = a.left_multiplication(prod).trace();
    }
  return a;
}

// Q x Q with basis (1, z), z^2 = 1, trivial involution.
AlgebraWithInvolution split_quadratic() {
  return commutative_algebra({rmat(2, 2, {1, 0, 0, 1}), rmat(2, 2, {0, 1, 1, 0})},
                             RationalMatrix::Identity(2, 2), rvec({1, 0}));
}

// Q(i) x Q with basis (1, w, w^2), w = (i, 0), w^3 = -w; the involution
// conjugates the Q(i) factor.
AlgebraWithInvolution gaussian_times_rational() {
  const RationalMatrix one = RationalMatrix::Identity(3, 3);
  const RationalMatrix lw = rmat(3, 3, {0, 0, 0, 1, 0, -1, 0, 1, 0});
  const RationalMatrix lw2 = rmat(3, 3, {0, 0, 0, 0, -1, 0, 1, 0, -1});
  return commutative_algebra({one, lw, lw2}, rmat(3, 3, {1, 0, 0, 0, -1, 0, 0, 0, 1}), rvec({1, 0, 0}));
}

void expect_complete_orthogonal_idempotents(const AlgebraWithInvolution& a,
                                            const std::vector<RationalVector>& es) {
  RationalVector sum = RationalVector::Zero(a.rank());
  for (std::size_t i = 0; i < es.size(); ++i) {
    EXPECT_EQ(a.multiply(es[i], es[i]), es[i]);
    EXPECT_EQ(a.involute(es[i]), es[i]);
    for (std::size_t j = 0; j < es.size(); ++j)
      if (i != j) EXPECT_TRUE(a.multiply(es[i], es[j]).isZero());
    sum += es[i];
  }
  EXPECT_EQ(sum, a.unit);
}

}  // namespace

TEST(Wedderburn, ClassificationExamples) {
  EXPECT_EQ(classify(1, 1), (FactorKind{Family::Real, 1}));
  EXPECT_EQ(classify(4, 3), (FactorKind{Family::Real, 2}));
  EXPECT_EQ(classify(4, 1), (FactorKind{Family::Quaternion, 1}));
  EXPECT_EQ(classify(8, 4), (FactorKind{Family::Complex, 2}));
  EXPECT_EQ(classify(8, 4).name(), "ComplexMatrix(2)");
  EXPECT_FALSE(classify_pair(3, 2).has_value());
  EXPECT_THROW(classify(3, 2), Error);
}

TEST(Wedderburn, TableCollisionFree) {
  EXPECT_TRUE(classification_table_collision_free(64));
  std::set<std::pair<int, int>> seen;
  for (int d = 1; d <= 64; ++d)
    for (int f = 0; f <= d; ++f)
      if (auto k = classify_pair(d, f)) {
        EXPECT_EQ(k->real_dimension(), d);
        EXPECT_EQ(k->fixed_dimension(), f);
        EXPECT_TRUE(seen.insert({d, f}).second);
      }
  // Real(l), Complex(m), Quaternion(t) dimensions from their definitions
  for (int n = 1; n * n <= 64; ++n) {
    EXPECT_EQ(classify(n * n, n * (n + 1) / 2), (FactorKind{Family::Real, n}));
    if (2 * n * n <= 64) EXPECT_EQ(classify(2 * n * n, n * n), (FactorKind{Family::Complex, n}));
    if (4 * n * n <= 64) EXPECT_EQ(classify(4 * n * n, 2 * n * n - n), (FactorKind{Family::Quaternion, n}));
  }
}

TEST(Wedderburn, SplitQuadraticIdempotents) {
  const auto a = split_quadratic();
  const IntegerMatrix center = compute_center(a);
  EXPECT_EQ(center.cols(), 2);
  const auto es = central_idempotents(a, center, 42);
  ASSERT_EQ(es.size(), 2u);
  std::set<std::pair<Rational, Rational>> got;
  for (const auto& e : es) got.insert({e(0), e(1)});
  EXPECT_EQ(got, (std::set<std::pair<Rational, Rational>>{{Rational(1, 2), Rational(1, 2)},
                                                         {Rational(1, 2), Rational(-1, 2)}}));
  expect_complete_orthogonal_idempotents(a, es);
  const auto dec = decompose(a);
  ASSERT_EQ(dec.factors.size(), 2u);
  for (const auto& f : dec.factors) EXPECT_EQ(f.kind, (FactorKind{Family::Real, 1}));
}

TEST(Wedderburn, GaussianTimesRationalIdempotents) {
  const auto a = gaussian_times_rational();
  const auto es = central_idempotents(a, compute_center(a), 42);
  ASSERT_EQ(es.size(), 2u);
  expect_complete_orthogonal_idempotents(a, es);
  const auto dec = decompose(a);
  std::multiset<std::string> kinds;
  for (const auto& f : dec.factors) kinds.insert(f.kind.name());
  EXPECT_EQ(kinds, (std::multiset<std::string>{"ComplexMatrix(1)", "RealMatrix(1)"}));
}

TEST(Wedderburn, FieldHasSingleIdempotent) {
  const auto e = compute_end(corpus("ei").torus());
  const auto es = central_idempotents(e.algebra, compute_center(e.algebra), 42);
  ASSERT_EQ(es.size(), 1u);
  EXPECT_EQ(es[0], e.algebra.unit);
  EXPECT_EQ(compute_center(e.algebra).cols(), 2);
}

TEST(Wedderburn, ProductCenterAndDecomposition) {
  const auto e = compute_end(corpus("ei_x_ei").torus());
  EXPECT_EQ(compute_center(e.algebra).cols(), 2);
  const auto dec = decompose(e.algebra);
  ASSERT_EQ(dec.factors.size(), 1u);
  const auto& f = dec.factors[0];
  EXPECT_EQ(f.kind, (FactorKind{Family::Complex, 2}));
  EXPECT_EQ(f.dim_q, 8);
  EXPECT_EQ(f.fixed_dim, 4);
  EXPECT_EQ(f.center_degree, 2);
  EXPECT_FALSE(f.involution_trivial_on_center);
  EXPECT_EQ(dec.rank, 8);
  EXPECT_EQ(dec.fixed_dim, 4);
  EXPECT_EQ(fixed_dimension(e.algebra), 4);
}

TEST(Wedderburn, BiellipticInvariantDecomposition) {
  const auto doc = corpus("bielliptic");
  const auto e = compute_end(doc.torus());
  const auto inv = invariant_subalgebra(e, group_of(doc));
  const auto dec = decompose(inv.algebra);
  ASSERT_EQ(dec.factors.size(), 2u);
  std::vector<RationalVector> es;
  for (const auto& f : dec.factors) {
    EXPECT_EQ(f.kind.size, 1);
    EXPECT_EQ(f.dim_q, 2);
    EXPECT_EQ(f.fixed_dim, 1);
    es.push_back(f.idempotent);
  }
  expect_complete_orthogonal_idempotents(inv.algebra, es);
  // involution stability of each factor e A
  for (const auto& ei : es)
    for (Index k = 0; k < inv.rank(); ++k) {
      const RationalVector x = inv.algebra.multiply(ei, RationalVector::Unit(inv.rank(), k));
      EXPECT_EQ(inv.algebra.multiply(ei, inv.algebra.involute(x)), inv.algebra.involute(x));
    }
}

TEST(Wedderburn, DecompositionIsSeedIndependent) {
  const auto e = compute_end(corpus("ei_x_e2i").torus());
  const auto a = decompose(e.algebra, 1);
  const auto b = decompose(e.algebra, 99);
  ASSERT_EQ(a.factors.size(), b.factors.size());
  for (std::size_t i = 0; i < a.factors.size(); ++i) {
    EXPECT_EQ(a.factors[i].idempotent, b.factors[i].idempotent);
    EXPECT_EQ(a.factors[i].kind, b.factors[i].kind);
  }
}
