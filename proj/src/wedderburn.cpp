#include "conecrafter/wedderburn.hpp"

#include "conecrafter/lattice.hpp"
#include "conecrafter/linalg.hpp"

#include <algorithm>

namespace conecrafter {

int FactorKind::real_dimension() const {
  switch (family) {
    case Family::Real: return size * size;
    case Family::Complex: return 2 * size * size;
    case Family::Quaternion: return 4 * size * size;
  }
  return 0;
}

int FactorKind::fixed_dimension() const {
  switch (family) {
    case Family::Real: return size * (size + 1) / 2;
    case Family::Complex: return size * size;
    case Family::Quaternion: return 2 * size * size - size;
  }
  return 0;
}

std::string FactorKind::name() const {
  switch (family) {
    case Family::Real: return "RealMatrix(" + std::to_string(size) + ")";
    case Family::Complex: return "ComplexMatrix(" + std::to_string(size) + ")";
    case Family::Quaternion: return "QuaternionMatrix(" + std::to_string(size) + ")";
  }
  return {};
}

std::string FactorKind::cone_name() const {
  switch (family) {
    case Family::Real: return "P_" + std::to_string(size) + "(R)";
    case Family::Complex: return "P_" + std::to_string(size) + "(C)";
    case Family::Quaternion: return "P_" + std::to_string(size) + "(H)";
  }
  return {};
}

std::optional<FactorKind> classify_pair(int dimension, int fixed_dimension) {
  if (dimension <= 0) return std::nullopt;
  for (Family fam : {Family::Real, Family::Complex, Family::Quaternion}) {
    for (int s = 1;; ++s) {
      const FactorKind k{fam, s};
      if (k.real_dimension() > dimension) break;
      if (k.real_dimension() == dimension && k.fixed_dimension() == fixed_dimension) return k;
    }
  }
  return std::nullopt;
}

FactorKind classify(int dimension, int fixed_dimension) {
  auto k = classify_pair(dimension, fixed_dimension);
  if (!k)
    throw Error("classify: no simple factor has (dim, fixed) = (" + std::to_string(dimension) + ", " +
                std::to_string(fixed_dimension) + ")");
  return *k;
}

bool classification_table_collision_free(int max_dimension) {
  std::vector<std::pair<std::pair<int, int>, FactorKind>> seen;
  for (Family fam : {Family::Real, Family::Complex, Family::Quaternion})
    for (int s = 1;; ++s) {
      const FactorKind k{fam, s};
      if (k.real_dimension() > max_dimension) break;
      const std::pair<int, int> key{k.real_dimension(), k.fixed_dimension()};
      for (const auto& [other, kind] : seen)
        if (other == key) return false;
      seen.emplace_back(key, k);
    }
  return true;
}

namespace {

RationalMatrix identity(Index r) { return RationalMatrix::Identity(r, r); }

RationalVector basis_vector(Index r, Index i) { return identity(r).col(i); }

// Matrix of y -> w*y restricted to the subspace spanned by the columns of span.
RationalMatrix restricted_action(const AlgebraWithInvolution& a, const RationalMatrix& span,
                                 const RationalVector& w) {
  const CoordinateSystem cs(span);
  const RationalMatrix lw = a.left_multiplication(w);
  RationalMatrix out(span.cols(), span.cols());
  for (Index j = 0; j < span.cols(); ++j)
    out.col(j) = cs.require(RationalVector(lw * span.col(j)), "restricted_action");
  return out;
}

// p(w) inside the algebra e*A, where e acts as the unit.
RationalVector evaluate_at(const AlgebraWithInvolution& a, const Polynomial& p,
                           const RationalVector& w, const RationalVector& e) {
  RationalVector acc = RationalVector::Zero(a.rank());
  for (int k = p.degree(); k >= 0; --k) acc = a.multiply(w, acc) + p.coefficient(k) * e;
  return acc;
}

// Subspace e*Z of the center, as columns.
RationalMatrix cut_center(const AlgebraWithInvolution& a, const RationalMatrix& center,
                          const RationalVector& e) {
  return column_space(RationalMatrix(a.left_multiplication(e) * center));
}

// Splits e along the irreducible factors of the minimal polynomial of w on e*Z.
std::vector<RationalVector> split(const AlgebraWithInvolution& a, const RationalMatrix& center,
                                  const RationalVector& e, const RationalVector& w) {
  const RationalMatrix span = cut_center(a, center, e);
  const Polynomial m = minimal_poly(restricted_action(a, span, w));
  const auto factors = factor_squarefree_small(m);
  for (const auto& [f, mult] : factors)
    if (mult != 1) throw Error("central_idempotents: center is not reduced; algebra is not semisimple");
  if (factors.size() <= 1) return {e};
  std::vector<RationalVector> out;
  for (std::size_t j = 0; j < factors.size(); ++j) {
    const Polynomial& pj = factors[j].first;
    const Polynomial qj = divmod(m, pj).quotient;
    const ExtendedGcd eg = extended_gcd(qj, pj);  // s*qj + t*pj = 1
    const Polynomial ej = divmod(eg.s * qj, m).remainder;
    out.push_back(evaluate_at(a, ej, w, e));
  }
  return out;
}

bool lex_less(const RationalVector& x, const RationalVector& y) {
  for (Index i = 0; i < x.size(); ++i)
    if (x(i) != y(i)) return x(i) > y(i);
  return false;
}

RationalVector random_combination(const RationalMatrix& span, Rng& rng) {
  RationalVector z = RationalVector::Zero(span.rows());
  for (Index k = 0; k < span.cols(); ++k) z += Rational(rng.uniform(-3, 3)) * span.col(k);
  return z;
}

// Minimal polynomial of a primitive element of the field e*Z.
Polynomial field_generator(const AlgebraWithInvolution& a, const RationalMatrix& span,
                           std::uint64_t seed) {
  const Index k = span.cols();
  for (Index i = 0; i < k; ++i) {
    const Polynomial m = minimal_poly(restricted_action(a, span, span.col(i)));
    if (m.degree() == k) return m;
  }
  Rng rng(seed, 1);
  for (int attempt = 0; attempt < 64; ++attempt) {
    const Polynomial m = minimal_poly(restricted_action(a, span, random_combination(span, rng)));
    if (m.degree() == k) return m;
  }
  throw Error("classify_factor: no primitive element found for the center");
}

}  // namespace

IntegerMatrix compute_center(const AlgebraWithInvolution& a) {
  const Index r = a.rank();
  // x b_i - b_i x = 0: column j of block i is L_j e_i - L_i e_j.
  RationalMatrix conditions(r * r, r);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < r; ++j)
      conditions.block(i * r, j, r, 1) = a.left_mult[static_cast<std::size_t>(j)].col(i) -
                                         a.left_mult[static_cast<std::size_t>(i)].col(j);
  return integer_kernel(integral_rows(conditions));
}

std::vector<RationalVector> central_idempotents(const AlgebraWithInvolution& a,
                                                const IntegerMatrix& center, std::uint64_t seed) {
  const RationalMatrix z = to_rational(center);
  const Index k = z.cols();
  std::vector<RationalVector> result;

  Rng rng(seed);
  for (int attempt = 0; attempt < 32 && result.empty(); ++attempt) {
    const RationalVector w = random_combination(z, rng);
    const Polynomial m = minimal_poly(restricted_action(a, z, w));
    if (m.degree() == k) result = split(a, z, a.unit, w);
  }
  if (result.empty()) {
    // Refine along each basis element and pairwise sums until nothing splits.
    std::vector<RationalVector> probes;
    for (Index i = 0; i < k; ++i) probes.push_back(z.col(i));
    for (Index i = 0; i < k; ++i)
      for (Index j = i + 1; j < k; ++j) probes.push_back(z.col(i) + z.col(j));
    result = {a.unit};
    for (const auto& w : probes) {
      std::vector<RationalVector> next;
      for (const auto& e : result)
        for (auto& piece : split(a, z, e, a.multiply(e, w))) next.push_back(std::move(piece));
      result = std::move(next);
    }
  }
  std::sort(result.begin(), result.end(), lex_less);
  return result;
}

SimpleFactor classify_factor(const AlgebraWithInvolution& a, const IntegerMatrix& center,
                             const RationalVector& idempotent, std::uint64_t seed) {
  const Index r = a.rank();
  SimpleFactor f;
  f.idempotent = idempotent;
  const RationalMatrix le = a.left_multiplication(idempotent);
  const RationalMatrix sym = (identity(r) + a.involution) / Rational(2);
  f.dim_q = static_cast<int>(rank(le));
  f.fixed_dim = static_cast<int>(rank(RationalMatrix(sym * le)));

  const RationalMatrix span = cut_center(a, to_rational(center), idempotent);
  f.center_degree = static_cast<int>(span.cols());
  f.center_min_poly = field_generator(a, span, seed);
  f.involution_trivial_on_center = RationalMatrix(a.involution * span) == span;

  const int real_roots = count_roots_in_interval(f.center_min_poly, std::nullopt, std::nullopt);
  if (real_roots == f.center_degree) {
    if (!f.involution_trivial_on_center)
      throw Error("classify_factor: totally real center but involution is nontrivial on it");
    f.real_places = f.center_degree;
  } else if (real_roots == 0 && f.center_degree % 2 == 0) {
    if (f.involution_trivial_on_center)
      throw Error("classify_factor: CM center but involution is trivial on it");
    f.real_places = f.center_degree / 2;
  } else {
    throw Error("classify_factor: center has mixed signature; involution cannot be positive");
  }
  if (f.dim_q % f.real_places != 0 || f.fixed_dim % f.real_places != 0)
    throw Error("classify_factor: dimensions are not divisible by the number of places");
  f.kind = classify(f.dim_q / f.real_places, f.fixed_dim / f.real_places);
  return f;
}

int fixed_dimension(const AlgebraWithInvolution& a) {
  const Index r = a.rank();
  return static_cast<int>(rank(RationalMatrix((identity(r) + a.involution) / Rational(2))));
}

Decomposition decompose(const AlgebraWithInvolution& a, std::uint64_t seed) {
  const Index r = a.rank();
  const IntegerMatrix center = compute_center(a);
  const auto idempotents = central_idempotents(a, center, seed);

  RationalVector total = RationalVector::Zero(r);
  for (std::size_t i = 0; i < idempotents.size(); ++i) {
    const RationalVector& e = idempotents[i];
    total += e;
    if (a.involute(e) != e) throw Error("decompose: central idempotent is not involution-fixed");
    for (Index j = 0; j < r; ++j) {
      const RationalVector b = basis_vector(r, j);
      if (a.multiply(e, b) != a.multiply(b, e)) throw Error("decompose: idempotent is not central");
    }
    for (std::size_t k = 0; k < idempotents.size(); ++k) {
      const RationalVector prod = a.multiply(e, idempotents[k]);
      const RationalVector expected = i == k ? e : RationalVector(RationalVector::Zero(r));
      if (prod != expected) throw Error("decompose: idempotents are not orthogonal");
    }
  }
  if (total != a.unit) throw Error("decompose: idempotents do not sum to 1");

  Decomposition d;
  d.rank = static_cast<int>(r);
  d.fixed_dim = fixed_dimension(a);
  int dim_sum = 0, fixed_sum = 0;
  for (const auto& e : idempotents) {
    d.factors.push_back(classify_factor(a, center, e, seed));
    dim_sum += d.factors.back().dim_q;
    fixed_sum += d.factors.back().fixed_dim;
  }
  if (dim_sum != d.rank) throw Error("decompose: factor dimensions do not add up to the rank");
  if (fixed_sum != d.fixed_dim)
    throw Error("decompose: fixed dimensions do not add up to the fixed dimension");
  return d;
}

}  // namespace conecrafter
