#include "conecrafter/torus.hpp"

#include "conecrafter/lattice.hpp"
#include "conecrafter/linalg.hpp"

#include <map>

namespace conecrafter {

AffineAuto AffineAuto::make(IntegerMatrix linear, RationalVector translation) {
  if (linear.rows() != linear.cols() || linear.rows() != translation.size())
    throw PreconditionError("AffineAuto: linear part and translation sizes disagree");
  for (Index i = 0; i < translation.size(); ++i) translation(i) = frac(translation(i));
  return {std::move(linear), std::move(translation)};
}

AffineAuto AffineAuto::identity(Index rank) {
  return {IntegerMatrix::Identity(rank, rank), RationalVector::Zero(rank)};
}

bool AffineAuto::is_translation() const {
  return linear == IntegerMatrix::Identity(linear.rows(), linear.cols());
}

bool AffineAuto::is_identity() const {
  return is_translation() && translation == RationalVector::Zero(translation.size());
}

AffineAuto compose(const AffineAuto& a, const AffineAuto& b) {
  RationalVector t = to_rational(a.linear) * b.translation + a.translation;
  return AffineAuto::make(a.linear * b.linear, std::move(t));
}

GroupAction::GroupAction(std::vector<AffineAuto> elements,
                         std::vector<std::vector<std::size_t>> table)
    : elements_(std::move(elements)), table_(std::move(table)) {}

std::size_t GroupAction::inverse(std::size_t a) const {
  for (std::size_t b = 0; b < elements_.size(); ++b)
    if (table_[a][b] == 0) return b;
  throw Error("GroupAction: element has no inverse");
}

bool TorusValidation::ok() const { return failure() == nullptr; }

const CheckResult* TorusValidation::failure() const {
  for (const auto& c : checks)
    if (!c.passed) return &c;
  return nullptr;
}

TorusValidation validate_torus(const PolarizedTorus& t) {
  const Index r = t.complex_structure.rows();
  if (t.complex_structure.cols() != r || t.polarization.rows() != r || t.polarization.cols() != r)
    throw PreconditionError("validate_torus: J and E must be square of the same size");
  if (r == 0 || r % 2 != 0) throw PreconditionError("validate_torus: lattice rank must be even and positive");

  TorusValidation report;
  report.normalized = t;
  const RationalMatrix& J = t.complex_structure;
  const RationalMatrix E = to_rational(t.polarization);
  const RationalMatrix id = RationalMatrix::Identity(r, r);

  const bool j_ok = RationalMatrix(J * J) == RationalMatrix(-id);
  report.checks.push_back({"complex_structure", j_ok, j_ok ? "J^2 = -I" : "J^2 != -I"});

  const bool alt = RationalMatrix(E.transpose()) == RationalMatrix(-E);
  report.checks.push_back({"polarization_alternating", alt, alt ? "E^T = -E" : "E^T != -E"});

  const bool compat = RationalMatrix(J.transpose() * E * J) == E;
  report.checks.push_back({"polarization_compatible", compat,
                           compat ? "J^T E J = E" : "J^T E J != E"});

  const RationalMatrix ej = E * J;
  const RationalMatrix sym = (ej + RationalMatrix(ej.transpose())) / Rational(2);
  const auto minors = leading_minors(sym);
  bool pos = true, neg = true;
  for (std::size_t k = 0; k < minors.size(); ++k) {
    if (minors[k] <= 0) pos = false;
    const int expected = (k % 2 == 0) ? -1 : 1;
    if (sign(minors[k]) != expected) neg = false;
  }
  if (pos) {
    report.polarization_sign = 1;
    report.checks.push_back({"polarization_definite", true, "x^T E J x positive definite"});
  } else if (neg) {
    report.polarization_sign = -1;
    report.normalized.polarization = -t.polarization;
    report.checks.push_back(
        {"polarization_definite", true, "x^T E J x negative definite; normalized E -> -E"});
  } else {
    report.checks.push_back({"polarization_definite", false, "x^T E J x is not definite"});
  }
  return report;
}

std::vector<CheckResult> validate_automorphism(const PolarizedTorus& t, const AffineAuto& g) {
  std::vector<CheckResult> out;
  const Index r = t.rank();
  if (g.linear.rows() != r || g.linear.cols() != r || g.translation.size() != r) {
    out.push_back({"automorphism_shape", false, "linear part or translation has wrong size"});
    return out;
  }
  const bool uni = is_unimodular(g.linear);
  out.push_back({"automorphism_unimodular", uni, uni ? "|det| = 1" : "|det| != 1"});
  const RationalMatrix a = to_rational(g.linear);
  const bool hol = RationalMatrix(a * t.complex_structure) == RationalMatrix(t.complex_structure * a);
  out.push_back({"automorphism_holomorphic", hol, hol ? "commutes with J" : "does not commute with J"});
  bool range = true;
  for (Index i = 0; i < r; ++i)
    if (g.translation(i) < 0 || g.translation(i) >= 1) range = false;
  out.push_back({"automorphism_translation_range", range, range ? "in [0,1)" : "outside [0,1)"});
  return out;
}

GroupAction close_group(std::span<const AffineAuto> generators, Index rank, std::size_t max_order) {
  std::vector<AffineAuto> elements{AffineAuto::identity(rank)};
  auto find = [&](const AffineAuto& g) -> std::ptrdiff_t {
    for (std::size_t i = 0; i < elements.size(); ++i)
      if (elements[i] == g) return static_cast<std::ptrdiff_t>(i);
    return -1;
  };
  for (const auto& g : generators) {
    if (g.linear.rows() != rank) throw PreconditionError("close_group: generator has wrong rank");
    if (find(g) < 0) elements.push_back(g);
  }
  // Right-multiply every element by every generator until nothing new appears.
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (const auto& g : generators) {
      AffineAuto prod = compose(elements[i], g);
      if (find(prod) >= 0) continue;
      if (elements.size() >= max_order)
        throw BoundError("close_group: closure exceeds max order " + std::to_string(max_order));
      elements.push_back(std::move(prod));
    }
  }
  if (elements.size() > max_order)
    throw BoundError("close_group: closure exceeds max order " + std::to_string(max_order));
  std::vector<std::vector<std::size_t>> table(elements.size(),
                                              std::vector<std::size_t>(elements.size()));
  for (std::size_t a = 0; a < elements.size(); ++a)
    for (std::size_t b = 0; b < elements.size(); ++b) {
      const auto idx = find(compose(elements[a], elements[b]));
      if (idx < 0) throw Error("close_group: composition table is not closed");
      table[a][b] = static_cast<std::size_t>(idx);
    }
  return GroupAction(std::move(elements), std::move(table));
}

bool is_free(const PolarizedTorus& t, const AffineAuto& g) {
  if (g.is_identity()) throw PreconditionError("is_free: identity element has every point fixed");
  const Index r = t.rank();
  // A fixed point exists iff t lies in V + Z^{2n}, V = im(A - I). Rows of W
  // span V^perp, so this is W t in W Z^{2n}.
  const IntegerMatrix shifted = g.linear - IntegerMatrix::Identity(r, r);
  const IntegerMatrix left_kernel = integer_kernel(IntegerMatrix(shifted.transpose()));
  const IntegerMatrix w = left_kernel.transpose();
  if (w.rows() == 0) return false;
  const RationalVector image = to_rational(w) * g.translation;
  const IntegerMatrix lattice = lattice_basis(w);
  return !lattice_coordinates(lattice, image).has_value();
}

bool has_translations(const GroupAction& group) {
  for (const auto& g : group.elements())
    if (!g.is_identity() && g.is_translation()) return true;
  return false;
}

IntegerMatrix invariant_polarization(const PolarizedTorus& t, const GroupAction& group) {
  IntegerMatrix sum = IntegerMatrix::Zero(t.rank(), t.rank());
  for (const auto& g : group.elements()) sum += g.linear.transpose() * t.polarization * g.linear;
  return sum;
}

bool preserves_polarization(const IntegerMatrix& polarization, const IntegerMatrix& linear) {
  return IntegerMatrix(linear.transpose() * polarization * linear) == polarization;
}

}  // namespace conecrafter
