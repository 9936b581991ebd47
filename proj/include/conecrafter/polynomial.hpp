#pragma once

// Univariate polynomials over Q: characteristic polynomials, Sturm root
// counting and small-degree factorization.

#include "conecrafter/exact.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace conecrafter {

class Polynomial {
 public:
  Polynomial() = default;
  /// Coefficients lowest degree first; trailing zeros are dropped.
  explicit Polynomial(std::vector<Rational> coefficients);
  static Polynomial constant(const Rational& c);
  /// x - r
  static Polynomial linear_root(const Rational& r);
  static Polynomial monomial(int degree, const Rational& c = Rational(1));

  bool is_zero() const { return coeffs_.empty(); }
  /// Degree; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Rational>& coefficients() const { return coeffs_; }
  Rational coefficient(int k) const;
  Rational leading() const;

  Rational operator()(const Rational& x) const;
  int sign_at(const Rational& x) const { return sign((*this)(x)); }
  /// Sign at +infinity (positive=true) or -infinity.
  int sign_at_infinity(bool positive) const;

  Polynomial derivative() const;
  Polynomial monic() const;
  /// Integer coefficients with content 1 and positive leading coefficient.
  std::vector<Integer> primitive_integer() const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Rational& c, const Polynomial& a);
  Polynomial operator-() const;
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

  std::string to_string(const std::string& var = "x") const;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

struct DivMod {
  Polynomial quotient;
  Polynomial remainder;
};

DivMod divmod(const Polynomial& a, const Polynomial& b);
Polynomial gcd(const Polynomial& a, const Polynomial& b);  // monic, or zero

struct ExtendedGcd {
  Polynomial g;  // monic gcd
  Polynomial s;  // s*a + t*b = g
  Polynomial t;
};
ExtendedGcd extended_gcd(const Polynomial& a, const Polynomial& b);

/// p / gcd(p, p'), monic.
Polynomial squarefree_part(const Polynomial& p);

/// Monic characteristic polynomial det(x I - m), exact (Faddeev-LeVerrier).
Polynomial char_poly(const RationalMatrix& m);

/// Minimal polynomial of a square matrix (monic).
Polynomial minimal_poly(const RationalMatrix& m);

/// p(m) for a square matrix m (Horner).
RationalMatrix evaluate(const Polynomial& p, const RationalMatrix& m);

/// An interval endpoint; nullopt stands for -infinity (lower) or +infinity (upper).
using Endpoint = std::optional<Rational>;

std::vector<Polynomial> sturm_chain(const Polynomial& p);

/// Number of distinct real roots of p in (lower, upper]. Rejects p = 0.
int count_roots_in_interval(const Polynomial& p, const Endpoint& lower, const Endpoint& upper);

/// Every complex root of p is real and > 0.
bool all_roots_positive(const Polynomial& p);
/// Every complex root of p is real and >= 0.
bool all_roots_nonnegative(const Polynomial& p);

/// Degree cap for factorization over Q.
inline constexpr int kMaxFactorDegree = 8;

/// Monic irreducible factors over Q with multiplicities; the product with
/// multiplicities equals p.monic(). Throws BoundError above kMaxFactorDegree.
std::vector<std::pair<Polynomial, int>> factor_squarefree_small(const Polynomial& p);

}  // namespace conecrafter
