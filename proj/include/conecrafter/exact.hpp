#pragma once

// Exact scalar and dense matrix types shared by every module.

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>
#include <Eigen/Core>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace conecrafter {

using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IntegerMatrix = Matrix<Integer>;
using RationalMatrix = Matrix<Rational>;
using IntegerVector = Vector<Integer>;
using RationalVector = Vector<Rational>;
using Index = Eigen::Index;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input exceeds the desk-scale bounds (polynomial degree, group order, ...).
class BoundError : public Error {
 public:
  using Error::Error;
};

/// A hypothesis of an operation does not hold for the given input.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

inline Integer numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

/// Floor division for a signed dividend and nonzero divisor.
inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

inline Integer floor_of(const Rational& q) {
  return floor_div(numerator_of(q), denominator_of(q));
}

/// Representative of q mod 1 in [0, 1).
inline Rational frac(const Rational& q) { return q - Rational(floor_of(q)); }

inline int sign(const Integer& a) { return a > 0 ? 1 : (a < 0 ? -1 : 0); }
inline int sign(const Rational& a) { return a > 0 ? 1 : (a < 0 ? -1 : 0); }

/// Parses "p/q" or "p"; rejects zero denominators and stray characters.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

template <typename Derived>
RationalMatrix to_rational(const Eigen::MatrixBase<Derived>& m) {
  return m.template cast<Rational>();
}

/// Converts a rational matrix whose entries are integers; throws otherwise.
IntegerMatrix to_integer(const RationalMatrix& m);
bool is_integral(const RationalMatrix& m);

/// Least common multiple of all denominators.
Integer common_denominator(const RationalMatrix& m);

/// Scales a nonzero rational vector to the primitive integer vector on its ray.
IntegerVector primitive(const RationalVector& v);
Integer content(const IntegerVector& v);

/// Deterministic bounded draws; std distributions differ across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::uint64_t stream)
      : engine_(seed * 0x9E3779B97F4A7C15ULL + stream + 1) {}

  /// Uniform integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(engine_() % span);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace conecrafter
