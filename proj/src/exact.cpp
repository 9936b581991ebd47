#include "conecrafter/exact.hpp"
#include "conecrafter/linalg.hpp"

#include <cctype>

namespace conecrafter {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view("1")
                                                               : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    throw Error("malformed rational \"" + std::string(text) + "\"");
  Integer n{std::string(num)};
  Integer d{std::string(den)};
  if (d == 0) throw Error("zero denominator in rational \"" + std::string(text) + "\"");
  if (negative) n = -n;
  return Rational(n, d);
}

std::string to_string(const Rational& q) { return q.str(); }
std::string to_string(const Integer& z) { return z.str(); }

bool is_integral(const RationalMatrix& m) {
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (denominator_of(m(i, j)) != 1) return false;
  return true;
}

IntegerMatrix to_integer(const RationalMatrix& m) {
  IntegerMatrix out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) {
      if (denominator_of(m(i, j)) != 1) throw Error("to_integer: entry is not an integer");
      out(i, j) = numerator_of(m(i, j));
    }
  return out;
}

Integer common_denominator(const RationalMatrix& m) {
  Integer l(1);
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) l = boost::multiprecision::lcm(l, denominator_of(m(i, j)));
  return l;
}

Integer content(const IntegerVector& v) {
  Integer g(0);
  for (Index i = 0; i < v.size(); ++i) g = boost::multiprecision::gcd(g, v(i));
  return abs(g);
}

IntegerVector primitive(const RationalVector& v) {
  const Integer den = common_denominator(v);
  IntegerVector out(v.size());
  for (Index i = 0; i < v.size(); ++i) out(i) = numerator_of(v(i) * Rational(den));
  const Integer g = content(out);
  if (g == 0) throw PreconditionError("primitive: zero vector has no ray");
  for (Index i = 0; i < v.size(); ++i) out(i) /= g;
  return out;
}

CoordinateSystem::CoordinateSystem(RationalMatrix basis) : basis_(std::move(basis)) {
  const auto echelon = rref(RationalMatrix(basis_.transpose()));
  if (static_cast<Index>(echelon.pivots.size()) != basis_.cols())
    throw PreconditionError("CoordinateSystem: basis vectors are dependent");
  rows_ = echelon.pivots;
  RationalMatrix square(basis_.cols(), basis_.cols());
  for (std::size_t k = 0; k < rows_.size(); ++k) square.row(static_cast<Index>(k)) = basis_.row(rows_[k]);
  pivot_inverse_ = inverse(square);
}

std::optional<RationalVector> CoordinateSystem::coordinates(const RationalVector& v) const {
  RationalVector picked(static_cast<Index>(rows_.size()));
  for (std::size_t k = 0; k < rows_.size(); ++k) picked(static_cast<Index>(k)) = v(rows_[k]);
  RationalVector x = pivot_inverse_ * picked;
  if (RationalVector(basis_ * x) != v) return std::nullopt;
  return x;
}

RationalVector CoordinateSystem::require(const RationalVector& v, const char* what) const {
  auto x = coordinates(v);
  if (!x) throw Error(std::string(what) + ": vector lies outside the span of the basis");
  return *x;
}

}  // namespace conecrafter
