#include "conecrafter/polynomial.hpp"

#include "conecrafter/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace conecrafter {

Polynomial::Polynomial(std::vector<Rational> coefficients) : coeffs_(std::move(coefficients)) {
  trim();
}

Polynomial Polynomial::constant(const Rational& c) { return Polynomial({c}); }

Polynomial Polynomial::linear_root(const Rational& r) { return Polynomial({-r, Rational(1)}); }

Polynomial Polynomial::monomial(int degree, const Rational& c) {
  std::vector<Rational> v(static_cast<std::size_t>(degree) + 1, Rational(0));
  v.back() = c;
  return Polynomial(std::move(v));
}

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational Polynomial::coefficient(int k) const {
  if (k < 0 || k > degree()) return Rational(0);
  return coeffs_[static_cast<std::size_t>(k)];
}

Rational Polynomial::leading() const { return coeffs_.empty() ? Rational(0) : coeffs_.back(); }

Rational Polynomial::operator()(const Rational& x) const {
  Rational acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

int Polynomial::sign_at_infinity(bool positive) const {
  if (is_zero()) return 0;
  const int s = sign(leading());
  return (positive || degree() % 2 == 0) ? s : -s;
}

Polynomial Polynomial::derivative() const {
  if (degree() < 1) return {};
  std::vector<Rational> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * Rational(static_cast<long>(k));
  return Polynomial(std::move(d));
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return {};
  const Rational lc = leading();
  std::vector<Rational> v = coeffs_;
  for (auto& c : v) c /= lc;
  return Polynomial(std::move(v));
}

std::vector<Integer> Polynomial::primitive_integer() const {
  Integer den(1);
  for (const auto& c : coeffs_) den = boost::multiprecision::lcm(den, denominator_of(c));
  std::vector<Integer> out;
  Integer g(0);
  for (const auto& c : coeffs_) {
    out.push_back(numerator_of(c * Rational(den)));
    g = boost::multiprecision::gcd(g, out.back());
  }
  if (g == 0) return out;
  if (out.back() < 0) g = -abs(g);
  else g = abs(g);
  for (auto& c : out) c /= g;
  return out;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<Rational> v(std::max(a.coeffs_.size(), b.coeffs_.size()), Rational(0));
  for (std::size_t k = 0; k < a.coeffs_.size(); ++k) v[k] += a.coeffs_[k];
  for (std::size_t k = 0; k < b.coeffs_.size(); ++k) v[k] += b.coeffs_[k];
  return Polynomial(std::move(v));
}

Polynomial Polynomial::operator-() const {
  std::vector<Rational> v = coeffs_;
  for (auto& c : v) c = -c;
  return Polynomial(std::move(v));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> v(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Polynomial(std::move(v));
}

Polynomial operator*(const Rational& c, const Polynomial& a) {
  std::vector<Rational> v = a.coeffs_;
  for (auto& x : v) x *= c;
  return Polynomial(std::move(v));
}

std::string Polynomial::to_string(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    const Rational c = coefficient(k);
    if (c == 0) continue;
    const Rational mag = abs(c);
    if (first) {
      if (c < 0) out << "-";
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (k == 0 || mag != 1) out << mag.str();
    if (k >= 1) out << var;
    if (k >= 2) out << "^" << k;
  }
  return out.str();
}

DivMod divmod(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw PreconditionError("divmod: division by the zero polynomial");
  std::vector<Rational> rem = a.coefficients();
  const int db = b.degree();
  const Rational lb = b.leading();
  std::vector<Rational> quot(a.degree() >= db ? static_cast<std::size_t>(a.degree() - db + 1) : 0,
                             Rational(0));
  for (int k = a.degree(); k >= db; --k) {
    const Rational c = rem[static_cast<std::size_t>(k)] / lb;
    if (c == 0) continue;
    quot[static_cast<std::size_t>(k - db)] = c;
    for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(k - db + j)] -= c * b.coefficient(j);
  }
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  Polynomial x = a, y = b;
  while (!y.is_zero()) {
    Polynomial r = divmod(x, y).remainder;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

ExtendedGcd extended_gcd(const Polynomial& a, const Polynomial& b) {
  Polynomial r0 = a, r1 = b;
  Polynomial s0 = Polynomial::constant(1), s1;
  Polynomial t0, t1 = Polynomial::constant(1);
  while (!r1.is_zero()) {
    const DivMod qr = divmod(r0, r1);
    Polynomial r2 = qr.remainder;
    Polynomial s2 = s0 - qr.quotient * s1;
    Polynomial t2 = t0 - qr.quotient * t1;
    r0 = std::move(r1);
    r1 = std::move(r2);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {};
  const Rational inv = Rational(1) / r0.leading();
  return {inv * r0, inv * s0, inv * t0};
}

Polynomial squarefree_part(const Polynomial& p) {
  if (p.degree() < 1) return p.monic();
  return divmod(p, gcd(p, p.derivative())).quotient.monic();
}

Polynomial char_poly(const RationalMatrix& m) {
  if (m.rows() != m.cols()) throw PreconditionError("char_poly: matrix is not square");
  const Index n = m.rows();
  std::vector<Rational> c(static_cast<std::size_t>(n) + 1, Rational(0));
  c[static_cast<std::size_t>(n)] = Rational(1);
  RationalMatrix acc = RationalMatrix::Zero(n, n);
  const RationalMatrix id = RationalMatrix::Identity(n, n);
  for (Index k = 1; k <= n; ++k) {
    acc = m * acc + c[static_cast<std::size_t>(n - k + 1)] * id;
    const RationalMatrix prod = m * acc;
    c[static_cast<std::size_t>(n - k)] = -prod.trace() / Rational(static_cast<long>(k));
  }
  return Polynomial(std::move(c));
}

Polynomial minimal_poly(const RationalMatrix& m) {
  if (m.rows() != m.cols()) throw PreconditionError("minimal_poly: matrix is not square");
  const Index n = m.rows();
  std::vector<RationalVector> powers;
  RationalMatrix current = RationalMatrix::Identity(n, n);
  for (Index k = 0; k <= n; ++k) {
    const RationalVector flat = flatten(current);
    if (!powers.empty()) {
      RationalMatrix span(flat.size(), static_cast<Index>(powers.size()));
      for (std::size_t j = 0; j < powers.size(); ++j) span.col(static_cast<Index>(j)) = powers[j];
      if (auto x = solve(span, flat)) {
        std::vector<Rational> coeffs(powers.size() + 1);
        for (std::size_t j = 0; j < powers.size(); ++j) coeffs[j] = -(*x)(static_cast<Index>(j), 0);
        coeffs.back() = Rational(1);
        return Polynomial(std::move(coeffs));
      }
    }
    powers.push_back(flat);
    current = current * m;
  }
  throw Error("minimal_poly: no dependency found (unreachable)");
}

RationalMatrix evaluate(const Polynomial& p, const RationalMatrix& m) {
  const Index n = m.rows();
  RationalMatrix acc = RationalMatrix::Zero(n, n);
  for (int k = p.degree(); k >= 0; --k)
    acc = RationalMatrix(acc * m) + p.coefficient(k) * RationalMatrix::Identity(n, n);
  return acc;
}

std::vector<Polynomial> sturm_chain(const Polynomial& p) {
  std::vector<Polynomial> chain;
  if (p.is_zero()) return chain;
  chain.push_back(p);
  Polynomial next = p.derivative();
  while (!next.is_zero()) {
    chain.push_back(next);
    const auto& a = chain[chain.size() - 2];
    next = -divmod(a, chain.back()).remainder;
  }
  return chain;
}

namespace {

int variations(const std::vector<int>& signs) {
  int count = 0, last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

int variations_at(const std::vector<Polynomial>& chain, const Endpoint& x, bool upper) {
  std::vector<int> signs;
  signs.reserve(chain.size());
  for (const auto& q : chain) signs.push_back(x ? q.sign_at(*x) : q.sign_at_infinity(upper));
  return variations(signs);
}

}  // namespace

int count_roots_in_interval(const Polynomial& p, const Endpoint& lower, const Endpoint& upper) {
  if (p.is_zero()) throw PreconditionError("count_roots_in_interval: zero polynomial");
  if (lower && upper && *upper <= *lower) return 0;
  const auto chain = sturm_chain(squarefree_part(p));
  return variations_at(chain, lower, false) - variations_at(chain, upper, true);
}

bool all_roots_positive(const Polynomial& p) {
  const Polynomial sq = squarefree_part(p);
  return count_roots_in_interval(sq, Rational(0), std::nullopt) == sq.degree();
}

bool all_roots_nonnegative(const Polynomial& p) {
  const Polynomial sq = squarefree_part(p);
  const int at_zero = sq(Rational(0)) == 0 ? 1 : 0;
  return count_roots_in_interval(sq, Rational(0), std::nullopt) + at_zero == sq.degree();
}

// ---------------------------------------------------------------------------
// Factorization over Q for small degrees: rational roots, then Kronecker's
// interpolation search for factors of degree 2 .. deg/2.

namespace {

std::vector<Integer> positive_divisors(Integer n) {
  n = abs(n);
  std::vector<Integer> small, large;
  for (Integer d(1); d * d <= n; ++d) {
    if (n % d != 0) continue;
    small.push_back(d);
    if (d * d != n) large.push_back(n / d);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

Polynomial from_integers(const std::vector<Integer>& c) {
  std::vector<Rational> v;
  v.reserve(c.size());
  for (const auto& x : c) v.emplace_back(x);
  return Polynomial(std::move(v));
}

bool divides(const Polynomial& d, const Polynomial& p) { return divmod(p, d).remainder.is_zero(); }

std::optional<Polynomial> find_rational_root_factor(const Polynomial& p) {
  const auto f = p.primitive_integer();
  if (f.front() == 0) return Polynomial::linear_root(Rational(0));
  const auto num = positive_divisors(f.front());
  const auto den = positive_divisors(f.back());
  for (const auto& q : den)
    for (const auto& a : num)
      for (int s : {1, -1}) {
        const Rational r(Integer(s) * a, q);
        if (p(r) == 0) return Polynomial::linear_root(r);
      }
  return std::nullopt;
}

// Lagrange interpolation through (xs[i], ys[i]).
Polynomial interpolate(const std::vector<Integer>& xs, const std::vector<Integer>& ys) {
  Polynomial out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Polynomial term = Polynomial::constant(Rational(ys[i]));
    Rational denom(1);
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (j == i) continue;
      term = term * Polynomial::linear_root(Rational(xs[j]));
      denom *= Rational(xs[i] - xs[j]);
    }
    out = out + (Rational(1) / denom) * term;
  }
  return out;
}

constexpr long kMaxKroneckerCandidates = 4'000'000;

std::optional<Polynomial> find_factor_of_degree(const Polynomial& p, int d) {
  // Evaluation points with the fewest divisors keep the search small.
  struct Point {
    Integer x, value;
    std::vector<Integer> divisors;
  };
  std::vector<Point> points;
  const auto f = p.primitive_integer();
  const Polynomial g = from_integers(f);
  for (int k = 0; k <= 40; ++k) {
    const Integer x(k % 2 == 0 ? k / 2 : -(k + 1) / 2);
    const Rational v = g(Rational(x));
    if (v == 0) return Polynomial::linear_root(Rational(x));
    points.push_back({x, numerator_of(v), positive_divisors(numerator_of(v))});
  }
  std::stable_sort(points.begin(), points.end(),
                   [](const Point& a, const Point& b) { return a.divisors.size() < b.divisors.size(); });
  points.resize(static_cast<std::size_t>(d) + 1);

  long total = 1;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const long choices = static_cast<long>(points[i].divisors.size()) * (i == 0 ? 1 : 2);
    if (total > kMaxKroneckerCandidates / choices)
      throw BoundError("factor_squarefree_small: Kronecker search exceeds desk-scale bound");
    total *= choices;
  }

  std::vector<Integer> xs;
  for (const auto& pt : points) xs.push_back(pt.x);
  std::vector<std::size_t> idx(points.size(), 0);
  std::vector<int> sgn(points.size(), 1);
  std::vector<Integer> ys(points.size());
  const Integer lead = f.back();
  while (true) {
    for (std::size_t i = 0; i < points.size(); ++i) ys[i] = Integer(sgn[i]) * points[i].divisors[idx[i]];
    const Polynomial h = interpolate(xs, ys);
    if (h.degree() == d) {
      bool integral = true;
      for (const auto& c : h.coefficients())
        if (denominator_of(c) != 1) {
          integral = false;
          break;
        }
      if (integral && lead % numerator_of(h.leading()) == 0 && divides(h, g)) return h.monic();
    }
    // Odometer over (divisor, sign) choices; the first point keeps sign +.
    std::size_t i = 0;
    for (; i < points.size(); ++i) {
      if (i > 0 && sgn[i] == 1) {
        sgn[i] = -1;
        break;
      }
      sgn[i] = 1;
      if (++idx[i] < points[i].divisors.size()) break;
      idx[i] = 0;
    }
    if (i == points.size()) break;
  }
  return std::nullopt;
}

void factor_squarefree_into(const Polynomial& p, std::vector<Polynomial>& out) {
  if (p.degree() < 1) return;
  if (p.degree() == 1) {
    out.push_back(p.monic());
    return;
  }
  if (auto linear = find_rational_root_factor(p)) {
    out.push_back(*linear);
    factor_squarefree_into(divmod(p, *linear).quotient, out);
    return;
  }
  for (int d = 2; d <= p.degree() / 2; ++d) {
    if (auto h = find_factor_of_degree(p, d)) {
      factor_squarefree_into(*h, out);
      factor_squarefree_into(divmod(p, *h).quotient, out);
      return;
    }
  }
  out.push_back(p.monic());
}

bool poly_less(const Polynomial& a, const Polynomial& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (int k = a.degree(); k >= 0; --k)
    if (a.coefficient(k) != b.coefficient(k)) return a.coefficient(k) < b.coefficient(k);
  return false;
}

}  // namespace

std::vector<std::pair<Polynomial, int>> factor_squarefree_small(const Polynomial& p) {
  if (p.is_zero()) throw PreconditionError("factor_squarefree_small: zero polynomial");
  if (p.degree() > kMaxFactorDegree)
    throw BoundError("factor_squarefree_small: degree " + std::to_string(p.degree()) +
                     " exceeds the desk-scale bound of " + std::to_string(kMaxFactorDegree));
  // Yun's square-free decomposition.
  std::vector<std::pair<Polynomial, int>> layers;
  Polynomial a = p.monic();
  if (a.degree() >= 1) {
    Polynomial b = a.derivative();
    Polynomial c = gcd(a, b);
    Polynomial w = divmod(a, c).quotient;
    Polynomial y = divmod(b, c).quotient;
    int mult = 1;
    while (w.degree() >= 1) {
      Polynomial z = y - w.derivative();
      Polynomial g = gcd(w, z);
      if (g.degree() >= 1) layers.emplace_back(g, mult);
      w = divmod(w, g).quotient;
      y = z.is_zero() ? Polynomial{} : divmod(z, g).quotient;
      ++mult;
    }
  }
  std::vector<std::pair<Polynomial, int>> out;
  for (const auto& [layer, mult] : layers) {
    std::vector<Polynomial> irreducible;
    factor_squarefree_into(layer, irreducible);
    for (auto& q : irreducible) out.emplace_back(std::move(q), mult);
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    if (x.second != y.second) return x.second < y.second;
    return poly_less(x.first, y.first);
  });
  return out;
}

}  // namespace conecrafter
