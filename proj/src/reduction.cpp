#include "conecrafter/reduction.hpp"

#include "conecrafter/lattice.hpp"
#include "conecrafter/linalg.hpp"
#include "conecrafter/polynomial.hpp"
#include "conecrafter/wedderburn.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace conecrafter {

namespace {

Rational dot(const IntegerVector& h, const RationalVector& x) {
  Rational s(0);
  for (Index i = 0; i < h.size(); ++i) s += Rational(h(i)) * x(i);
  return s;
}

Integer dot(const IntegerVector& h, const IntegerVector& x) {
  Integer s(0);
  for (Index i = 0; i < h.size(); ++i) s += h(i) * x(i);
  return s;
}

bool lex_less(const IntegerVector& a, const IntegerVector& b) {
  for (Index i = 0; i < a.size(); ++i)
    if (a(i) != b(i)) return a(i) < b(i);
  return false;
}

std::string key_of(const RationalMatrix& m) {
  std::string k;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) k += m(i, j).str() + ",";
  return k;
}

// Calls f on every size-k subset of {0..n-1}, as sorted index lists.
template <typename F>
void for_each_subset(std::size_t n, std::size_t k, F&& f) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

IntegerMatrix stack_rows(const std::vector<IntegerVector>& a, const std::vector<IntegerVector>& b,
                         Index cols) {
  IntegerMatrix m(static_cast<Index>(a.size() + b.size()), cols);
  Index r = 0;
  for (const auto& v : a) m.row(r++) = v.transpose();
  for (const auto& v : b) m.row(r++) = v.transpose();
  return m;
}

void add_unique(std::vector<IntegerVector>& list, const IntegerVector& v) {
  for (const auto& w : list)
    if (w == v) return;
  list.push_back(v);
}

}  // namespace

PolyhedralCone PolyhedralCone::from_rays(Index ambient_dim, const std::vector<RationalVector>& rays) {
  PolyhedralCone c;
  c.ambient_dim = ambient_dim;
  for (const auto& r : rays) {
    if (r.size() != ambient_dim) throw PreconditionError("PolyhedralCone: ray has wrong dimension");
    const IntegerVector p = primitive(r);
    bool duplicate = false;
    for (const auto& q : c.rays) {
      if (q == p) duplicate = true;
      if (q == IntegerVector(-p)) throw PreconditionError("PolyhedralCone: cone contains a line");
    }
    if (!duplicate) c.rays.push_back(p);
  }
  if (c.rays.empty()) throw PreconditionError("PolyhedralCone: no rays");

  const IntegerMatrix eq = integer_kernel(stack_rows(c.rays, {}, ambient_dim));
  for (Index k = 0; k < eq.cols(); ++k) c.equations.push_back(eq.col(k));
  const Index dim = c.dimension();
  if (dim == 1) {
    c.facets.push_back(c.rays.front());
    return c;
  }
  for_each_subset(c.rays.size(), static_cast<std::size_t>(dim - 1), [&](const std::vector<std::size_t>& idx) {
    std::vector<IntegerVector> subset;
    for (auto i : idx) subset.push_back(c.rays[i]);
    const IntegerMatrix k = integer_kernel(stack_rows(subset, c.equations, ambient_dim));
    if (k.cols() != 1) return;
    IntegerVector h = k.col(0);
    bool pos = true, neg = true;
    for (const auto& r : c.rays) {
      const Integer s = dot(h, r);
      if (s < 0) pos = false;
      if (s > 0) neg = false;
    }
    if (!pos && !neg) return;
    if (!pos) h = -h;
    add_unique(c.facets, h);
  });
  std::sort(c.facets.begin(), c.facets.end(), lex_less);
  return c;
}

PolyhedralCone PolyhedralCone::from_facets(Index ambient_dim, const std::vector<IntegerVector>& facets) {
  PolyhedralCone c;
  c.ambient_dim = ambient_dim;
  for (const auto& f : facets) add_unique(c.facets, primitive(to_rational(f)));
  for_each_subset(c.facets.size(), static_cast<std::size_t>(ambient_dim - 1),
                  [&](const std::vector<std::size_t>& idx) {
                    std::vector<IntegerVector> subset;
                    for (auto i : idx) subset.push_back(c.facets[i]);
                    const IntegerMatrix k = integer_kernel(stack_rows(subset, {}, ambient_dim));
                    if (k.cols() != 1) return;
                    IntegerVector r = k.col(0);
                    bool pos = true, neg = true;
                    for (const auto& f : c.facets) {
                      const Integer s = dot(f, r);
                      if (s < 0) pos = false;
                      if (s > 0) neg = false;
                    }
                    if (!pos && !neg) return;
                    if (!pos) r = -r;
                    add_unique(c.rays, r);
                  });
  if (c.rays.empty()) throw PreconditionError("PolyhedralCone: inequalities define no pointed cone");
  std::sort(c.rays.begin(), c.rays.end(), lex_less);
  std::sort(c.facets.begin(), c.facets.end(), lex_less);
  return c;
}

bool PolyhedralCone::contains(const RationalVector& x) const {
  for (const auto& e : equations)
    if (dot(e, x) != 0) return false;
  for (const auto& f : facets)
    if (dot(f, x) < 0) return false;
  return true;
}

bool PolyhedralCone::interior_contains(const RationalVector& x) const {
  for (const auto& e : equations)
    if (dot(e, x) != 0) return false;
  for (const auto& f : facets)
    if (dot(f, x) <= 0) return false;
  return true;
}

std::string PolyhedralCone::consistency_failure() const {
  for (std::size_t i = 0; i < rays.size(); ++i) {
    if (content(rays[i]) != 1) return "ray " + std::to_string(i) + " is not primitive";
    for (std::size_t j = 0; j < i; ++j)
      if (rays[i] == rays[j] || rays[i] == IntegerVector(-rays[j]))
        return "rays " + std::to_string(j) + " and " + std::to_string(i) + " are proportional";
    for (const auto& e : equations)
      if (dot(e, rays[i]) != 0) return "ray " + std::to_string(i) + " violates an equation";
    for (const auto& f : facets)
      if (dot(f, rays[i]) < 0) return "ray " + std::to_string(i) + " pairs negatively with a facet";
  }
  for (std::size_t k = 0; k < facets.size(); ++k) {
    std::vector<IntegerVector> support;
    for (const auto& r : rays)
      if (dot(facets[k], r) == 0) support.push_back(r);
    const Index supported = support.empty() ? 0 : rank(to_rational(stack_rows(support, {}, ambient_dim)));
    if (supported < dimension() - 1) return "facet " + std::to_string(k) + " is not supported by enough rays";
  }
  std::vector<RationalVector> rs;
  for (const auto& r : rays) rs.push_back(to_rational(r));
  const auto recomputed = from_rays(ambient_dim, rs);
  if (recomputed.facets != facets) return "facets differ from those recomputed from the rays";
  return {};
}

std::string GroupWord::to_string(const std::vector<std::string>& names) const {
  if (letters.empty()) return "id";
  std::string out;
  for (const auto& [g, e] : letters) {
    if (!out.empty()) out += " ";
    out += names.at(static_cast<std::size_t>(g));
    if (e < 0) out += "^-1";
  }
  return out;
}

RationalMatrix evaluate_word(const std::vector<std::pair<int, int>>& letters,
                             const std::vector<RationalMatrix>& generators,
                             const std::vector<RationalMatrix>& inverses, Index dim) {
  RationalMatrix m = RationalMatrix::Identity(dim, dim);
  for (const auto& [g, e] : letters)
    m = (e > 0 ? generators : inverses)[static_cast<std::size_t>(g)] * m;
  return m;
}

namespace {

std::vector<RationalMatrix> inverses_of(const std::vector<RationalMatrix>& generators) {
  std::vector<RationalMatrix> out;
  for (const auto& g : generators) out.push_back(inverse(g));
  return out;
}

RationalMatrix matrix3(std::initializer_list<int> entries) {
  RationalMatrix m(3, 3);
  auto it = entries.begin();
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) m(i, j) = Rational(*it++);
  return m;
}

}  // namespace

std::vector<RationalMatrix> gauss_generators() {
  return {matrix3({0, 0, 1, 0, -1, 0, 1, 0, 0}),   // S: (c, -b, a)
          matrix3({1, 0, 0, 2, 1, 0, 1, 1, 1}),    // T: (a, 2a + b, a + b + c)
          matrix3({1, 0, 0, 0, -1, 0, 0, 0, 1})};  // R: (a, -b, c)
}

std::vector<std::string> gauss_generator_names() { return {"S", "T", "R"}; }

ReductionResult gauss_reduce(const Integer& a0, const Integer& b0, const Integer& c0) {
  if (a0 <= 0 || b0 * b0 - 4 * a0 * c0 >= 0)
    throw PreconditionError("gauss_reduce: form is not positive definite");
  Integer a = a0, b = b0, c = c0;
  std::vector<std::pair<int, int>> letters;
  while (true) {
    // b -> b + 2ak lands in (-a, a].
    const Integer k = floor_div(a - b, 2 * a);
    const int e = k > 0 ? 1 : -1;
    for (Integer i = 0; i < abs(k); ++i) letters.emplace_back(1, e);
    c = a * k * k + b * k + c;
    b = b + 2 * a * k;
    if (a > c) {
      letters.emplace_back(0, 1);
      std::swap(a, c);
      b = -b;
      continue;
    }
    break;
  }
  if (b < 0) {
    letters.emplace_back(2, 1);
    b = -b;
  }
  const auto gens = gauss_generators();
  ReductionResult r;
  r.input = RationalVector(3);
  r.input << Rational(a0), Rational(b0), Rational(c0);
  r.reduced = RationalVector(3);
  r.reduced << Rational(a), Rational(b), Rational(c);
  r.word.letters = std::move(letters);
  r.word.matrix = evaluate_word(r.word.letters, gens, inverses_of(gens), 3);
  r.steps = static_cast<int>(r.word.length());
  if (RationalVector(r.word.matrix * r.input) != r.reduced)
    throw Error("gauss_reduce: certificate word does not reproduce the reduced form");
  return r;
}

PolyhedralCone minkowski_domain_p2() {
  std::vector<IntegerVector> facets(3, IntegerVector(3));
  facets[0] << 0, 1, 0;   // b >= 0
  facets[1] << 1, -1, 0;  // a - b >= 0
  facets[2] << -1, 0, 1;  // c - a >= 0
  return PolyhedralCone::from_facets(3, facets);
}

PellSolution pell_fundamental_unit(const Integer& d) {
  if (d <= 0) throw PreconditionError("pell_fundamental_unit: D must be positive");
  const Integer a0 = boost::multiprecision::sqrt(d);
  if (a0 * a0 == d) throw PreconditionError("pell_fundamental_unit: D is a perfect square");
  Integer m = 0, den = 1, a = a0;
  Integer p_prev = 1, p = a0, q_prev = 0, q = 1;
  while (true) {
    const Integer n = p * p - d * q * q;
    if (n == 1 || n == -1) return {p, q, n == 1 ? 1 : -1};
    m = den * a - m;
    den = (d - m * m) / den;
    a = (a0 + m) / den;
    const Integer p_next = a * p + p_prev;
    const Integer q_next = a * q + q_prev;
    p_prev = p;
    p = p_next;
    q_prev = q;
    q = q_next;
  }
}

PellSolution pell_plus_one(const Integer& d) {
  const PellSolution s = pell_fundamental_unit(d);
  if (s.norm == 1) return s;
  return {s.x * s.x + d * s.y * s.y, 2 * s.x * s.y, 1};
}

namespace {

bool is_rational_square(const Rational& q) {
  if (q < 0) return false;
  const Integer n = numerator_of(q), dd = denominator_of(q);
  const Integer rn = boost::multiprecision::sqrt(n), rd = boost::multiprecision::sqrt(dd);
  return rn * rn == n && rd * rd == dd;
}

}  // namespace

HyperbolicCheck check_hyperbolic(const RationalMatrix& gamma, const RationalMatrix& span) {
  HyperbolicCheck out;
  if (span.cols() != 2) {
    out.reason = "component is not 2-dimensional";
    return out;
  }
  const CoordinateSystem cs(span);
  RationalMatrix m(2, 2);
  for (Index j = 0; j < 2; ++j) {
    auto c = cs.coordinates(RationalVector(gamma * span.col(j)));
    if (!c) {
      out.reason = "generator does not preserve the component";
      return out;
    }
    m.col(j) = *c;
  }
  out.trace = m.trace();
  out.det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const Rational disc = out.trace * out.trace - 4 * out.det;
  if (disc < 0) {
    out.reason = "elliptic on the component";
  } else if (disc == 0) {
    out.reason = "parabolic or identity on the component";
  } else if (is_rational_square(disc)) {
    out.reason = "eigenvalues are rational";
  } else {
    out.hyperbolic = true;
  }
  return out;
}

PolyhedralCone hyperbolic_domain(const RationalMatrix& gamma, const RationalVector& d,
                                 const RationalMatrix& span,
                                 const std::function<bool(const RationalVector&)>& is_ample) {
  if (!is_ample(d)) throw PreconditionError("hyperbolic_domain: D is not ample");
  const HyperbolicCheck h = check_hyperbolic(gamma, span);
  if (!h.hyperbolic) throw PreconditionError("hyperbolic_domain: generator rejected: " + h.reason);
  return PolyhedralCone::from_rays(d.size(), {d, RationalVector(gamma * d)});
}

std::vector<GroupWord> enumerate_words(const std::vector<RationalMatrix>& generators, Index dim,
                                       int max_length) {
  const auto inverses = inverses_of(generators);
  const RationalMatrix id = RationalMatrix::Identity(dim, dim);
  std::set<std::string> seen{key_of(id)};
  std::vector<GroupWord> all;
  std::vector<GroupWord> frontier{GroupWord{{}, id}};
  for (int len = 1; len <= max_length; ++len) {
    std::vector<GroupWord> next;
    for (const auto& w : frontier)
      for (std::size_t g = 0; g < generators.size(); ++g)
        for (int e : {1, -1}) {
          const RationalMatrix m = (e > 0 ? generators[g] : inverses[g]) * w.matrix;
          if (!seen.insert(key_of(m)).second) continue;
          GroupWord nw{w.letters, m};
          nw.letters.emplace_back(static_cast<int>(g), e);
          next.push_back(nw);
          all.push_back(std::move(nw));
        }
    frontier = std::move(next);
  }
  return all;
}

bool eta_has_stabilizer(const RationalVector& eta, const std::vector<GroupWord>& words) {
  for (const auto& w : words)
    if (RationalVector(w.matrix.transpose() * eta) == eta) return true;
  return false;
}

RationalVector find_eta(Index dim, const RationalMatrix& gram,
                        const std::function<bool(const RationalVector&)>& interior,
                        const std::vector<RationalMatrix>& generators, std::uint64_t seed,
                        const std::optional<RationalVector>& preferred) {
  const auto words = enumerate_words(generators, dim, 4);
  Rng rng(seed, 0x65746131);
  int candidates = 0;
  auto admissible = [&](const RationalVector& y) -> std::optional<RationalVector> {
    ++candidates;
    if (!interior(y)) return std::nullopt;
    RationalVector eta = gram * y;
    if (eta_has_stabilizer(eta, words)) return std::nullopt;
    return eta;
  };
  if (preferred)
    if (auto eta = admissible(*preferred)) return *eta;
  while (candidates < 1000) {
    RationalVector y(dim);
    for (Index i = 0; i < dim; ++i) y(i) = Rational(rng.uniform(-4, 4));
    if (auto eta = admissible(y)) return *eta;
  }
  throw Error("find_eta: no interior point with trivial stabilizer among 1000 candidates");
}

namespace {

struct BeamState {
  RationalVector x;
  std::vector<std::pair<int, int>> letters;
  int violations = 0;
  Rational height;
};

int violations(const PolyhedralCone& pi, const RationalVector& x) {
  int v = 0;
  for (const auto& e : pi.equations)
    if (dot(e, x) != 0) ++v;
  for (const auto& f : pi.facets)
    if (dot(f, x) < 0) ++v;
  return v;
}

std::string key_of_vector(const RationalVector& x) {
  std::string k;
  for (Index i = 0; i < x.size(); ++i) k += x(i).str() + ",";
  return k;
}

}  // namespace

std::optional<ReductionResult> reduce_into(const PolyhedralCone& pi,
                                           const std::vector<RationalMatrix>& generators,
                                           const RationalVector& eta, const RationalVector& x,
                                           int max_steps, int beam_width) {
  const auto inverses = inverses_of(generators);
  const Index dim = x.size();
  auto height = [&](const RationalVector& v) { return Rational(eta.dot(v)); };
  auto act = [&](int g, int e, const RationalVector& v) -> RationalVector {
    return (e > 0 ? generators : inverses)[static_cast<std::size_t>(g)] * v;
  };
  auto finish = [&](const RationalVector& y, std::vector<std::pair<int, int>> letters, int steps) {
    ReductionResult r;
    r.input = x;
    r.reduced = y;
    r.word.matrix = evaluate_word(letters, generators, inverses, dim);
    r.word.letters = std::move(letters);
    r.steps = steps;
    return r;
  };

  RationalVector cur = x;
  std::vector<std::pair<int, int>> letters;
  int steps = 0;
  while (true) {
    if (pi.contains(cur)) return finish(cur, letters, steps);
    if (steps >= max_steps) return std::nullopt;

    const Rational h = height(cur);
    std::optional<std::pair<int, int>> best;
    RationalVector best_x;
    Rational best_h = h;
    for (std::size_t g = 0; g < generators.size(); ++g)
      for (int e : {1, -1}) {
        RationalVector y = act(static_cast<int>(g), e, cur);
        const Rational hy = height(y);
        if (hy < best_h) {
          best_h = hy;
          best_x = std::move(y);
          best = std::make_pair(static_cast<int>(g), e);
        }
      }
    if (best) {
      cur = std::move(best_x);
      letters.push_back(*best);
      ++steps;
      continue;
    }

    // Plateau: beam search ranked by facet violations, then height.
    std::set<std::string> visited{key_of_vector(cur)};
    std::vector<BeamState> frontier{{cur, letters, violations(pi, cur), h}};
    bool escaped = false;
    while (!escaped && steps < max_steps) {
      ++steps;
      std::vector<BeamState> next;
      for (const auto& s : frontier)
        for (std::size_t g = 0; g < generators.size(); ++g)
          for (int e : {1, -1}) {
            RationalVector y = act(static_cast<int>(g), e, s.x);
            if (!visited.insert(key_of_vector(y)).second) continue;
            auto word = s.letters;
            word.emplace_back(static_cast<int>(g), e);
            if (pi.contains(y)) return finish(y, std::move(word), steps);
            const int v = violations(pi, y);
            const Rational hy = height(y);
            next.push_back({std::move(y), std::move(word), v, hy});
          }
      if (next.empty()) return std::nullopt;
      std::stable_sort(next.begin(), next.end(), [](const BeamState& a, const BeamState& b) {
        if (a.violations != b.violations) return a.violations < b.violations;
        return a.height < b.height;
      });
      if (next.size() > static_cast<std::size_t>(beam_width)) next.resize(static_cast<std::size_t>(beam_width));
      if (next.front().height < h) {
        cur = next.front().x;
        letters = next.front().letters;
        escaped = true;
      }
      frontier = std::move(next);
    }
    if (!escaped) return std::nullopt;
  }
}

std::optional<OverlapWitness> find_overlap(const PolyhedralCone& pi,
                                           const std::vector<RationalMatrix>& generators,
                                           const TilingOptions& options) {
  if (generators.empty()) return std::nullopt;
  const auto words = enumerate_words(generators, pi.ambient_dim, options.overlap_word_length);
  Rng rng(options.seed, 0x6f766572);
  for (std::size_t s = 0; s < options.overlap_samples; ++s) {
    RationalVector p = RationalVector::Zero(pi.ambient_dim);
    for (const auto& r : pi.rays) p += Rational(rng.uniform(1, 5)) * to_rational(r);
    if (!pi.interior_contains(p)) continue;
    for (const auto& w : words) {
      const RationalVector q = w.matrix * p;
      if (pi.interior_contains(q)) return OverlapWitness{w, p};
    }
  }
  return std::nullopt;
}

TilingReport verify_tiling(const PolyhedralCone& pi, const std::vector<RationalMatrix>& generators,
                           const std::function<bool(const RationalVector&)>& interior,
                           const RationalVector& eta, const TilingOptions& options) {
  const auto inverses = inverses_of(generators);
  const Index dim = pi.ambient_dim;
  TilingReport report;
  report.samples = options.samples;
  for (std::size_t i = 0; i < options.samples; ++i) {
    Rng rng(options.seed, i);
    RationalVector x(dim);
    bool found = false;
    for (int attempt = 0; attempt < 100000 && !found; ++attempt) {
      for (Index k = 0; k < dim; ++k) x(k) = Rational(rng.uniform(-options.sample_box, options.sample_box));
      found = interior(x);
    }
    if (!found) throw Error("verify_tiling: could not sample an interior class");
    const auto r = reduce_into(pi, generators, eta, x, options.max_steps, options.beam_width);
    const bool ok = r && pi.contains(r->reduced) &&
                    RationalVector(evaluate_word(r->word.letters, generators, inverses, dim) * x) == r->reduced;
    if (ok) {
      ++report.successes;
      report.max_steps_used = std::max(report.max_steps_used, r->steps);
      report.reductions.push_back(*r);
    } else {
      report.failed_samples.push_back(i);
    }
  }
  report.overlap = find_overlap(pi, generators, options);
  return report;
}

PushdownReport pushdown_maps(const NSLattice& ns, const InvariantNS& inv, const GroupAction& group) {
  PushdownReport out;
  const Index r = ns.dim();
  out.pullback = inv.inclusion;
  out.pullback_sum = RationalMatrix::Zero(r, r);
  for (const auto& g : group.elements()) out.pullback_sum += pullback_matrix(ns, g.linear);
  auto q = solve(out.pullback, out.pullback_sum);
  if (!q) throw Error("pushdown_domain: sum of pullbacks does not land in the invariant classes");
  out.pushforward = *q;
  out.pullpush_ok = RationalMatrix(out.pullback * out.pushforward) == out.pullback_sum;
  const Rational order(static_cast<long long>(group.order()));
  const RationalMatrix id = RationalMatrix::Identity(inv.dim(), inv.dim());
  out.pushpull_ok = RationalMatrix(out.pushforward * out.pullback) == RationalMatrix(order * id);
  return out;
}

PushdownReport pushdown_domain(const PolyhedralCone& pi, const NSLattice& ns, const InvariantNS& inv,
                               const GroupAction& group) {
  PushdownReport out = pushdown_maps(ns, inv, group);
  const Rational order(static_cast<long long>(group.order()));
  std::vector<RationalVector> rays;
  for (const auto& ray : pi.rays)
    rays.push_back(RationalVector(out.pushforward * out.pullback * to_rational(ray)) / order);
  out.domain = PolyhedralCone::from_rays(pi.ambient_dim, rays);
  return out;
}

std::optional<DerivedUnit> derive_real_quadratic_unit(const InvariantSubalgebra& a) {
  const AlgebraWithInvolution& alg = a.algebra;
  const Index r = alg.rank();
  const IntegerMatrix center = compute_center(alg);
  const RationalMatrix z = to_rational(center);
  // Symmetric center: x in Z with x' = x.
  const RationalMatrix cond = (alg.involution - RationalMatrix::Identity(r, r)) * z;
  const IntegerMatrix k = integer_kernel(integral_rows(cond));
  if (k.cols() != 2) return std::nullopt;
  const RationalMatrix sym = z * to_rational(k);
  const RationalMatrix unit_col = alg.unit;
  RationalVector w;
  for (Index j = 0; j < 2; ++j) {
    RationalMatrix pair(r, 2);
    pair << unit_col, sym.col(j);
    if (rank(pair) == 2) {
      w = sym.col(j);
      break;
    }
  }
  if (w.size() == 0) return std::nullopt;
  const Polynomial m = minimal_poly(alg.left_multiplication(w));
  if (m.degree() != 2) return std::nullopt;
  // m = x^2 - t x + n
  const Rational t = -m.coefficient(1), n = m.coefficient(0);
  if (denominator_of(t) != 1 || denominator_of(n) != 1) return std::nullopt;
  const Integer ti = numerator_of(t), ni = numerator_of(n);
  const Integer disc = ti * ti - 4 * ni;
  if (disc <= 0) return std::nullopt;
  const Integer root = boost::multiprecision::sqrt(disc);
  if (root * root == disc) return std::nullopt;
  Integer d;
  RationalVector s;
  if (ti % 2 == 0) {
    d = disc / 4;
    s = w - Rational(ti / 2) * alg.unit;
  } else {
    d = disc;
    s = 2 * w - Rational(ti) * alg.unit;
  }
  const PellSolution pell = pell_fundamental_unit(d);
  const RationalVector u = Rational(pell.x) * alg.unit + Rational(pell.y) * s;
  const RationalMatrix um = a.to_matrix(u);
  if (!is_integral(um)) return std::nullopt;
  IntegerMatrix linear = to_integer(um);
  if (!is_unimodular(linear)) return std::nullopt;
  return DerivedUnit{std::move(linear), d, pell};
}

}  // namespace conecrafter
