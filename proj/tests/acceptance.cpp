// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only when
// all criteria pass.

#include "conecrafter/cone.hpp"
#include "conecrafter/endo.hpp"
#include "conecrafter/linalg.hpp"
#include "conecrafter/pipeline.hpp"
#include "conecrafter/reduction.hpp"
#include "conecrafter/wedderburn.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace conecrafter;
using namespace conecrafter::testing;

namespace {

/// Collects failure messages for one criterion.
struct Check {
  std::vector<std::string> failures;
  std::string summary;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

GroupAction group_of(const ProblemDocument& doc) {
  return close_group(std::span<const AffineAuto>(doc.group), doc.lattice_rank, 1024);
}

RationalVector random_coords(Rng& rng, Index k) {
  RationalVector v(k);
  for (Index i = 0; i < k; ++i) v(i) = Rational(rng.uniform(-5, 5));
  return v;
}

oracle::Lattice brute_force_end(const RationalMatrix& j, int bound) {
  const int n = static_cast<int>(j.rows());
  oracle::Lattice lattice(n * n);
  oracle::for_each_solution(n * n, oracle::commutes_with(j), bound,
                            [&](const oracle::Vec& x) { lattice.insert(x); });
  return lattice;
}

oracle::Lattice brute_force_ns(const RationalMatrix& j, int bound) {
  const int n = static_cast<int>(j.rows());
  oracle::Lattice lattice(n * n);
  oracle::for_each_solution(n * (n - 1) / 2, oracle::ns_equations(j), bound,
                            [&](const oracle::Vec& x) { lattice.insert(oracle::alternating_flat(n, x)); });
  return lattice;
}

RationalMatrix hermitian_class(long a, long b, long c, long d) {
  RationalMatrix f = RationalMatrix::Zero(4, 4);
  f(0, 1) = a;
  f(2, 3) = b;
  f(0, 2) = d;
  f(0, 3) = c;
  f(1, 2) = -c;
  f(1, 3) = d;
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < i; ++j) f(i, j) = -f(j, i);
  return f;
}

// ---- criteria -----------------------------------------------------------------

void ac1(Check& c) {
  const std::pair<const char*, Index> end_ranks[] = {{"ei", 2}, {"ei_x_ei", 8}};
  for (const auto& [name, rank] : end_ranks) {
    const auto doc = corpus(name);
    const auto e = compute_end(doc.torus());
    const int n = static_cast<int>(doc.lattice_rank);
    c.expect(e.rank() == rank, std::string(name) + ": rank End = " + std::to_string(e.rank()));
    c.expect(oracle::same_lattice(e.basis, brute_force_end(doc.complex_structure, 3), n * n),
             std::string(name) + ": End lattice differs from brute force");
  }
  const auto doc = corpus("ei_x_ei");
  const auto ns = compute_ns(doc.torus());
  c.expect(ns.dim() == 4, "rank NS(E_i x E_i) = " + std::to_string(ns.dim()));
  c.expect(oracle::same_lattice(ns.basis, brute_force_ns(doc.complex_structure, 3), 16),
           "NS lattice differs from brute force");
  c.summary = "End(E_i) = 2, End(E_i x E_i) = 8, NS(E_i x E_i) = 4; lattices match [-3,3] brute force";
}

void ac2(Check& c) {
  std::size_t checked = 0;
  for (const char* name : {"ei", "ei_x_ei", "ei_x_e2i", "bielliptic", "hyperbolic", "q8"}) {
    const auto doc = corpus(name);
    const auto t = doc.torus();
    const RationalMatrix ef = to_rational(t.polarization);
    const auto e = compute_end(t);
    Rng rng(42, static_cast<std::uint64_t>(checked));
    for (int s = 0; s < 500; ++s) {
      const RationalMatrix f = e.to_matrix(random_coords(rng, e.rank()));
      const RationalMatrix g = e.to_matrix(random_coords(rng, e.rank()));
      const RationalMatrix fr = rosati(t, f);
      c.expect(RationalMatrix(fr.transpose() * ef) == RationalMatrix(ef * f), std::string(name) + ": adjointness");
      c.expect(rosati(t, RationalMatrix(f * g)) == RationalMatrix(rosati(t, g) * fr),
               std::string(name) + ": (fg)' != g'f'");
      c.expect(rosati(t, fr) == f, std::string(name) + ": (f')' != f");
      if (!f.isZero())
        c.expect(RationalMatrix(f * fr).trace() > 0, std::string(name) + ": Tr(f f') <= 0");
    }
    const auto pos = trace_positivity_check(e.algebra, 500, 42);
    c.expect(pos.ok(), std::string(name) + ": trace form not positive");
    const auto group = group_of(doc);
    for (const auto& g : group.elements()) {
      const RationalMatrix a = to_rational(g.linear);
      c.expect(rosati(t, a) == inverse(a), std::string(name) + ": g' != g^-1");
    }
    ++checked;
  }
  c.summary = std::to_string(checked) + " algebras x 500 samples: adjoint, contravariant, involutive, positive; g' = g^-1";
}

void ac3(Check& c) {
  for (const char* name : {"ei", "ei_x_ei", "ei_x_e2i"}) {
    const auto t = corpus(name).torus();
    const auto e = compute_end(t);
    const auto ns = compute_ns(t);
    const RationalMatrix fixed =
        kernel(RationalMatrix(e.algebra.involution - RationalMatrix::Identity(e.rank(), e.rank())));
    c.expect(fixed.cols() == ns.dim(), std::string(name) + ": dim fixed != rho");
    // the image f(NS) spans the fixed space
    RationalMatrix image(e.rank(), ns.dim());
    for (Index k = 0; k < ns.dim(); ++k)
      image.col(k) = e.coordinates(embed(t, to_rational(ns.basis[static_cast<std::size_t>(k)])));
    c.expect(rank(image) == ns.dim(), std::string(name) + ": image not of full rank");
    RationalMatrix joint(e.rank(), image.cols() + fixed.cols());
    joint << image, fixed;
    c.expect(rank(joint) == fixed.cols(), std::string(name) + ": image and fixed space differ");
  }
  c.summary = "f(NS (x) Q) = Rosati-fixed subspace on E_i, E_i x E_i, E_i x E_2i";
}

void ac4(Check& c) {
  c.expect(classification_table_collision_free(64), "table collision");
  const auto e = compute_end(corpus("ei_x_ei").torus());
  const auto dec = decompose(e.algebra);
  c.expect(dec.factors.size() == 1 && dec.factors[0].kind == FactorKind{Family::Complex, 2},
           "E_i x E_i is not ComplexMatrix(2)");
  const auto doc = corpus("bielliptic");
  const auto inv = invariant_subalgebra(compute_end(doc.torus()), group_of(doc));
  const auto bd = decompose(inv.algebra);
  c.expect(bd.factors.size() == 2, "bielliptic: " + std::to_string(bd.factors.size()) + " factors");
  RationalVector sum = RationalVector::Zero(inv.rank());
  for (std::size_t i = 0; i < bd.factors.size(); ++i) {
    const auto& ei = bd.factors[i].idempotent;
    c.expect(bd.factors[i].kind.size == 1, "bielliptic factor of size > 1");
    c.expect(inv.algebra.multiply(ei, ei) == ei, "idempotent");
    c.expect(inv.algebra.involute(ei) == ei, "involution moves an idempotent");
    for (std::size_t j = 0; j < bd.factors.size(); ++j)
      if (i != j) c.expect(inv.algebra.multiply(ei, bd.factors[j].idempotent).isZero(), "orthogonality");
    for (Index k = 0; k < inv.rank(); ++k) {
      const RationalVector x = inv.algebra.involute(inv.algebra.multiply(ei, RationalVector::Unit(inv.rank(), k)));
      c.expect(inv.algebra.multiply(ei, x) == x, "factor not involution-stable");
    }
    sum += ei;
  }
  c.expect(sum == inv.algebra.unit, "idempotents do not sum to 1");
  c.summary = "table collision-free to 64; ComplexMatrix(2) for E_i x E_i; bielliptic 2 x rank-1, exact checks";
}

void ac5(Check& c) {
  const auto t = corpus("ei_x_ei").torus();
  int mismatches = 0, total = 0, ample = 0;
  for (long a = -5; a <= 5; ++a)
    for (long b = -5; b <= 5; ++b)
      for (long cc = -5; cc <= 5; ++cc)
        for (long d = -5; d <= 5; ++d) {
          const bool closed = a > 0 && a * b - cc * cc - d * d > 0;
          const bool sturm = is_ample_form(t, hermitian_class(a, b, cc, d));
          ++total;
          ample += sturm;
          if (sturm != closed) ++mismatches;
        }
  c.expect(total == 14641, "grid size");
  c.expect(mismatches == 0, std::to_string(mismatches) + " mismatches");
  c.summary = std::to_string(total) + " classes, " + std::to_string(ample) + " ample, " +
              std::to_string(mismatches) + " mismatches";
}

void ac6(Check& c) {
  const auto gens = gauss_generators();
  std::vector<RationalMatrix> inverses;
  for (const auto& g : gens) inverses.push_back(inverse(g));
  int forms = 0;
  for (long a = -15; a <= 15; ++a)
    for (long b = -15; b <= 15; ++b)
      for (long cc = -15; cc <= 15; ++cc) {
        if (a <= 0 || b * b - 4 * a * cc >= 0) continue;
        ++forms;
        const auto r = gauss_reduce(a, b, cc);
        const auto& f = r.reduced;
        c.expect(0 <= f(1) && f(1) <= f(0) && f(0) <= f(2), "not reduced");
        c.expect(f(1) * f(1) - 4 * f(0) * f(2) == Rational(b * b - 4 * a * cc), "discriminant changed");
        // replay the certificate letter by letter
        RationalVector x = r.input;
        for (const auto& [g, e] : r.word.letters)
          x = RationalVector((e > 0 ? gens : inverses)[static_cast<std::size_t>(g)] * x);
        c.expect(x == f, "certificate does not reproduce the output");
      }
  const auto w = gauss_reduce(7, 10, 4);
  c.expect(w.reduced == rvec({1, 0, 3}), "(7,10,4) does not reduce to (1,0,3)");
  c.summary = std::to_string(forms) + " positive-definite forms reduced and certified; (7,10,4) -> (1,0,3)";
}

void ac7(Check& c) {
  std::ostringstream out;
  for (long d : {2, 3, 5, 7, 13}) {
    const auto p = pell_plus_one(d);
    c.expect(Integer(p.x * p.x - d * p.y * p.y) == 1, "substitution +1, D = " + std::to_string(d));
    const auto scan = oracle::pell_scan(d, 1, p.y.convert_to<std::int64_t>());
    c.expect(scan && scan->second == p.y.convert_to<std::int64_t>(), "+1 not minimal, D = " + std::to_string(d));
    const auto f = pell_fundamental_unit(d);
    c.expect(Integer(f.x * f.x - d * f.y * f.y) == f.norm, "substitution, D = " + std::to_string(d));
    const auto minus = oracle::pell_scan(d, -1, f.y.convert_to<std::int64_t>());
    const auto plus = oracle::pell_scan(d, 1, f.y.convert_to<std::int64_t>());
    const auto found = f.norm == -1 ? minus : plus;
    c.expect(found && found->second == f.y.convert_to<std::int64_t>(), "unit not minimal, D = " + std::to_string(d));
    c.expect(!(f.norm == 1 && minus), "missed a norm -1 unit, D = " + std::to_string(d));
    out << "D=" << d << ":(" << p.x << "," << p.y << ") ";
  }
  const auto five = pell_plus_one(5);
  c.expect(five.x == 9 && five.y == 4, "D = 5 is not (9,4)");
  c.summary = out.str() + "minimal by exhaustive scan";
}

void ac8(Check& c) {
  std::ostringstream out;
  for (const char* name : {"hyperbolic", "p2"}) {
    const auto r = run_command("funddom", corpus(name), {});
    const auto& fd = r.report["fundamental_domain"];
    const bool constructed = fd.value("status", "") == "constructed";
    c.expect(r.exit_code == kExitPass, std::string(name) + ": exit " + std::to_string(r.exit_code));
    c.expect(constructed, std::string(name) + ": domain not constructed");
    if (!constructed) continue;
    const auto successes = fd["tiling"]["successes"].get<std::size_t>();
    const auto samples = fd["tiling"]["samples"].get<std::size_t>();
    c.expect(samples == 1000 && successes == 1000, std::string(name) + ": " + std::to_string(successes) + "/" +
                                                       std::to_string(samples));
    c.expect(fd["tiling"]["max_steps"].get<int>() == 200, "step bound");
    c.expect(fd["tiling"]["max_steps_used"].get<int>() <= 200, "step bound exceeded");
    c.expect(fd["tiling"]["overlap_witness"].is_null(), std::string(name) + ": overlap witness on final domain");
    out << name << " " << successes << "/" << samples << " (rays " << fd["domain"]["rays"].size() << "), ";
  }
  // |b| <= a <= c: a deliberately enlarged P_2 domain
  std::vector<IntegerVector> facets(3, IntegerVector(3));
  facets[0] << 1, 1, 0;
  facets[1] << 1, -1, 0;
  facets[2] << -1, 0, 1;
  const auto big = PolyhedralCone::from_facets(3, facets);
  const auto witness = find_overlap(big, gauss_generators(), TilingOptions{});
  c.expect(witness.has_value(), "no witness on the enlarged domain");
  if (witness) {
    c.expect(big.interior_contains(witness->point) &&
                 big.interior_contains(RationalVector(witness->word.matrix * witness->point)),
             "witness is not an interior overlap");
    out << "enlarged domain witness " << witness->word.to_string(gauss_generator_names());
  }
  c.summary = out.str();
}

void ac9(Check& c) {
  const auto doc = corpus("bielliptic");
  const auto group = group_of(doc);
  const auto ns = compute_ns(doc.torus());
  const auto inv = invariant_ns(ns, group);
  const auto p = pushdown_maps(ns, inv, group);
  RationalMatrix sum = RationalMatrix::Zero(ns.dim(), ns.dim());
  for (const auto& g : group.elements()) sum += pullback_matrix(ns, g.linear);
  c.expect(group.order() == 4, "|G| = " + std::to_string(group.order()));
  c.expect(RationalMatrix(p.pullback * p.pushforward) == sum, "pi^* pi_* != sum g^*");
  c.expect(RationalMatrix(p.pushforward * p.pullback) ==
               RationalMatrix(Rational(4) * RationalMatrix::Identity(inv.dim(), inv.dim())),
           "pi_* pi^* != |G| id");
  c.summary = "bielliptic, |G| = 4: pi^* pi_* = sum g^* (" + std::to_string(ns.dim()) + "x" +
              std::to_string(ns.dim()) + "), pi_* pi^* = 4 id (" + std::to_string(inv.dim()) + "x" +
              std::to_string(inv.dim()) + ")";
}

struct CliRun {
  int exit_code = -1;
  std::string output;
};

CliRun run_cli(const std::string& args) {
  CliRun r;
  const std::string cmd = std::string(CONECRAFTER_CLI) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  while (fgets(buf.data(), static_cast<int>(buf.size()), pipe)) r.output += buf.data();
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

void ac10(Check& c) {
  int passed = 0, rejected = 0;
  for (const char* name : {"ei", "ei_x_ei", "ei_x_e2i", "bielliptic", "hyperbolic", "p2", "q8"}) {
    const auto r = run_cli("verify " + corpus_path(name));
    c.expect(r.exit_code == 0, std::string(name) + ": exit " + std::to_string(r.exit_code));
    passed += r.exit_code == 0;
  }
  const std::pair<const char*, const char*> mutations[] = {
      {"m01_sign_flip", "polarization_sign"},
      {"m02_block_sign_flip", "polarization_definite"},
      {"m03_zero_translation", "free_action"},
      {"m04_translation_first_factor", "free_action"},
      {"m05_added_translation", "no_translations"},
      {"m06_j_identity", "complex_structure"},
      {"m07_incompatible_polarization", "polarization_compatible"},
      {"m08_nonalternating_polarization", "polarization_alternating"},
      {"m09_nonholomorphic", "automorphism_holomorphic"},
      {"m10_shear", "group_closure"},
  };
  for (const auto& [file, invariant] : mutations) {
    const auto r = run_cli("verify " + corpus_path(std::string("mutations/") + file));
    const bool named = r.output.find(std::string("FAIL ") + invariant + ":") != std::string::npos;
    c.expect(r.exit_code != 0, std::string(file) + ": exit 0");
    c.expect(named, std::string(file) + ": invariant " + invariant + " not named");
    rejected += r.exit_code != 0 && named;
  }
  c.summary = std::to_string(passed) + "/7 corpus documents exit 0; " + std::to_string(rejected) +
              "/10 mutations exit nonzero naming the invariant";
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Check&)>> criteria[] = {
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
      {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10},
  };
  int failed = 0;
  for (const auto& [id, run] : criteria) {
    Check c;
    const auto start = std::chrono::steady_clock::now();
    try {
      run(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = c.failures.empty();
    failed += !ok;
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << std::left << std::setw(5) << id << c.summary << "  ("
              << std::fixed << std::setprecision(1) << seconds << " s)\n";
    for (std::size_t i = 0; i < c.failures.size() && i < 5; ++i) std::cout << "         " << c.failures[i] << "\n";
    if (c.failures.size() > 5) std::cout << "         ... " << c.failures.size() - 5 << " more\n";
  }
  std::cout << (failed == 0 ? "all acceptance criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
  return failed == 0 ? 0 : 1;
}
