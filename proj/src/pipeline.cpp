#include "conecrafter/pipeline.hpp"

#include "conecrafter/cone.hpp"
#include "conecrafter/endo.hpp"
#include "conecrafter/lattice.hpp"
#include "conecrafter/linalg.hpp"
#include "conecrafter/reduction.hpp"
#include "conecrafter/wedderburn.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace conecrafter {

namespace {

using json = nlohmann::ordered_json;

json to_json(const Rational& q) { return q.str(); }

json to_json(const RationalVector& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i).str());
  return a;
}

json to_json(const IntegerVector& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i).str());
  return a;
}

json to_json(const RationalMatrix& m) {
  json a = json::array();
  for (Index i = 0; i < m.rows(); ++i) a.push_back(to_json(RationalVector(m.row(i).transpose())));
  return a;
}

json to_json(const PolyhedralCone& c) {
  json o;
  o["dimension"] = c.dimension();
  o["rays"] = json::array();
  for (const auto& r : c.rays) o["rays"].push_back(to_json(r));
  o["facets"] = json::array();
  for (const auto& f : c.facets) o["facets"].push_back(to_json(f));
  if (!c.equations.empty()) {
    o["equations"] = json::array();
    for (const auto& e : c.equations) o["equations"].push_back(to_json(e));
  }
  return o;
}

std::string vec_text(const RationalVector& v) {
  std::string s = "[";
  for (Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v(i).str();
  return s + "]";
}

std::string vec_text(const IntegerVector& v) { return vec_text(RationalVector(to_rational(v))); }

struct Invariant {
  std::string name;
  bool passed = true;
  std::string detail;
  bool tiling = false;
};

struct Domain {
  bool constructed = false;
  std::string coordinates;  // "invariant_classes" or "slice"
  PolyhedralCone pi;
  std::vector<RationalMatrix> generators;
  std::vector<std::string> names;
  std::function<bool(const RationalVector&)> interior;
  RationalMatrix gram;
  std::optional<RationalVector> preferred;
  bool gauss = false;
};

class Pipeline {
 public:
  Pipeline(const ProblemDocument& doc, const RunOptions& options)
      : doc_(doc),
        seed_(options.seed.value_or(doc.reduction.seed)),
        samples_(options.samples.value_or(doc.reduction.samples)),
        max_steps_(options.max_steps.value_or(doc.reduction.max_steps)),
        reduce_class_(options.reduce_class) {}

  CommandResult run(const std::string& command);

 private:
  bool validate();
  void endo();
  void cone();
  void funddom(bool run_tiling);
  void reduce();
  void fail(const std::string& name, const std::string& detail, bool tiling = false) {
    invariants_.push_back({name, false, detail, tiling});
  }
  void record(const std::string& name, bool passed, const std::string& detail, bool tiling = false) {
    invariants_.push_back({name, passed, detail, tiling});
  }
  bool build_domain();

  const ProblemDocument& doc_;
  std::uint64_t seed_;
  std::size_t samples_;
  int max_steps_;
  std::optional<std::vector<Rational>> reduce_class_;

  json report_;
  std::ostringstream text_;
  std::vector<Invariant> invariants_;
  bool verify_mode_ = false;

  PolarizedTorus torus_;
  std::optional<GroupAction> group_;
  bool is_ghv_ = false;
  std::optional<EndoAlgebra> end_;
  std::optional<InvariantSubalgebra> end_g_;
  std::optional<Decomposition> dec_;
  std::optional<NSLattice> ns_;
  std::optional<InvariantNS> ns_g_;
  std::optional<ConeStructure> cone_;
  std::vector<RationalMatrix> normalizer_actions_;
  Domain domain_;
  std::vector<std::string> downgrades_;
  bool tiling_ok_ = true;
};

bool Pipeline::validate() {
  json v;
  json checks = json::array();
  bool ok = true;
  auto add = [&](const CheckResult& c, const std::string& prefix = "") {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", prefix + c.detail}});
    if (!c.passed) {
      ok = false;
      fail(c.name, prefix + c.detail);
    }
  };

  const TorusValidation tv = validate_torus(doc_.torus());
  for (const auto& c : tv.checks) add(c);
  v["polarization_sign"] = tv.polarization_sign;
  torus_ = tv.normalized;
  if (tv.polarization_sign < 0) {
    text_ << "  polarization: x^T E J x negative definite; using -E\n";
    if (verify_mode_) fail("polarization_sign", "polarization has the negative sign convention");
  }

  bool autos_ok = true;
  for (std::size_t i = 0; i < doc_.group.size(); ++i) {
    for (const auto& c : validate_automorphism(doc_.torus(), doc_.group[i])) {
      add(c, "group[" + std::to_string(i) + "]: ");
      if (!c.passed) autos_ok = false;
    }
  }

  json group_json;
  bool averaged = false;
  if (ok && autos_ok) {
    std::vector<AffineAuto> gens;
    for (const auto& g : doc_.group) gens.push_back(AffineAuto::make(g.linear, g.translation));
    try {
      group_ = close_group(gens, torus_.rank(), 1024);
      add({"group_closure", true, "order " + std::to_string(group_->order())});
    } catch (const BoundError& e) {
      add({"group_closure", false, e.what()});
    }
  }

  if (group_) {
    group_json["order"] = group_->order();
    bool all_preserve = true;
    for (const auto& g : group_->elements())
      if (!preserves_polarization(torus_.polarization, g.linear)) all_preserve = false;
    if (!all_preserve) {
      IntegerMatrix avg = invariant_polarization(torus_, *group_);
      Integer c(0);
      for (Index i = 0; i < avg.rows(); ++i)
        for (Index j = 0; j < avg.cols(); ++j) c = boost::multiprecision::gcd(c, avg(i, j));
      if (c != 0) avg /= abs(c);
      torus_.polarization = avg;
      averaged = true;
      text_ << "  polarization: not G-invariant; averaged over G\n";
    }
    std::vector<std::string> reasons;
    bool free = true;
    for (std::size_t k = 1; k < group_->order(); ++k)
      if (!is_free(torus_, group_->elements()[k])) {
        free = false;
        reasons.push_back("element " + std::to_string(k) + " has a fixed point");
      }
    const bool translations = has_translations(*group_);
    if (translations) reasons.push_back("contains translation");
    if (group_->is_trivial()) reasons.push_back("trivial group");
    is_ghv_ = reasons.empty();
    group_json["free"] = free;
    group_json["translations"] = translations;
    group_json["polarization_averaged"] = averaged;
    if (verify_mode_ && doc_.kind == "ghv") {
      record("free_action", free, free ? "every non-identity element acts freely" : "some element has a fixed point");
      record("no_translations", !translations, translations ? "contains translation" : "no translations");
    }
    if (averaged) {
      const TorusValidation again = validate_torus(torus_);
      if (!again.ok() || again.polarization_sign < 0) {
        add({"polarization_invariant", false, "averaged polarization is not positive"});
      }
    }
    v["group"] = group_json;
    v["is_ghv"] = is_ghv_;
    v["ghv_reasons"] = reasons;
  }
  v["checks"] = checks;
  report_["validation"] = v;

  text_ << "validation: " << (ok ? "ok" : "FAILED") << "\n";
  for (const auto& c : checks)
    if (!c["passed"].get<bool>())
      text_ << "  FAIL " << c["name"].get<std::string>() << ": " << c["detail"].get<std::string>() << "\n";
  if (group_) {
    text_ << "  group order " << group_->order() << ", is_ghv = " << (is_ghv_ ? "true" : "false");
    if (!is_ghv_) {
      text_ << " (";
      for (std::size_t i = 0; i < v["ghv_reasons"].size(); ++i)
        text_ << (i ? "; " : "") << v["ghv_reasons"][i].get<std::string>();
      text_ << ")";
    }
    text_ << "\n";
  }
  return ok && group_.has_value();
}

void Pipeline::endo() {
  json e;
  end_ = compute_end(torus_);
  end_g_ = invariant_subalgebra(*end_, *group_);
  e["end_rank"] = end_->rank();
  e["end_invariant_rank"] = end_g_->rank();

  const RationalMatrix ef = to_rational(torus_.polarization);
  bool adjoint = true;
  for (const auto& b : end_->basis) {
    const RationalMatrix phi = to_rational(b);
    if (RationalMatrix(rosati(torus_, phi).transpose() * ef) != RationalMatrix(ef * phi)) adjoint = false;
  }
  record("rosati_adjoint", adjoint, adjoint ? "phi'^T E = E phi on a basis" : "adjointness fails");

  const std::string inv_end = involution_failure(end_->algebra);
  const std::string inv_g = involution_failure(end_g_->algebra);
  record("rosati_involution", inv_end.empty() && inv_g.empty(),
         inv_end.empty() && inv_g.empty() ? "anti-multiplicative, involutive, unit fixed"
                                          : "fails: " + inv_end + inv_g);
  bool inverse_ok = true;
  for (const auto& g : group_->elements()) {
    const RationalMatrix a = to_rational(g.linear);
    if (RationalMatrix(rosati(torus_, a) * a) != RationalMatrix::Identity(a.rows(), a.cols())) inverse_ok = false;
  }
  record("rosati_group_inverse", inverse_ok, inverse_ok ? "g' = g^-1 for all g in G" : "g' != g^-1");

  const PositivityReport pos = trace_positivity_check(end_->algebra, 500, seed_);
  const PositivityReport pos_g = trace_positivity_check(end_g_->algebra, 500, seed_);
  record("trace_positive", pos.ok() && pos_g.ok(),
         std::to_string(pos.samples + pos_g.samples) + " samples, " +
             std::to_string(pos.failures + pos_g.failures) + " failures");
  e["involution"] = inv_end.empty() && inv_g.empty() ? "ok" : inv_end + inv_g;
  e["trace_positivity"] = {{"samples", pos.samples + pos_g.samples},
                           {"failures", pos.failures + pos_g.failures},
                           {"gram_positive_definite", pos.gram_positive_definite && pos_g.gram_positive_definite}};

  record("classification_table", classification_table_collision_free(64), "collision-free up to dimension 64");

  try {
    dec_ = decompose(end_g_->algebra, seed_);
    record("wedderburn_decomposition", true, "orthogonal, central, involution-stable idempotents");
  } catch (const Error& err) {
    fail("wedderburn_decomposition", err.what());
  }
  json factors = json::array();
  if (dec_) {
    e["center_rank"] = compute_center(end_g_->algebra).cols();
    e["fixed_dimension"] = dec_->fixed_dim;
    for (const auto& f : dec_->factors) {
      json fj;
      fj["kind"] = f.kind.name();
      fj["multiplicity"] = f.real_places;
      fj["dim_q"] = f.dim_q;
      fj["fixed_dim"] = f.fixed_dim;
      fj["center_degree"] = f.center_degree;
      fj["center_min_poly"] = f.center_min_poly.to_string();
      fj["idempotent"] = to_json(f.idempotent);
      factors.push_back(fj);
    }
  }
  e["factors"] = factors;
  report_["endo"] = e;

  text_ << "endomorphisms: rank End = " << end_->rank() << ", rank End^G = " << end_g_->rank() << "\n";
  if (dec_)
    for (const auto& f : dec_->factors)
      text_ << "  factor " << (f.real_places > 1 ? std::to_string(f.real_places) + " x " : "") << f.kind.name()
            << "  (dim " << f.dim_q << ", fixed " << f.fixed_dim << ", center " << f.center_min_poly.to_string()
            << ")\n";
}

void Pipeline::cone() {
  json c;
  ns_ = compute_ns(torus_);
  ns_g_ = invariant_ns(*ns_, *group_);
  c["rho"] = ns_->dim();
  c["rho_invariant"] = ns_g_->dim();

  const bool sym = embedding_is_symmetric(*ns_);
  const int fixed_end = fixed_dimension(end_->algebra);
  const int fixed_g = fixed_dimension(end_g_->algebra);
  record("symmetric_part", sym && ns_->dim() == fixed_end && ns_g_->dim() == fixed_g,
         "rho = " + std::to_string(ns_->dim()) + ", Rosati-fixed dim = " + std::to_string(fixed_end) +
             "; rho^G = " + std::to_string(ns_g_->dim()) + ", fixed dim of End^G = " + std::to_string(fixed_g));

  bool square = true;
  for (const auto& g : group_->elements()) square = square && equivariance_square_holds(*ns_, g.linear);
  for (const auto& n : doc_.normalizer_generators) square = square && equivariance_square_holds(*ns_, n);
  record("equivariance_square", square, "f(A^T F A) = A' f(F) A");

  bool normalizer_ok = true;
  std::string normalizer_detail = std::to_string(doc_.normalizer_generators.size()) + " generators";
  normalizer_actions_.clear();
  for (std::size_t k = 0; k < doc_.normalizer_generators.size(); ++k) {
    const IntegerMatrix& n = doc_.normalizer_generators[k];
    const RationalMatrix a = to_rational(n);
    if (!is_unimodular(n) || RationalMatrix(a * torus_.complex_structure) != RationalMatrix(torus_.complex_structure * a)) {
      normalizer_ok = false;
      normalizer_detail = "normalizer_generators[" + std::to_string(k) + "] is not an automorphism";
      break;
    }
    try {
      normalizer_actions_.push_back(pullback_matrix(*ns_g_, n));
    } catch (const PreconditionError&) {
      normalizer_ok = false;
      normalizer_detail = "normalizer_generators[" + std::to_string(k) + "] does not preserve invariant classes";
      break;
    }
  }
  record("normalizer_valid", normalizer_ok, normalizer_detail);

  const RationalMatrix e_form = to_rational(torus_.polarization);
  record("polarization_ample", is_ample_form(torus_, e_form), "E is totally positive");

  json tests = json::array();
  bool stable = true;
  std::vector<RationalMatrix> probe{e_form};
  for (const auto& t : doc_.test_classes) probe.push_back(t);
  for (const auto& f : probe)
    for (const auto& g : group_->elements())
      if (is_ample_form(torus_, f) != is_ample_form(torus_, pullback_form(f, g.linear))) stable = false;
  record("cone_stable", stable, "ampleness is invariant under G");

  for (const auto& t : doc_.test_classes) {
    json tj;
    tj["form"] = to_json(t);
    const auto coords = ns_->coordinates(t);
    tj["in_ns"] = coords.has_value();
    if (coords) {
      tj["invariant"] = ns_g_->coordinates(t).has_value();
      tj["ample"] = is_ample_form(torus_, t);
      tj["nef"] = is_nef_form(torus_, t);
    }
    tests.push_back(tj);
  }

  json factors = json::array();
  if (dec_) {
    try {
      cone_ = cone_structure(*ns_g_, *end_g_, *dec_);
      int total = 0;
      for (const auto& f : dec_->factors) total += f.fixed_dim;
      record("dimension_bookkeeping", total == ns_g_->dim() && cone_->factors.size() == dec_->factors.size(),
             "sum of fixed dims = " + std::to_string(total) + ", rho^G = " + std::to_string(ns_g_->dim()));
      for (const auto& f : cone_->factors)
        factors.push_back({{"kind", f.kind.name()},
                           {"multiplicity", f.places},
                           {"cone", f.places > 1 ? std::to_string(f.places) + " x " + f.cone : f.cone},
                           {"dim", f.dim},
                           {"type", f.type}});
    } catch (const Error& err) {
      fail("dimension_bookkeeping", err.what());
    }
  }
  c["factors"] = factors;
  c["test_classes"] = tests;
  report_["cone"] = c;

  text_ << "classes: rho = " << ns_->dim() << ", rho^G = " << ns_g_->dim() << "\n";
  if (cone_)
    for (const auto& f : cone_->factors)
      text_ << "  cone factor " << (f.places > 1 ? std::to_string(f.places) + " x " : "") << f.cone << ", dim "
            << f.dim << " (" << f.type << ")\n";
  for (const auto& t : tests) {
    text_ << "  class " << t["form"].dump() << ": ";
    if (!t["in_ns"].get<bool>())
      text_ << "not a Neron-Severi class\n";
    else
      text_ << (t["ample"].get<bool>() ? "ample" : t["nef"].get<bool>() ? "nef, not ample" : "not nef") << "\n";
  }
}

bool Pipeline::build_domain() {
  domain_ = Domain{};
  if (!cone_ || !dec_) {
    downgrades_.push_back("no cone structure");
    return false;
  }
  const Index r = ns_g_->dim();
  const auto d_coords = ns_g_->coordinates(to_rational(torus_.polarization));
  if (!d_coords) throw Error("funddom: polarization is not an invariant class");
  const RationalVector d = *d_coords;

  bool hermitian = false;
  for (const auto& f : cone_->factors)
    if (f.type == "hermitian") hermitian = true;

  json factors = json::array();
  if (hermitian) {
    if (doc_.reduction.slice.empty()) {
      for (const auto& f : cone_->factors)
        factors.push_back({{"cone", f.cone}, {"method", f.type == "hermitian" ? "verifier-only" : f.type}});
      downgrades_.push_back("factor of dimension 4 without a reduction slice: verifier-only");
      report_["fundamental_domain"]["factors"] = factors;
      return false;
    }
    if (cone_->factors.size() != 1 || doc_.reduction.slice.size() != 3) {
      downgrades_.push_back("slice reduction needs one factor and three slice forms: verifier-only");
      return false;
    }
    const auto& slice = doc_.reduction.slice;
    RationalMatrix cols(torus_.rank() * torus_.rank(), 3);
    for (Index k = 0; k < 3; ++k) {
      if (!ns_g_->coordinates(slice[static_cast<std::size_t>(k)]))
        throw Error("funddom: reduction.slice[" + std::to_string(k) + "] is not an invariant class");
      cols.col(k) = flatten(slice[static_cast<std::size_t>(k)]);
    }
    const CoordinateSystem slice_coords(cols);
    for (std::size_t g = 0; g < doc_.normalizer_generators.size(); ++g) {
      RationalMatrix m(3, 3);
      for (Index k = 0; k < 3; ++k) {
        auto c = slice_coords.coordinates(
            flatten(pullback_form(slice[static_cast<std::size_t>(k)], doc_.normalizer_generators[g])));
        if (!c) throw Error("funddom: normalizer_generators[" + std::to_string(g) + "] does not preserve the slice");
        m.col(k) = *c;
      }
      domain_.generators.push_back(m);
      domain_.names.push_back("N" + std::to_string(g));
    }
    if (domain_.generators == gauss_generators()) {
      domain_.names = gauss_generator_names();
      domain_.gauss = true;
    }
    const PolarizedTorus t = torus_;
    domain_.interior = [t, slice](const RationalVector& x) {
      RationalMatrix f = RationalMatrix::Zero(t.rank(), t.rank());
      for (Index k = 0; k < 3; ++k) f += x(k) * slice[static_cast<std::size_t>(k)];
      return is_ample_form(t, f);
    };
    domain_.gram.resize(3, 3);
    for (Index i = 0; i < 3; ++i)
      for (Index j = 0; j < 3; ++j) {
        const RationalMatrix fi = embed(torus_, slice[static_cast<std::size_t>(i)]);
        const RationalMatrix fj = embed(torus_, slice[static_cast<std::size_t>(j)]);
        domain_.gram(i, j) = RationalMatrix(fi * rosati(torus_, fj)).trace();
      }
    domain_.pi = minkowski_domain_p2();
    domain_.coordinates = "slice";
    domain_.constructed = true;
    factors.push_back({{"cone", cone_->factors.front().cone},
                       {"method", "slice-minkowski"},
                       {"generators", domain_.names}});
    report_["fundamental_domain"]["factors"] = factors;
    return true;
  }

  std::vector<RationalVector> rays;
  for (std::size_t k = 0; k < cone_->factors.size(); ++k) {
    const ConeFactor& f = cone_->factors[k];
    const RationalVector dk = f.projection * d;
    if (f.type == "ray") {
      rays.push_back(dk);
      factors.push_back({{"cone", f.cone}, {"method", "ray"}, {"ray", to_json(primitive(dk))}});
      continue;
    }
    // Rank-2 factor: a supplied normalizer generator, else a Pell unit.
    std::optional<RationalMatrix> gamma;
    std::string name;
    json source;
    for (std::size_t g = 0; g < normalizer_actions_.size() && !gamma; ++g)
      if (check_hyperbolic(normalizer_actions_[g], f.span).hyperbolic) {
        gamma = normalizer_actions_[g];
        name = "N" + std::to_string(g);
        source = "normalizer_generators[" + std::to_string(g) + "]";
      }
    if (!gamma && dec_->factors.size() == 1) {
      if (auto unit = derive_real_quadratic_unit(*end_g_)) {
        const RationalMatrix action = pullback_matrix(*ns_g_, unit->linear);
        if (check_hyperbolic(action, f.span).hyperbolic) {
          gamma = action;
          name = "u";
          source = {{"pell_D", unit->discriminant.str()},
                    {"x", unit->pell.x.str()},
                    {"y", unit->pell.y.str()},
                    {"norm", unit->pell.norm},
                    {"linear", to_json(to_rational(unit->linear))}};
        }
      }
    }
    if (!gamma) {
      factors.push_back({{"cone", f.cone}, {"method", "verifier-only"}});
      downgrades_.push_back("rank-2 factor without a hyperbolic generator: verifier-only");
      continue;
    }
    const InvariantNS& space = *ns_g_;
    const PolyhedralCone part = hyperbolic_domain(*gamma, dk, f.span, [&](const RationalVector& x) {
      return f.dim == r ? is_ample(space, x) : is_nef(space, x);
    });
    for (const auto& ray : part.rays) rays.push_back(to_rational(ray));
    domain_.generators.push_back(*gamma);
    domain_.names.push_back(name);
    factors.push_back({{"cone", f.cone}, {"method", "hyperbolic"}, {"generator", name}, {"source", source}});
  }
  report_["fundamental_domain"]["factors"] = factors;
  if (!downgrades_.empty()) return false;

  domain_.pi = PolyhedralCone::from_rays(r, rays);
  const InvariantNS space = *ns_g_;
  domain_.interior = [space](const RationalVector& x) { return is_ample(space, x); };
  domain_.gram = trace_gram(*ns_g_);
  domain_.preferred = d;
  domain_.coordinates = "invariant_classes";
  domain_.constructed = true;
  return true;
}

void Pipeline::funddom(bool run_tiling) {
  report_["fundamental_domain"] = json::object();
  json& fd = report_["fundamental_domain"];
  bool built = false;
  try {
    built = build_domain();
  } catch (const Error& err) {
    downgrades_.push_back(err.what());
  }
  fd["status"] = built ? "constructed" : "verifier-only";
  if (!downgrades_.empty()) fd["downgrades"] = downgrades_;
  text_ << "fundamental domain: " << (built ? "constructed" : "verifier-only") << "\n";
  for (const auto& d : downgrades_) text_ << "  downgrade: " << d << "\n";

  if (built) {
    fd["coordinates"] = domain_.coordinates;
    fd["generators"] = domain_.names;
    fd["domain"] = to_json(domain_.pi);
    const std::string consistency = domain_.pi.consistency_failure();
    record("domain_consistency", consistency.empty(), consistency.empty() ? "rays and facets agree" : consistency);
    text_ << "  Pi (" << domain_.coordinates << " coordinates) rays:";
    for (const auto& ray : domain_.pi.rays) text_ << " " << vec_text(ray);
    text_ << "\n";
  }

  if (built && run_tiling) {
    TilingOptions options;
    options.samples = samples_;
    options.seed = seed_;
    options.max_steps = max_steps_;
    const RationalVector eta = find_eta(domain_.pi.ambient_dim, domain_.gram, domain_.interior, domain_.generators,
                                        seed_, domain_.preferred);
    const TilingReport tr = verify_tiling(domain_.pi, domain_.generators, domain_.interior, eta, options);
    json tj;
    tj["eta"] = to_json(eta);
    tj["samples"] = tr.samples;
    tj["successes"] = tr.successes;
    tj["max_steps_used"] = tr.max_steps_used;
    tj["max_steps"] = max_steps_;
    tj["failed_samples"] = tr.failed_samples;
    if (tr.overlap)
      tj["overlap_witness"] = {{"word", tr.overlap->word.to_string(domain_.names)},
                               {"point", to_json(tr.overlap->point)}};
    else
      tj["overlap_witness"] = nullptr;
    if (domain_.gauss) {
      std::size_t agree = 0;
      for (const auto& red : tr.reductions) {
        const auto g = gauss_reduce(numerator_of(red.input(0)), numerator_of(red.input(1)), numerator_of(red.input(2)));
        if (g.reduced == red.reduced) ++agree;
      }
      tj["gauss_cross_check"] = {{"checked", tr.reductions.size()}, {"agree", agree}};
      record("gauss_cross_check", agree == tr.reductions.size(),
             std::to_string(agree) + "/" + std::to_string(tr.reductions.size()) + " agree with Gauss reduction");
    }
    fd["tiling"] = tj;
    tiling_ok_ = tr.complete();
    record("tiling", tr.successes == tr.samples,
           std::to_string(tr.successes) + "/" + std::to_string(tr.samples) + " samples reduced into Pi", true);
    record("tiling_overlap", !tr.overlap.has_value(),
           tr.overlap ? "interior overlap under " + tr.overlap->word.to_string(domain_.names) : "no interior overlap found",
           true);
    text_ << "  tiling: " << tr.successes << "/" << tr.samples << " reduced (max steps " << tr.max_steps_used
          << "), overlap witness: " << (tr.overlap ? tr.overlap->word.to_string(domain_.names) : "none") << "\n";
  }

  // Pushdown identities hold independently of Pi.
  if (ns_ && ns_g_ && group_) {
    json pj;
    if (built && domain_.coordinates == "invariant_classes") {
      const PushdownReport p = pushdown_domain(domain_.pi, *ns_, *ns_g_, *group_);
      pj["pullpush_equals_sum"] = p.pullpush_ok;
      pj["pushpull_equals_order"] = p.pushpull_ok;
      pj["group_order"] = group_->order();
      pj["domain"] = to_json(p.domain);
      record("pushforward_identities", p.pullpush_ok && p.pushpull_ok,
             "pi^* pi_* = sum g^*, pi_* pi^* = " + std::to_string(group_->order()) + " id");
    } else {
      const PushdownReport p = pushdown_maps(*ns_, *ns_g_, *group_);
      pj["pullpush_equals_sum"] = p.pullpush_ok;
      pj["pushpull_equals_order"] = p.pushpull_ok;
      pj["group_order"] = group_->order();
      record("pushforward_identities", p.pullpush_ok && p.pushpull_ok,
             "pi^* pi_* = sum g^*, pi_* pi^* = " + std::to_string(group_->order()) + " id");
    }
    fd["pushdown"] = pj;
    text_ << "  pushdown: pi^* pi_* = sum g^* " << (pj["pullpush_equals_sum"].get<bool>() ? "holds" : "FAILS")
          << ", pi_* pi^* = |G| id " << (pj["pushpull_equals_order"].get<bool>() ? "holds" : "FAILS") << "\n";
  }
  fd["structural_statement"] = {{"statement", "Nef(Y)^e = Nef(Y)^+ = Nef(Y)"}, {"applies", is_ghv_ && built}};
}

void Pipeline::reduce() {
  json rj;
  if (!domain_.constructed) {
    rj["status"] = "no fundamental domain";
    report_["reduce"] = rj;
    text_ << "reduce: no fundamental domain constructed\n";
    return;
  }
  if (!reduce_class_) throw PreconditionError("reduce: --class is required");
  const auto& cls = *reduce_class_;
  if (static_cast<Index>(cls.size()) != domain_.pi.ambient_dim)
    throw PreconditionError("reduce: class has " + std::to_string(cls.size()) + " coordinates, expected " +
                            std::to_string(domain_.pi.ambient_dim));
  RationalVector x(static_cast<Index>(cls.size()));
  for (std::size_t i = 0; i < cls.size(); ++i) x(static_cast<Index>(i)) = cls[i];
  if (!domain_.interior(x)) throw PreconditionError("reduce: class is not ample");
  const RationalVector eta = find_eta(domain_.pi.ambient_dim, domain_.gram, domain_.interior, domain_.generators,
                                      seed_, domain_.preferred);
  const auto r = reduce_into(domain_.pi, domain_.generators, eta, x, max_steps_, 16);
  rj["input"] = to_json(x);
  rj["coordinates"] = domain_.coordinates;
  if (r) {
    rj["status"] = "reduced";
    rj["word"] = r->word.to_string(domain_.names);
    rj["reduced"] = to_json(r->reduced);
    rj["steps"] = r->steps;
    text_ << "reduce: " << vec_text(x) << " -> " << vec_text(r->reduced) << " by " << r->word.to_string(domain_.names)
          << " (" << r->steps << " steps)\n";
  } else {
    rj["status"] = "not reduced within max steps";
    tiling_ok_ = false;
    text_ << "reduce: " << vec_text(x) << " not reduced within " << max_steps_ << " steps\n";
  }
  report_["reduce"] = rj;
}

CommandResult Pipeline::run(const std::string& command) {
  verify_mode_ = command == "verify";
  report_["schema"] = "conecrafter/1";
  report_["command"] = command;
  report_["document"] = doc_.name;
  report_["kind"] = doc_.kind;
  report_["seed"] = seed_;
  text_ << "conecrafter " << command << ": " << (doc_.name.empty() ? "(unnamed)" : doc_.name) << "\n";

  CommandResult out;
  int code = kExitPass;
  if (!validate()) {
    code = kExitValidation;
  } else if (command != "check") {
    try {
      endo();
      if (command != "endo") {
        cone();
        if (command == "funddom" || command == "verify" || command == "reduce") funddom(command != "reduce");
        if (command == "reduce") reduce();
      }
    } catch (const PreconditionError& err) {
      report_["error"] = err.what();
      text_ << "error: " << err.what() << "\n";
      fail("precondition", err.what());
    } catch (const Error& err) {
      report_["error"] = err.what();
      text_ << "error: " << err.what() << "\n";
      fail("internal_consistency", err.what());
    }
    bool other_failed = false, tiling_failed = false;
    for (const auto& inv : invariants_)
      if (!inv.passed) (inv.tiling ? tiling_failed : other_failed) = true;
    if (command == "verify")
      code = other_failed ? kExitValidation : tiling_failed ? kExitTiling : kExitPass;
    else if (report_.contains("error"))
      code = kExitValidation;
    else if (command == "funddom")
      code = (!downgrades_.empty() || !tiling_ok_) ? kExitTiling : kExitPass;
    else if (command == "reduce")
      code = tiling_ok_ && domain_.constructed ? kExitPass : kExitTiling;
  }

  if (command == "verify") {
    json list = json::array();
    json failed = json::array();
    for (const auto& inv : invariants_) {
      list.push_back({{"name", inv.name}, {"passed", inv.passed}, {"detail", inv.detail}});
      if (!inv.passed) failed.push_back(inv.name);
    }
    report_["verify"] = {{"invariants", list}, {"failed", failed}};
    text_ << "invariants:\n";
    for (const auto& inv : invariants_)
      text_ << "  " << (inv.passed ? "ok   " : "FAIL ") << inv.name << ": " << inv.detail << "\n";
  }
  report_["exit_code"] = code;
  text_ << "exit code " << code << "\n";
  out.report = std::move(report_);
  out.text = text_.str();
  out.exit_code = code;
  return out;
}

}  // namespace

CommandResult run_command(const std::string& command, const ProblemDocument& doc, const RunOptions& options) {
  static const std::vector<std::string> commands{"check", "endo", "cone", "funddom", "reduce", "verify"};
  if (std::find(commands.begin(), commands.end(), command) == commands.end())
    throw PreconditionError("unknown command \"" + command + "\"");
  Pipeline p(doc, options);
  return p.run(command);
}

std::vector<Rational> parse_class_list(const std::string& text) {
  std::string body = text;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\n");
    const auto e = s.find_last_not_of(" \t\n");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  body = trim(body);
  if (body.size() < 2 || body.front() != '[' || body.back() != ']')
    throw ParseError("--class", "expected \"[p/q, ...]\"");
  body = body.substr(1, body.size() - 2);
  std::vector<Rational> out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.size() >= 2 && item.front() == '"' && item.back() == '"') item = item.substr(1, item.size() - 2);
    try {
      out.push_back(parse_rational(item));
    } catch (const Error& e) {
      throw ParseError("--class", e.what());
    }
  }
  if (out.empty()) throw ParseError("--class", "empty class");
  return out;
}

}  // namespace conecrafter
