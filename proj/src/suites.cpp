#include "devissage/suites.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include "devissage/instances.hpp"

namespace devissage {

namespace {

using Generator = std::function<json(const Ring&, Rng&, const SizeCaps&)>;
using Checker = std::function<void(const json&, TrialRecord&)>;

struct Suite {
  std::string property;
  Generator generate;
  Checker check;
};

SizeCaps suite_caps(const SizeCaps& caps, std::size_t rank_cap) {
  SizeCaps c = caps;
  c.max_rank = std::max<std::size_t>(1, std::min(caps.max_rank, rank_cap));
  c.max_width = std::max<std::size_t>(1, caps.max_width);
  return c;
}

std::size_t draw_width(Rng& rng, const SizeCaps& caps, std::size_t cap) {
  return 1 + rng.below(std::min(caps.max_width, cap));
}

void fail(TrialRecord& t, const std::string& why) {
  if (t.pass) t.detail = why;
  t.pass = false;
}

// ------------------------------------------------------------------ duality

json gen_duality(const Ring& ring, Rng& rng, const SizeCaps& caps) {
  SizeCaps c = suite_caps(caps, 6);
  int lo = static_cast<int>(rng.range(-2, 1));
  Complex e = random_complex(ring, rng, c, lo, draw_width(rng, c, 8), true);
  Complex e2 = random_complex(ring, rng, c, lo, draw_width(rng, c, 8), true);
  ChainMap g = random_chain_map(e, e2, rng);
  return {{"E", to_json(e)}, {"F", to_json(e2)}, {"map", to_json(g, "E", "F")}};
}

void check_duality(const json& inst, TrialRecord& t) {
  Complex e = complex_from_json(inst.at("E"));
  Complex e2 = complex_from_json(inst.at("F"));
  std::map<int, Matrix> comps;
  for (const auto& [k, v] : inst.at("map").at("components").items())
    comps.emplace(std::stoi(k), matrix_from_json(e.ring(), v));
  ChainMap g = ChainMap::make(e, e2, comps);
  const int d = e.ring().dim();
  int lo = std::min(e.is_zero() ? 0 : e.lo(), e2.is_zero() ? 0 : e2.lo()) - d - 1;
  int hi = std::max(e.is_zero() ? 0 : e.hi(), e2.is_zero() ? 0 : e2.hi()) + d + 1;
  std::size_t degrees = 0, squares = 0;
  Complex sharp = dual_complex(e);
  for (int r = lo; r <= hi; ++r) {
    CokernelInvariants lhs = homology(sharp, -r).invariants;
    CokernelInvariants rhs = ext(homology(e, r - d).module, d).invariants();
    if (!(lhs == rhs)) fail(t, "invariant factors differ at r = " + std::to_string(r));
    HomologyDuality h = homology_duality(e, r);
    if (!is_iso(h.eta)) fail(t, "eta is not an isomorphism at r = " + std::to_string(r));
    HomologyDuality h2 = homology_duality(e2, r);
    ModuleMorphism left = compose(h.eta, homology_map(complex_dual_map(g), d - r));
    ModuleMorphism right = compose(dual_morphism(homology_map(g, r - d)), h2.eta);
    if (!morphism_equal(left, right)) fail(t, "naturality square fails at r = " + std::to_string(r));
    ++degrees;
    ++squares;
  }
  t.witness = {{"degrees", degrees}, {"naturality_squares", squares}};
}

// ------------------------------------------------------------ ext-boundary

json gen_ext(const Ring& ring, Rng& rng, const SizeCaps& caps) {
  SizeCaps c = suite_caps(caps, 6);
  Complex e = random_complex(ring, rng, c, static_cast<int>(rng.range(-2, 1)), draw_width(rng, c, 8), true);
  return {{"E", to_json(e)}};
}

void check_ext(const json& inst, TrialRecord& t) {
  Complex e = complex_from_json(inst.at("E"));
  const int d = e.ring().dim();
  std::size_t checks = 0;
  if (!e.is_zero())
    for (int r = e.lo() - 1; r <= e.hi() + 1; ++r)
      for (int i = 1; i <= d + 2; ++i) {
        ExtBoundaryRecord rec = ext_boundary_check(e, r, i);
        if (!rec.agree)
          fail(t, "Ext^" + std::to_string(i) + "(E_r/B_r) differs at r = " + std::to_string(r) + ": " +
                      rec.lhs.to_string() + " vs " + rec.rhs.to_string());
        ++checks;
      }
  t.witness = {{"checks", checks}};
}

// ------------------------------------------------------ zeta-functoriality

json gen_zeta(const Ring& ring, Rng& rng, const SizeCaps& caps) {
  SizeCaps c = suite_caps(caps, 4);
  ModulePresentation m0 = random_module(ring, rng, c, rng.chance(1, 2));
  ModulePresentation m1 = random_module(ring, rng, c, rng.chance(1, 2));
  ModulePresentation m2 = random_module(ring, rng, c, rng.chance(1, 2));
  ModuleMorphism g0 = random_morphism(m0, m1, rng), g1 = random_morphism(m1, m2, rng);
  Resolution q = zeta_object(m1);
  Matrix shift = random_matrix(ring, q.complex.rank(1), q.section.cols(), rng, 5);
  return {{"g0", to_json(g0)}, {"g1", to_json(g1)}, {"section_shift", to_json(shift)}};
}

void check_zeta(const json& inst, TrialRecord& t) {
  ModuleMorphism g0 = morphism_from_json(inst.at("g0"));
  ModuleMorphism g1 = morphism_from_json(inst.at("g1"));
  const Ring& R = g0.source.ring;
  Resolution p0 = zeta_object(g0.source), p1 = zeta_object(g1.source), p2 = zeta_object(g1.target);
  // independent lift through another section of the target augmentation
  Resolution p1b = p1;
  if (p1.complex.rank(1) > 0) p1b.section = p1.section + p1.complex.d(1) * matrix_from_json(R, inst.at("section_shift"));
  ChainMap a = lift_morphism(g0, p0, p1), b = lift_morphism(g0, p0, p1b);
  if (!lifts(a, g0, p0, p1) || !lifts(b, g0, p0, p1)) fail(t, "lift does not cover g0");
  if (!homotopic(a, b)) fail(t, "independent lifts are not homotopic");
  ChainMap c = lift_morphism(g1, p1, p2);
  ChainMap composite = lift_morphism(compose(g1, g0), p0, p2);
  if (!homotopic(composite, compose(c, a))) fail(t, "lift of g1 g0 is not homotopic to the composite");
  // two resolutions of the same module: the pullback maps to both by quasi-isomorphisms
  Resolution other = resolve_presentation(g0.source);
  ComplexPullback pb = pullback_complexes(p0, other, ModuleMorphism::identity(g0.source));
  if (!is_quasi_iso(pb.t) || !is_quasi_iso(pb.G)) fail(t, "pullback legs are not quasi-isomorphisms");
  t.witness = {{"lift_ranks", p0.complex.total_rank()}, {"pullback_rank", pb.object.total_rank()}};
}

// ---------------------------------------------------------------- witt-map

json gen_witt_map(const Ring& ring, Rng& rng, const SizeCaps& caps) {
  SizeCaps c = suite_caps(caps, 3);
  ModulePresentation m = random_module(ring, rng, c, true);
  return {{"module", to_json(m)}, {"epsilon", rng.chance(1, 2) ? 1 : -1}};
}

void check_witt_map(const json& inst, TrialRecord& t) {
  ModulePresentation m = module_from_json(inst.at("module"));
  HyperbolicForm h = hyperbolic(m, inst.at("epsilon").get<int>());
  if (!is_valid_form(h.form)) fail(t, "hyperbolic module form is invalid");
  ComplexForm z = zeta_form(h.form);
  if (!z.symmetry || !is_valid_form(z)) fail(t, "zeta form is not symmetric up to homotopy");
  ComplexLagrangian w = build_lagrangian_lift(h.form, h.lagrangian);
  if (!validate_complex_lagrangian(z, w)) fail(t, "lagrangian triangle does not validate");
  t.witness = {{"sign", w.sign}, {"cone_rank", w.cone.object.total_rank()}};
}

// ---------------------------------------------------------------- devissage

json gen_devissage(const Ring& ring, Rng& rng, const SizeCaps& caps) {
  int eps = rng.chance(1, 3) ? -1 : 1;
  GeneratedComplexForm g = random_complex_form(ring, rng, caps, eps);
  return {{"seed", to_json(g.seed)},
          {"form", to_json(g.form)},
          {"hyperbolic_shifts", g.hyperbolic_shifts},
          {"padding", g.padding}};
}

// Per closed point: module invariants, Jordan constituents and the residue Witt class.
json local_profile(const ModuleForm& f) {
  json out = json::array();
  if (f.module.ring.kind() != RingKind::IntegersTwoInverted) {
    IsometryInvariants inv = isometry_invariants(f);
    out.push_back({{"module", to_json(inv.module)}, {"jordan", to_json(inv.jordan)}, {"witt", to_json(witt_class(f))}});
    return out;
  }
  for (const auto& part : decompose_form(f))
    out.push_back({{"prime", part.prime},
                   {"module", to_json(part.local.module.invariants())},
                   {"jordan", to_json(jordan_invariants(part.local))},
                   {"witt", to_json(witt_class(part.local))}});
  return out;
}

void check_devissage(const json& inst, TrialRecord& t) {
  ModuleForm seed = module_form_from_json(inst.at("seed"));
  ComplexForm f = complex_form_from_json(inst.at("form"));
  if (!is_valid_form(f)) fail(t, "generated complex form is invalid");
  try {
    Reduction r = reduce_support(f);
    if (!validate_reduction(r)) fail(t, "ledger does not validate");
    if (!isometric(r.extracted, seed)) fail(t, "extracted form is not isometric to the seed");
    if (local_profile(r.extracted) != local_profile(seed)) fail(t, "local invariants differ");
    std::size_t steps = 0, truncations = 0;
    for (const auto& e : r.ledger) {
      steps += e.kind == LedgerEntry::Kind::Sublagrangian;
      truncations += e.kind == LedgerEntry::Kind::Truncate;
    }
    t.witness = {{"ledger", r.ledger.size()}, {"sublagrangian_steps", steps}, {"truncations", truncations}};
  } catch (const ReductionStepFailed& e) {
    fail(t, e.what());
    t.witness = {{"reduction_step_failed", true},
                 {"n", e.n},
                 {"attempts", e.attempts},
                 {"unknowns", e.unknowns},
                 {"equations", e.equations}};
  }
}

// ------------------------------------------------------------ decomposition

json gen_decomposition(const Ring& ring, Rng& rng, const SizeCaps& caps) {
  SizeCaps c = suite_caps(caps, 4);
  return {{"form", to_json(random_module_form(ring, rng, c, 1))}};
}

void check_decomposition_trial(const json& inst, TrialRecord& t) {
  ModuleForm f = module_form_from_json(inst.at("form"));
  auto parts = decompose_form(f);
  DecompositionCheck c = check_decomposition(f, parts);
  if (!c.orthogonal) fail(t, "parts are not orthogonal");
  if (!c.spans) fail(t, "parts do not span");
  if (!c.duality_commutes) fail(t, "duality does not commute with localization");
  if (!c.invariants_match) fail(t, "invariant multisets differ");
  json primes = json::array();
  for (const auto& p : parts) primes.push_back(p.prime);
  t.witness = {{"primes", primes}};
}

// ------------------------------------------------------------------ witt-d0

std::vector<std::vector<long>> diagonal_forms(long p, std::size_t max_dim) {
  long ns = 2;
  auto is_square = [&](long a) {
    for (long x = 1; x < p; ++x)
      if (x * x % p == a % p) return true;
    return false;
  };
  while (is_square(ns)) ++ns;
  std::vector<std::vector<long>> out{{}};
  for (std::size_t k = 0; k < out.size(); ++k)
    if (out[k].size() < max_dim)
      for (long c : {1L, ns}) {
        auto g = out[k];
        g.push_back(c);
        out.push_back(g);
      }
  return out;
}

void check_witt_d0(const json& inst, TrialRecord& t) {
  long p = inst.at("p").get<long>();
  auto a = inst.at("a").get<std::vector<long>>(), b = inst.at("b").get<std::vector<long>>();
  Ring F = Ring::prime_field(p);
  auto inv = [&](const std::vector<long>& d) {
    std::vector<Scalar> s;
    for (long v : d) s.push_back(F.from_int(v));
    return witt_invariants_d0(Matrix::diagonal(F, s));
  };
  bool by_invariants = inv(a) == inv(b);
  bool by_oracle = brute_witt_equivalent(p, a, b);
  if (by_invariants != by_oracle) fail(t, "classification disagrees with the isotropy oracle");
  t.witness = {{"equivalent", by_oracle}};
}

// --------------------------------------------------------------- membership

json gen_membership(const Ring& ring, Rng& rng, const SizeCaps& caps) {
  SizeCaps c = suite_caps(caps, 6);
  ModuleComplex m =
      random_module_complex(ring, rng, c, static_cast<int>(rng.range(-1, 1)), draw_width(rng, c, 8), true);
  return {{"complex", to_json(m)}};
}

void check_membership(const json& inst, TrialRecord& t) {
  ModuleComplex c = module_complex_from_json(inst.at("complex"));
  std::size_t certified = 0;
  for (int i = c.lo; i <= c.hi(); ++i) {
    ModuleMorphism in = c.map(i + 1), out = c.map(i);
    const std::pair<const char*, ModulePresentation> pieces[] = {
        {"B", subquotient(in, SubquotientKind::Image).object},
        {"Z", subquotient(out, SubquotientKind::Kernel).object},
        {"E/B", subquotient(in, SubquotientKind::Cokernel).object}};
    for (const auto& [name, m] : pieces) {
      std::string why;
      if (!in_A(m, &why)) fail(t, std::string(name) + "_" + std::to_string(i) + " is not in A: " + why);
      ++certified;
    }
  }
  t.witness = {{"certified", certified}};
}

const std::map<std::string, Suite>& registry() {
  static const std::map<std::string, Suite> r{
      {"duality", {"homology of the dual complex is the dual of homology, naturally", gen_duality, check_duality}},
      {"ext-boundary", {"Ext of E_r/B_r is Ext^d of the shifted homology", gen_ext, check_ext}},
      {"zeta-functoriality",
       {"lifts to resolutions are unique up to homotopy and compose", gen_zeta, check_zeta}},
      {"witt-map",
       {"zeta of a hyperbolic form is symmetric and carries a lagrangian triangle", gen_witt_map, check_witt_map}},
      {"devissage",
       {"support reduction extracts a module form isometric to the seed", gen_devissage, check_devissage}},
      {"decomposition",
       {"finite length forms split orthogonally over the closed points", gen_decomposition,
        check_decomposition_trial}},
      {"witt-d0", {"rank parity and signed discriminant classify Witt classes over F_p", nullptr, check_witt_d0}},
      {"membership", {"boundaries, cycles and E/B of complexes in A lie in A", gen_membership, check_membership}},
  };
  return r;
}

const Suite& lookup(const std::string& name) {
  auto it = registry().find(name);
  if (it == registry().end()) throw Error(ErrorKind::UnknownKind, "unknown suite '" + name + "'");
  return it->second;
}

void require_ring_for(const std::string& suite, const Ring& ring) {
  if (suite == "decomposition" && ring.kind() != RingKind::IntegersTwoInverted)
    throw Error(ErrorKind::UnsupportedRing, "the decomposition suite runs over z-half");
  if (suite == "witt-d0" && ring.kind() != RingKind::PrimeField)
    throw Error(ErrorKind::UnsupportedRing, "the witt-d0 suite runs over fp:<p>");
}

json caps_json(const SizeCaps& c) {
  return {{"max_rank", c.max_rank}, {"max_width", c.max_width}, {"max_entry", c.max_entry}};
}

SizeCaps caps_from(const json& j) {
  SizeCaps c;
  c.max_rank = j.value("max_rank", c.max_rank);
  c.max_width = j.value("max_width", c.max_width);
  c.max_entry = j.value("max_entry", c.max_entry);
  return c;
}

TrialRecord checked(const std::string& suite, json instance, TrialRecord t) {
  t.pass = true;
  t.digest = digest(instance);
  try {
    lookup(suite).check(instance, t);
  } catch (const std::exception& e) {
    fail(t, e.what());
  }
  if (!t.pass) t.payload["instance"] = std::move(instance);
  return t;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [k, v] : registry()) n.push_back(k);
    return n;
  }();
  return names;
}

bool is_suite(const std::string& name) { return registry().count(name) > 0; }

std::string suite_property(const std::string& name) { return lookup(name).property; }

std::uint64_t trial_seed(std::uint64_t seed, std::size_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

TrialRecord run_trial(const std::string& suite, const Ring& ring, const SizeCaps& caps, std::uint64_t seed) {
  const Suite& s = lookup(suite);
  TrialRecord t;
  t.seed = seed;
  json base{{"suite", suite}, {"ring", ring.descriptor()}, {"seed", seed}, {"caps", caps_json(caps)}};
  json instance;
  try {
    Rng rng(seed);
    instance = s.generate(ring, rng, caps);
  } catch (const std::exception& e) {
    t.pass = false;
    t.detail = std::string("generation failed: ") + e.what();
    t.payload = base;
    return t;
  }
  t = checked(suite, std::move(instance), t);
  if (!t.pass) t.payload.update(base);
  return t;
}

TrialRecord run_trial_on_instance(const std::string& suite, const json& instance) {
  TrialRecord t = checked(suite, instance, TrialRecord{});
  if (!t.pass) t.payload["suite"] = suite;
  return t;
}

TrialRecord replay(const json& payload) {
  std::string suite = payload.at("suite").get<std::string>();
  if (payload.contains("instance")) {
    TrialRecord t = run_trial_on_instance(suite, payload.at("instance"));
    t.seed = payload.value("seed", std::uint64_t{0});
    if (!t.pass) t.payload.update(payload);
    return t;
  }
  return run_trial(suite, Ring::parse(payload.at("ring").get<std::string>()), caps_from(payload.value("caps", json::object())),
                   payload.at("seed").get<std::uint64_t>());
}

Report run_suite(const SuiteConfig& config) {
  Report rep;
  rep.config = config;
  rep.property = suite_property(config.suite);
  Ring ring = Ring::parse(config.ring);
  require_ring_for(config.suite, ring);
  std::vector<std::function<TrialRecord()>> jobs;
  if (config.suite == "witt-d0") {
    // exhaustive: every pair of diagonal forms of dimension <= 4 over square class representatives
    long p = ring.prime();
    auto forms = diagonal_forms(p, 4);
    for (const auto& a : forms)
      for (const auto& b : forms)
        jobs.push_back([=] {
          json inst{{"p", p}, {"a", a}, {"b", b}};
          TrialRecord t = run_trial_on_instance("witt-d0", inst);
          if (!t.pass) t.payload["instance"] = inst;
          return t;
        });
  } else {
    for (std::size_t i = 0; i < config.trials; ++i) {
      std::uint64_t s = trial_seed(config.seed, i);
      jobs.push_back([=, &config] { return run_trial(config.suite, ring, config.caps, s); });
    }
  }
  rep.trials.resize(jobs.size());
  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(jobs.size(), 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      rep.trials[i] = jobs[i]();
      rep.trials[i].index = i;
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& t : rep.trials) {
    (t.pass ? rep.passed : rep.failed)++;
    if (t.witness.is_object() && t.witness.value("reduction_step_failed", false)) rep.reduction_failures++;
  }
  return rep;
}

json report_to_json(const Report& r) {
  json trials = json::array();
  for (const auto& t : r.trials) {
    json j{{"index", t.index}, {"seed", t.seed}, {"digest", t.digest}, {"pass", t.pass}};
    if (!t.detail.empty()) j["detail"] = t.detail;
    if (!t.witness.is_null()) j["witness"] = t.witness;
    if (!t.pass) j["payload"] = t.payload;
    trials.push_back(j);
  }
  return {{"tool", "devissage"},
          {"version", "1.0.0"},
          {"config",
           {{"ring", r.config.ring},
            {"suite", r.config.suite},
            {"trials", r.config.trials},
            {"seed", r.config.seed},
            {"caps", caps_json(r.config.caps)}}},
          {"property", r.property},
          {"counts",
           {{"total", r.trials.size()},
            {"passed", r.passed},
            {"failed", r.failed},
            {"reduction_step_failed", r.reduction_failures}}},
          {"trials", trials}};
}

std::string summary_line(const Report& r) {
  std::ostringstream os;
  os << r.config.suite << " [" << r.config.ring << "] " << r.passed << "/" << r.trials.size() << " passed";
  if (r.failed) os << ", " << r.failed << " failed";
  if (r.config.suite == "devissage") os << ", ReductionStepFailed " << r.reduction_failures;
  return os.str();
}

const std::vector<std::string>& instance_kinds() {
  static const std::vector<std::string> k{"module",      "morphism",     "complex-in-A",
                                          "module-form", "complex-form", "neutral-form"};
  return k;
}

json generate_instance(const std::string& kind, const Ring& ring, const SizeCaps& caps, std::uint64_t seed) {
  Rng rng(seed);
  json out{{"kind", kind}, {"ring", ring.descriptor()}, {"seed", seed}};
  if (kind == "module") {
    out["module"] = to_json(random_module(ring, rng, caps, true));
  } else if (kind == "morphism") {
    ModulePresentation a = random_module(ring, rng, caps, true), b = random_module(ring, rng, caps, true);
    out["morphism"] = to_json(random_morphism(a, b, rng));
  } else if (kind == "complex-in-A") {
    out["complex"] = to_json(random_complex(ring, rng, caps, 0, draw_width(rng, caps, caps.max_width), true));
  } else if (kind == "module-form") {
    out["form"] = to_json(random_module_form(ring, rng, caps, 1));
  } else if (kind == "complex-form") {
    GeneratedComplexForm g = random_complex_form(ring, rng, caps, 1);
    out["form"] = to_json(g.form);
    out["seed_form"] = to_json(g.seed);
    out["hyperbolic_shifts"] = g.hyperbolic_shifts;
  } else if (kind == "neutral-form") {
    NeutralComplexForm n = random_neutral_complex_form(ring, rng, caps, 1);
    out["form"] = to_json(n.form);
    out["lagrangian"] = {{"complexes", {{"L", to_json(n.lagrangian.sub)}}},
                         {"alpha", to_json(n.lagrangian.alpha, "L", "E")},
                         {"null_homotopy", to_json(n.lagrangian.null_homotopy)},
                         {"sign", n.lagrangian.sign}};
  } else {
    throw Error(ErrorKind::UnknownKind, "unknown instance kind '" + kind + "'");
  }
  return out;
}

}  // namespace devissage
