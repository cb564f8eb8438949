#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "devissage/instances.hpp"
#include "devissage/suites.hpp"

using namespace devissage;

namespace {

constexpr int kPass = 0, kFail = 1, kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void emit(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << j.dump(2) << "\n";
}

// gen output wraps the object under "form"; bare serializations are accepted too.
json unwrap_form(const json& j) { return j.contains("form") && j.at("form").is_object() ? j.at("form") : j; }

SizeCaps caps_of(std::size_t rank, std::size_t width) {
  SizeCaps c;
  c.max_rank = rank;
  c.max_width = width;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact homological algebra over small rings, with randomized verification of Witt dévissage"};
  app.require_subcommand(1);

  std::string ring_desc = "z-half", suite, json_path, kind, input, replay_path, instance_path;
  std::size_t trials = 20, max_rank = 6, max_width = 8;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  int epsilon = 1;

  auto caps_flags = [&](CLI::App* c) {
    c->add_option("--ring", ring_desc, "q, fp:<p>, z-half or zloc:<p>")->capture_default_str();
    c->add_option("--seed", seed, "64-bit seed")->capture_default_str();
    c->add_option("--max-rank", max_rank, "largest free rank drawn")->capture_default_str()->check(CLI::PositiveNumber);
    c->add_option("--max-width", max_width, "largest support width drawn")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    c->add_option("--json", json_path, "write the JSON result here ('-' for standard output)");
  };

  CLI::App* gen = app.add_subcommand("gen", "generate a random instance");
  caps_flags(gen);
  gen->add_option("--kind", kind, "module, morphism, complex-in-A, module-form, complex-form, neutral-form")
      ->required();

  CLI::App* verify = app.add_subcommand("verify", "run a property suite");
  caps_flags(verify);
  verify->add_option("--suite", suite, "suite name");
  verify->add_option("--trials", trials, "number of trials")->capture_default_str()->check(CLI::PositiveNumber);
  verify->add_option("--threads", threads, "worker threads (0: all cores)");
  verify->add_option("--replay", replay_path, "rerun a failure payload");
  verify->add_option("--instance", instance_path, "check one serialized instance against --suite");

  CLI::App* reduce = app.add_subcommand("reduce", "reduce a complex form to a module form");
  caps_flags(reduce);
  reduce->add_option("--input", input, "complex form JSON (default: generated from --seed)");
  reduce->add_option("--epsilon", epsilon, "symmetry sign of a generated form")->check(CLI::IsMember({1, -1}));

  CLI::App* witt = app.add_subcommand("witt-class", "isometry and Witt invariants of a module form");
  caps_flags(witt);
  witt->add_option("--input", input, "module form JSON (default: generated from --seed)");

  CLI::App* decompose = app.add_subcommand("decompose", "split a form over Z[1/2] into its p-parts");
  caps_flags(decompose);
  decompose->add_option("--input", input, "module form JSON (default: generated from --seed)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }

  try {
    SizeCaps caps = caps_of(max_rank, max_width);

    if (gen->parsed()) {
      emit(generate_instance(kind, Ring::parse(ring_desc), caps, seed), json_path);
      return kPass;
    }

    if (verify->parsed()) {
      if (!replay_path.empty()) {
        json payload = read_json(replay_path);
        if (payload.contains("payload")) payload = payload.at("payload");
        TrialRecord t = replay(payload);
        std::cout << (t.pass ? "PASS" : "FAIL") << " digest " << t.digest;
        if (!t.detail.empty()) std::cout << ": " << t.detail;
        std::cout << "\n";
        return t.pass ? kPass : kFail;
      }
      if (!is_suite(suite)) {
        std::ostringstream names;
        for (const auto& n : suite_names()) names << " " << n;
        throw UsageError("--suite must be one of:" + names.str());
      }
      if (!instance_path.empty()) {
        json inst = read_json(instance_path);
        if (inst.contains("instance")) inst = inst.at("instance");
        TrialRecord t = run_trial_on_instance(suite, inst);
        std::cout << (t.pass ? "PASS" : "FAIL") << " " << suite << " digest " << t.digest;
        if (!t.detail.empty()) std::cout << ": " << t.detail;
        std::cout << "\n";
        if (!json_path.empty()) emit({{"pass", t.pass}, {"detail", t.detail}, {"payload", t.payload}}, json_path);
        return t.pass ? kPass : kFail;
      }
      SuiteConfig cfg;
      cfg.ring = ring_desc;
      cfg.suite = suite;
      cfg.trials = trials;
      cfg.seed = seed;
      cfg.caps = caps;
      cfg.output = json_path;
      cfg.threads = threads;
      Report rep = run_suite(cfg);
      if (!json_path.empty()) emit(report_to_json(rep), json_path);
      std::cout << summary_line(rep) << "\n";
      for (const auto& t : rep.trials)
        if (!t.pass) std::cout << "  trial " << t.index << " seed " << t.seed << ": " << t.detail << "\n";
      return rep.all_passed() ? kPass : kFail;
    }

    Ring ring = Ring::parse(ring_desc);

    if (reduce->parsed()) {
      ComplexForm f;
      std::optional<ModuleForm> seed_form;
      if (!input.empty()) {
        f = complex_form_from_json(unwrap_form(read_json(input)));
      } else {
        Rng rng(seed);
        GeneratedComplexForm g = random_complex_form(ring, rng, caps, epsilon);
        f = g.form;
        seed_form = g.seed;
      }
      Reduction r = reduce_support(f);
      bool ok = validate_reduction(r);
      json out{{"ledger", ledger_to_json(r)}, {"extracted", to_json(r.extracted)}, {"valid", ok}};
      if (seed_form) {
        bool iso = isometric(r.extracted, *seed_form);
        out["seed_form"] = to_json(*seed_form);
        out["isometric_to_seed"] = iso;
        ok = ok && iso;
      }
      if (!json_path.empty()) emit(out, json_path);
      std::cout << "reduce: " << r.ledger.size() << " ledger entries, extracted module "
                << r.extracted.module.invariants().to_string() << ", " << (ok ? "valid" : "INVALID") << "\n";
      return ok ? kPass : kFail;
    }

    ModuleForm f;
    if (!input.empty()) {
      f = module_form_from_json(unwrap_form(read_json(input)));
    } else {
      Rng rng(seed);
      f = random_module_form(ring, rng, caps, 1);
    }

    if (witt->parsed()) {
      IsometryInvariants inv = isometry_invariants(f);
      WittClass w = witt_class(f);
      json out{{"form", to_json(f)},
               {"module", to_json(inv.module)},
               {"jordan", to_json(inv.jordan)},
               {"witt_class", to_json(w)},
               {"neutral", w.is_zero()}};
      emit(out, json_path.empty() ? "-" : json_path);
      return kPass;
    }

    if (decompose->parsed()) {
      if (f.module.ring.kind() != RingKind::IntegersTwoInverted)
        throw UsageError("decompose works over z-half");
      auto parts = decompose_form(f);
      DecompositionCheck c = check_decomposition(f, parts);
      json ps = json::array();
      for (const auto& p : parts)
        ps.push_back({{"prime", p.prime},
                      {"local", to_json(p.local)},
                      {"global", to_json(p.global)},
                      {"jordan", to_json(jordan_invariants(p.local))}});
      json out{{"form", to_json(f)},
               {"parts", ps},
               {"orthogonal", c.orthogonal},
               {"spans", c.spans},
               {"duality_commutes", c.duality_commutes},
               {"invariants_match", c.invariants_match}};
      emit(out, json_path.empty() ? "-" : json_path);
      return c.ok() ? kPass : kFail;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    bool usage = e.kind() == ErrorKind::UnsupportedRing || e.kind() == ErrorKind::UnknownKind ||
                 e.kind() == ErrorKind::ParseError;
    return usage ? kUsage : kFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
