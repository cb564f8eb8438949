#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "devissage/generators.hpp"
#include "devissage/serialize.hpp"

namespace devissage {

struct SuiteConfig {
  std::string ring = "z-half";
  std::string suite;
  std::size_t trials = 20;
  std::uint64_t seed = 1;
  SizeCaps caps;
  std::string output;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct TrialRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::string digest;
  bool pass = false;
  std::string detail;
  json witness;  // small summary of what was checked
  json payload;  // replayable instance, present on failure
};

struct Report {
  SuiteConfig config;
  std::string property;
  std::vector<TrialRecord> trials;
  std::size_t passed = 0, failed = 0;
  std::size_t reduction_failures = 0;
  bool all_passed() const { return failed == 0; }
};

const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);
/// One-line statement of the property a suite checks.
std::string suite_property(const std::string& name);

/// Seed of trial i: a splitmix64 step of (seed, i); independent of thread scheduling.
std::uint64_t trial_seed(std::uint64_t seed, std::size_t index);

Report run_suite(const SuiteConfig& config);
/// Regenerates the instance from (suite, ring, caps, seed) and checks it.
TrialRecord run_trial(const std::string& suite, const Ring& ring, const SizeCaps& caps, std::uint64_t seed);
/// Checks a serialized instance (payload "instance" field) directly.
TrialRecord run_trial_on_instance(const std::string& suite, const json& instance);
/// Reruns a failure payload (as stored in a report).
TrialRecord replay(const json& payload);

json report_to_json(const Report& r);
std::string summary_line(const Report& r);

/// Instance generators behind `gen`; throws UnknownKind.
json generate_instance(const std::string& kind, const Ring& ring, const SizeCaps& caps, std::uint64_t seed);
const std::vector<std::string>& instance_kinds();

}  // namespace devissage
