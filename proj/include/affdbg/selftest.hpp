#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "affdbg/affine.hpp"

namespace affdbg {

struct SuiteResult {
  std::string name;
  long long checks = 0;
  long long failures = 0;
  std::vector<std::string> samples;  // first few failure descriptions
  double seconds = 0;                // not part of the json output

  bool passed() const { return failures == 0 && checks > 0; }
  nlohmann::json to_json() const;
};

struct SelftestOptions {
  unsigned long long seed = 1;
  std::vector<std::string> only;  // empty = all suites
};

std::vector<std::string> selftest_suite_names();
// throws PreconditionError on an unknown suite name
std::vector<SuiteResult> run_selftest(const SelftestOptions& opt,
                                      const std::function<void(const SuiteResult&)>& progress = {});

// product of up to max_gens random simple affine reflections times a random
// length zero element
AffineElement random_element(const AffineWeyl& aw, std::mt19937_64& rng, int max_gens);

}  // namespace affdbg
