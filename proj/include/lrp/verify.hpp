#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lrp {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<Check> checks;
  double seconds = 0;
  bool pass() const;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  int threads = 1;
};

// kpr, nash-williams, cutoff-energy, covariance, conditions, potential
const std::vector<std::string>& verify_suite_names();

// Runs one suite at its pinned parameters. Unknown names are an invalid-argument error.
SuiteReport run_verify_suite(const std::string& suite, const VerifyOptions& options = {});

}  // namespace lrp
