#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace socon {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  int samples = 1000;
  std::uint64_t seed = 7;
};

/// Property batteries of the hull, spectral and protocol layers. Failures are
/// reported in the result list, never thrown.
std::vector<CheckResult> verify_suite(const VerifyOptions& options = {});

/// One JSON object per line: {"check", "pass", "detail", "seconds"}.
std::string verify_report(const std::vector<CheckResult>& results);

}  // namespace socon
