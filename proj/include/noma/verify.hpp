#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace noma {

enum class VerifyLevel { fast, full };

struct CheckResult {
  std::string id;       // e.g. "criterion-3"
  std::string name;     // short label
  bool pass = false;
  std::string details;  // measured vs tolerance
};

/// Runs the verification suite: `fast` covers the invariant grid plus the
/// formula reconciliation at a handful of scenarios; `full` runs every
/// acceptance criterion at its stated tolerance. One line per check is
/// written to `out` as the suite progresses.
std::vector<CheckResult> run_verify(VerifyLevel level, std::ostream& out,
                                    int threads = 0);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace noma
