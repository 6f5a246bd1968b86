#pragma once

// Self-checks of the library's identities, grouped into suites. Every check
// draws its random data from its own seeded stream, so a report depends only
// on the options and never on thread scheduling.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "postlie/io.hpp"

namespace postlie {

struct CheckResult {
  std::string suite;
  std::string name;
  /// Exact checks report the number of nonzero terms left in the difference.
  bool exact = false;
  double residual = 0.0;
  double threshold = 0.0;
  /// Slope checks compare |residual - target| against threshold.
  std::optional<double> target;
  bool passed = false;
};

struct VerifyOptions {
  std::uint64_t seed = 42;
  std::size_t order = 6;
  std::size_t degree = 6;
  std::string algebra = "sl2";
  /// Overrides the threshold of every numeric residual check.
  std::optional<double> tol;
  /// 0 reads POSTLIE_THREADS, falling back to the hardware concurrency.
  unsigned threads = 0;
};

struct VerifyReport {
  std::string suite;
  VerifyOptions options;
  std::vector<CheckResult> checks;

  bool passed() const;
  std::size_t failures() const;
};

/// postlie, chi, magnus, hopf, star, flow, all
const std::vector<std::string>& verify_suites();
VerifyReport run_verify(const std::string& suite, const VerifyOptions& options = {});

unsigned thread_cap();

Json to_json(const VerifyReport& report);
/// One "PASS|FAIL suite: name ..." line per check.
std::string to_text(const VerifyReport& report);

}  // namespace postlie
