#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace qhd {

struct VerifyOptions {
  std::size_t trials = 1000;
  std::uint64_t seed = 42;
  double tol = 1e-12;
};

struct VerifyOutcome {
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::vector<std::string> lines;  // one per check group, "PASS ..." or "FAIL ..."

  bool passed() const { return failures == 0; }
};

/// Runs the trace-versus-closed-form oracle over `trials` seeded random
/// (state, game, p, q) draws, requiring agreement within tol times the payoff
/// scale, followed by the built-in golden cases of the Hawk-Dove example.
VerifyOutcome run_verification(const VerifyOptions& options);

}  // namespace qhd
