#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pffw {

struct VerifyResult {
  std::string name;
  bool pass = false;
  std::string detail;  // measurement summary, or the error that failed it
};

// Self-contained oracle/invariant property battery backing the `verify`
// subcommand. Each check is independent; exceptions inside a check fail
// that check only. Runs in seconds at desk scale.
std::vector<VerifyResult> run_verify(std::uint64_t seed);

bool all_passed(const std::vector<VerifyResult>& results);

}  // namespace pffw
