#pragma once

#include <cstdint>
#include <string>

namespace counted::runner {

struct FuzzOptions {
  std::uint64_t ops = 100'000;   // including the initial mints
  std::uint64_t tokens = 1000;
  std::uint64_t max_limit = 20;  // finite limits drawn from [1, max_limit]
  std::uint64_t seed = 42;
};

struct FuzzReport {
  std::uint64_t ops = 0;
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
  std::uint64_t transfers = 0;
  std::uint64_t caps_hit = 0;
  std::uint64_t events = 0;
  std::uint64_t safety_violations = 0;    // k > L with L > 0, or k decreased
  std::uint64_t liveness_violations = 0;  // transfer admitted iff the predicate holds
  std::uint64_t model_mismatches = 0;     // outcome or state differs from the shadow model
  bool replay_matches = false;
  bool round_trip_matches = false;

  bool ok() const noexcept {
    return safety_violations == 0 && liveness_violations == 0 && model_mismatches == 0 &&
           replay_matches && round_trip_matches;
  }
};

// Drives a live ledger with random operations (every policy, mixed bounded
// and unbounded tokens) against an independent shadow model.
FuzzReport run_fuzz(const FuzzOptions& options);

std::string to_csv(const FuzzReport& report);

}  // namespace counted::runner
