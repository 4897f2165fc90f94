#pragma once

#include <cstdint>
#include <string>

#include "lasnap/checkers.hpp"
#include "lasnap/sim.hpp"

namespace lasnap {

struct FuzzRun {
  std::uint64_t seed = 0;
  bool fair = true;
  RunResult result;
};

/// Raw agreement run: n <= max_n, random proposals, random crashes, eager or
/// deferred guards, and either a fair or a starving schedule.
FuzzRun fuzz_la_run(std::uint64_t seed, std::size_t max_n = 5);

/// Snapshot-object run: n <= max_n, at most max_ops update, snapshot and
/// multi-writer update calls, optionally one crash.
FuzzRun fuzz_aso_run(std::uint64_t seed, std::size_t max_n = 4, std::size_t max_ops = 6);

/// Random lattice value for the given shape.
AsoVector random_vector(std::uint64_t seed, const LatticeConfig& cfg);

}  // namespace lasnap
