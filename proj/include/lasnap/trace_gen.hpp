#pragma once

#include <cstdint>
#include <optional>

#include "lasnap/trace.hpp"

namespace lasnap {

struct TraceGenOptions {
  std::size_t max_n = 5;
  std::size_t max_events = 40;
  double multi_node = 0.1;  // chance that an event has two participants
};

/// A random execution of "M" messages over FIFO channels. Deterministic in the
/// seed; may contain holes.
ExecutionTrace random_trace(std::uint64_t seed, const TraceGenOptions& opts = {});

/// Like random_trace, retried with derived seeds until the trace is covered.
/// nullopt if no covered trace turned up within `attempts`.
std::optional<ExecutionTrace> random_covered_trace(std::uint64_t seed,
                                                   const TraceGenOptions& opts = {},
                                                   std::size_t attempts = 200);

}  // namespace lasnap
