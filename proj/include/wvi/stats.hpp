#pragma once

#include <atomic>
#include <cstdint>

namespace wvi::stats {

// Process-wide instrumentation counters. Tests use them to verify that
// one-off work (scene assembly) is not repeated per window.
struct Counters {
  std::atomic<uint64_t> scene_builds{0};
  std::atomic<uint64_t> renders{0};
  std::atomic<uint64_t> raycasts{0};
  std::atomic<uint64_t> wvi_counts{0};
};

Counters& counters();

void reset();

}  // namespace wvi::stats
