#pragma once

#include <cstdint>
#include <string>

#include "lobarena/book/types.hpp"

namespace lobarena::testing {

struct ReplayParams {
  int max_ops = 50;
  Tick price_lo = 100;
  Tick price_hi = 104;  // at most 5 distinct ticks
  Qty max_qty = 20;
  int agents = 4;
};

// Replays one seeded random operation sequence against the production book
// and the brute-force matcher, comparing every result and the final book
// state. Returns an empty string on agreement, else a description of the
// first divergence.
std::string replay_sequence(std::uint64_t seed, const ReplayParams& params);

}  // namespace lobarena::testing
