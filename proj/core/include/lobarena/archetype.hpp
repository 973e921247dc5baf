#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace lobarena {

/// Classification target attached to every logged order. Noise and value
/// traders are background; TWAP/VWAP executors are market takers;
/// momentum/mean-reversion traders are directional.
enum class ArchetypeLabel : std::uint8_t {
  MarketMaker = 0,
  MarketTaker = 1,
  DirectionalTrader = 2,
  Background = 3,
};

constexpr int kNumArchetypes = 4;

std::string_view to_string(ArchetypeLabel a);
std::optional<ArchetypeLabel> archetype_from_string(std::string_view s);

}  // namespace lobarena
