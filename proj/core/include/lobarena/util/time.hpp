#pragma once

#include <cstdint>
#include <string>

namespace lobarena {

/// Simulation clock: nanoseconds since local midnight of the simulated day.
using SimTime = std::uint64_t;

/// Identifies a registered agent within one simulation run.
using AgentId = std::uint32_t;

constexpr SimTime kNsPerMicro = 1'000ull;
constexpr SimTime kNsPerMilli = 1'000'000ull;
constexpr SimTime kNsPerSec = 1'000'000'000ull;
constexpr SimTime kNsPerMin = 60ull * kNsPerSec;
constexpr SimTime kNsPerHour = 60ull * kNsPerMin;
constexpr SimTime kNsPerDay = 24ull * kNsPerHour;

/// Parses "HH:MM" or "HH:MM:SS" into nanoseconds since midnight.
SimTime parse_clock(const std::string& hhmm);

/// Renders a SimTime as "HH:MM:SS.nnnnnnnnn" (times beyond 24h wrap the day).
std::string format_clock(SimTime t);

}  // namespace lobarena
