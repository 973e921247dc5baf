#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lobarena/exchange/logs.hpp"
#include "lobarena/fundamental/series.hpp"
#include "lobarena/scenario/config.hpp"
#include "lobarena/sim/trace.hpp"

namespace lobarena::scenario {

struct DayRunStats {
  std::uint64_t events = 0;
  std::uint64_t trace_hash = 0;
  std::uint64_t dropped_wakeups = 0;
};

// Runs one independent session day into `recorder`. The day seed is
// master_seed XOR day_index; every agent draws from its own substream of it.
// `csv_series` must be the full multi-day series when the config's
// fundamental source is csv, and null for ou.
DayRunStats simulate_day(const ScenarioConfig& cfg, std::uint64_t master_seed,
                         int day_index,
                         const fundamental::FundamentalSeries* csv_series,
                         const fundamental::VolumeProfile& profile,
                         exchange::MarketRecorder* recorder,
                         sim::TraceSink* trace = nullptr);

// Extracts day `day_index` from a multi-day series (absolute times) and
// re-bases it to ns-since-midnight. Throws if the day's session is not
// covered.
fundamental::FundamentalSeries slice_fundamental_day(
    const fundamental::FundamentalSeries& all, int day_index, SimTime open,
    SimTime close);

// Builds the day's fundamental exactly as simulate_day will see it.
fundamental::FundamentalSeries day_fundamental(
    const ScenarioConfig& cfg, std::uint64_t master_seed, int day_index,
    const fundamental::FundamentalSeries* csv_series);

fundamental::VolumeProfile build_volume_profile(const ScenarioConfig& cfg);

struct DayArtifacts {
  int day_index = 0;
  std::string dir;
  std::string orders_csv;
  std::string trades_csv;
  std::string l2_csv;
  std::string manifest_path;
  DayRunStats stats;
};

struct RunArtifacts {
  std::string out_dir;
  std::string config_path;
  std::string manifest_path;
  std::vector<DayArtifacts> days;
};

// Full multi-day run: writes out_dir/config.json, one day-NN directory per
// day (orders.csv, trades.csv, l2.csv, manifest.json), and a top-level
// manifest. Days run in parallel up to the LOB_ARENA_THREADS cap.
RunArtifacts run_scenario(const ScenarioConfig& cfg, std::uint64_t master_seed,
                          const std::string& out_dir);

}  // namespace lobarena::scenario
