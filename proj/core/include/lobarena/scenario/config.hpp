#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lobarena/agents/config.hpp"
#include "lobarena/book/types.hpp"
#include "lobarena/util/time.hpp"

namespace lobarena::scenario {

struct OuParams {
  double mean_ticks = 15000;
  double reversion_rate_per_s = 0.005;
  double vol_ticks_per_sqrt_s = 5.0;
  double dt_s = 1.0;
  double initial_ticks = 15000;
};

struct FundamentalConfig {
  enum class Source { Ou, Csv };
  Source source = Source::Ou;
  OuParams ou;
  std::string csv_path;  // required when source == Csv
};

struct VolumeProfileConfig {
  std::string csv_path;  // empty -> built-in U shape
  int buckets = 13;
};

struct NoiseGroup {
  int count = 0;
  Qty q_min = 10;
  Qty q_max = 100;
};

struct ValueGroup {
  int count = 0;
  double lambda_a_s = 300;
  int delta_s = 2;
  Qty q = 100;
  double xi = 0.3;
  double sigma_n = 50;  // ticks^2
};

struct MarketMakerGroup {
  int count = 0;
  double lambda_a_s = 10;
  Qty q_max = 50;
  int delta_s = 5;
};

struct TakerGroup {
  int count = 0;
  Qty parent_qty = 2000;
  double window_s = 7200;
  int n_slots = 24;
};

struct DirectionalGroup {
  int count = 0;
  Qty q_max = 50;
  int short_window_min = 20;
  int long_window_min = 50;
};

// Full description of a multi-day market run. A value-initialized config has
// zero agents and an unseeded book; presets fill in the working markets.
struct ScenarioConfig {
  int days = 5;
  SimTime session_open = 9 * kNsPerHour + 30 * kNsPerMin;
  SimTime session_close = 16 * kNsPerHour;
  double tick_size = 0.01;
  SimTime latency_ns = 19'330'000;
  SimTime computation_delay_ns = 50;
  FundamentalConfig fundamental;
  VolumeProfileConfig volume_profile;
  NoiseGroup noise;
  ValueGroup value;
  MarketMakerGroup market_maker;
  TakerGroup twap;
  TakerGroup vwap;
  DirectionalGroup momentum;
  DirectionalGroup mean_reversion;
  // Pre-open exchange liquidity as (offset from fundamental, qty) pairs per
  // side; empty means the book opens empty.
  std::vector<std::pair<Tick, Qty>> book_seed_levels;
  std::optional<std::uint64_t> master_seed;

  int agent_count() const {
    return noise.count + value.count + market_maker.count + twap.count +
           vwap.count + momentum.count + mean_reversion.count;
  }

  // "default" is the full-scale population; "small" is a desk-scale preset
  // for tests and CI.
  static ScenarioConfig preset(const std::string& name);
  static ScenarioConfig from_json_file(const std::string& path);
  static ScenarioConfig from_json_text(const std::string& text,
                                       const std::string& origin);
  // Canonical resolved form; hashing it gives the config hash recorded in
  // manifests.
  std::string to_json_text() const;

  void validate() const;  // throws ConfigError naming the offending field
};

}  // namespace lobarena::scenario
