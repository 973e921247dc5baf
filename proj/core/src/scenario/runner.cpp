#include "lobarena/scenario/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>

#include "lobarena/agents/traders.hpp"
#include "lobarena/exchange/exchange_agent.hpp"
#include "lobarena/manifest.hpp"
#include "lobarena/sim/kernel.hpp"
#include "lobarena/util/error.hpp"
#include "lobarena/util/hash.hpp"
#include "lobarena/util/parallel.hpp"
#include "lobarena/version.hpp"

namespace lobarena::scenario {

namespace fs = std::filesystem;

namespace {

std::uint64_t type_stream(std::string_view type_name, int index) {
  return fnv1a64(kFnvOffset, type_name) + static_cast<std::uint64_t>(index);
}

}  // namespace

fundamental::FundamentalSeries slice_fundamental_day(
    const fundamental::FundamentalSeries& all, int day_index, SimTime open,
    SimTime close) {
  SimTime base = static_cast<SimTime>(day_index) * kNsPerDay;
  std::vector<std::pair<SimTime, Tick>> points;
  for (const auto& [t, v] : all.points()) {
    if (t < base) continue;
    if (t >= base + kNsPerDay) break;
    points.emplace_back(t - base, v);
  }
  if (points.empty() || points.front().first > open ||
      points.back().first < close)
    throw ConfigError("fundamental csv does not cover day ", day_index,
                      " session [", format_clock(open), ", ",
                      format_clock(close), "]");
  return fundamental::FundamentalSeries(std::move(points));
}

fundamental::FundamentalSeries day_fundamental(
    const ScenarioConfig& cfg, std::uint64_t master_seed, int day_index,
    const fundamental::FundamentalSeries* csv_series) {
  std::uint64_t day_seed = master_seed ^ static_cast<std::uint64_t>(day_index);
  if (cfg.fundamental.source == FundamentalConfig::Source::Csv) {
    if (csv_series == nullptr)
      throw Error("csv fundamental requested but no series loaded");
    return slice_fundamental_day(*csv_series, day_index, cfg.session_open,
                                 cfg.session_close);
  }
  const OuParams& ou = cfg.fundamental.ou;
  return fundamental::FundamentalSeries::generate_ou(
      ou.mean_ticks, ou.reversion_rate_per_s / 1e9,
      ou.vol_ticks_per_sqrt_s / std::sqrt(1e9),
      static_cast<SimTime>(std::llround(ou.dt_s * 1e9)), cfg.session_open,
      cfg.session_close,
      substream_seed(day_seed, type_stream("fundamental", 0)),
      ou.initial_ticks);
}

fundamental::VolumeProfile build_volume_profile(const ScenarioConfig& cfg) {
  if (!cfg.volume_profile.csv_path.empty())
    return fundamental::VolumeProfile::load_csv(cfg.volume_profile.csv_path);
  return fundamental::VolumeProfile::u_shaped(
      static_cast<std::size_t>(cfg.volume_profile.buckets));
}

DayRunStats simulate_day(const ScenarioConfig& cfg, std::uint64_t master_seed,
                         int day_index,
                         const fundamental::FundamentalSeries* csv_series,
                         const fundamental::VolumeProfile& profile,
                         exchange::MarketRecorder* recorder,
                         sim::TraceSink* trace) {
  cfg.validate();
  std::uint64_t day_seed = master_seed ^ static_cast<std::uint64_t>(day_index);
  fundamental::FundamentalSeries series =
      day_fundamental(cfg, master_seed, day_index, csv_series);

  sim::LatencyModel latency(cfg.latency_ns, cfg.computation_delay_ns);
  sim::Kernel kernel(cfg.session_open, cfg.session_close, latency);
  if (trace != nullptr) kernel.set_trace(trace);

  const AgentId exchange_id = 0;
  exchange::ExchangeAgent exchange(exchange_id, cfg.session_open,
                                   cfg.session_close, recorder);
  if (!cfg.book_seed_levels.empty()) {
    exchange::BookSeed seed;
    seed.mid = series.value_at(cfg.session_open);
    seed.levels = cfg.book_seed_levels;
    exchange.seed_book(seed);
  }
  kernel.register_agent(&exchange);

  std::vector<std::unique_ptr<sim::Agent>> agents;
  agents.reserve(static_cast<std::size_t>(cfg.agent_count()));
  AgentId next_id = 1;

  auto add = [&](std::unique_ptr<sim::Agent> agent, ArchetypeLabel label) {
    exchange.set_archetype(agent->id(), label);
    kernel.register_agent(agent.get());
    agents.push_back(std::move(agent));
  };

  for (int i = 0; i < cfg.noise.count; ++i) {
    agents::NoiseConfig nc{cfg.noise.q_min, cfg.noise.q_max};
    add(std::make_unique<agents::NoiseAgent>(
            next_id, concat("noise-", i), exchange_id, nc, cfg.session_open,
            cfg.session_close,
            substream_seed(day_seed, type_stream("noise", i))),
        ArchetypeLabel::Background);
    ++next_id;
  }
  for (int i = 0; i < cfg.value.count; ++i) {
    agents::ValueConfig vc;
    vc.lambda_a_ns = cfg.value.lambda_a_s * 1e9;
    vc.delta_s = cfg.value.delta_s;
    vc.q = cfg.value.q;
    vc.xi = cfg.value.xi;
    vc.sigma_n = cfg.value.sigma_n;
    add(std::make_unique<agents::ValueAgent>(
            next_id, concat("value-", i), exchange_id, vc, &series,
            cfg.session_open,
            substream_seed(day_seed, type_stream("value", i))),
        ArchetypeLabel::Background);
    ++next_id;
  }
  for (int i = 0; i < cfg.market_maker.count; ++i) {
    agents::MarketMakerConfig mc;
    mc.lambda_a_ns = cfg.market_maker.lambda_a_s * 1e9;
    mc.q_max = cfg.market_maker.q_max;
    mc.delta_s = cfg.market_maker.delta_s;
    add(std::make_unique<agents::MarketMakerAgent>(
            next_id, concat("mm-", i), exchange_id, mc, &series,
            cfg.session_open,
            substream_seed(day_seed, type_stream("market_maker", i))),
        ArchetypeLabel::MarketMaker);
    ++next_id;
  }

  // Execution windows are staggered across the session: taker g starts at
  // open + 30 min + g * (45 min + 73 s), clamped so the window fits. The
  // 73 s sub-offset keeps different takers' slot grids from ever lining up
  // on the same instant (45 min is a multiple of common slot intervals).
  auto taker_window = [&](int global_index, double window_s) {
    SimTime window = static_cast<SimTime>(std::llround(window_s * 1e9));
    SimTime start = cfg.session_open + 30 * kNsPerMin +
                    static_cast<SimTime>(global_index) *
                        (45 * kNsPerMin + 73 * kNsPerSec);
    if (start + window > cfg.session_close)
      start = cfg.session_close - window;
    if (start < cfg.session_open) start = cfg.session_open;
    return std::pair<SimTime, SimTime>(start, start + window);
  };
  for (int i = 0; i < cfg.twap.count; ++i) {
    agents::ExecutionOrderConfig ec;
    ec.parent_qty = cfg.twap.parent_qty;
    ec.n_slots = cfg.twap.n_slots;
    std::tie(ec.t_start, ec.t_end) = taker_window(i, cfg.twap.window_s);
    Side side = (i + day_index) % 2 == 0 ? Side::Buy : Side::Sell;
    add(std::make_unique<agents::ExecutionAgent>(next_id, concat("twap-", i),
                                                 exchange_id, side,
                                                 agents::twap_schedule(ec)),
        ArchetypeLabel::MarketTaker);
    ++next_id;
  }
  for (int i = 0; i < cfg.vwap.count; ++i) {
    agents::ExecutionOrderConfig ec;
    ec.parent_qty = cfg.vwap.parent_qty;
    ec.n_slots = cfg.vwap.n_slots;
    std::tie(ec.t_start, ec.t_end) =
        taker_window(cfg.twap.count + i, cfg.vwap.window_s);
    // Offset parity keeps one buyer and one seller active when only one
    // taker of each flavor exists.
    Side side = (i + day_index + 1) % 2 == 0 ? Side::Buy : Side::Sell;
    add(std::make_unique<agents::ExecutionAgent>(
            next_id, concat("vwap-", i), exchange_id, side,
            agents::vwap_schedule(ec, profile, cfg.session_open,
                                  cfg.session_close)),
        ArchetypeLabel::MarketTaker);
    ++next_id;
  }

  auto add_directional = [&](const DirectionalGroup& group,
                             agents::DirectionalMode mode, const char* type,
                             int global_offset) {
    for (int i = 0; i < group.count; ++i) {
      agents::DirectionalConfig dc;
      dc.mode = mode;
      dc.short_window = group.short_window_min;
      dc.long_window = group.long_window_min;
      dc.q_max = group.q_max;
      SimTime phase =
          static_cast<SimTime>((global_offset + i) % 60) * kNsPerSec;
      add(std::make_unique<agents::DirectionalAgent>(
              next_id, concat(type, "-", i), exchange_id, dc,
              cfg.session_open, cfg.session_close, phase,
              substream_seed(day_seed, type_stream(type, i))),
          ArchetypeLabel::DirectionalTrader);
      ++next_id;
    }
  };
  add_directional(cfg.momentum, agents::DirectionalMode::Momentum, "momentum",
                  0);
  add_directional(cfg.mean_reversion, agents::DirectionalMode::MeanReversion,
                  "mean_reversion", cfg.momentum.count);

  DayRunStats stats;
  stats.events = kernel.run_all();
  stats.trace_hash = kernel.trace_hash();
  stats.dropped_wakeups = kernel.dropped_wakeup_count();
  return stats;
}

RunArtifacts run_scenario(const ScenarioConfig& cfg, std::uint64_t master_seed,
                          const std::string& out_dir) {
  cfg.validate();
  fs::create_directories(out_dir);

  RunArtifacts run;
  run.out_dir = out_dir;

  ScenarioConfig resolved = cfg;
  resolved.master_seed = master_seed;
  std::string config_text = resolved.to_json_text();
  std::string config_hash = sha256_hex(config_text);
  run.config_path = (fs::path(out_dir) / "config.json").string();
  {
    std::ofstream out(run.config_path, std::ios::binary);
    if (!out) throw Error("cannot write ", run.config_path);
    out << config_text;
  }

  // Load and pre-validate the fundamental for every day before any
  // simulation starts.
  std::unique_ptr<fundamental::FundamentalSeries> csv_series;
  if (cfg.fundamental.source == FundamentalConfig::Source::Csv) {
    csv_series = std::make_unique<fundamental::FundamentalSeries>(
        fundamental::FundamentalSeries::load_csv(cfg.fundamental.csv_path));
    for (int d = 0; d < cfg.days; ++d)
      slice_fundamental_day(*csv_series, d, cfg.session_open,
                            cfg.session_close);
  }
  fundamental::VolumeProfile profile = build_volume_profile(cfg);

  run.days.resize(static_cast<std::size_t>(cfg.days));
  parallel_for(static_cast<std::size_t>(cfg.days), thread_cap(),
               [&](std::size_t d) {
                 auto started = std::chrono::steady_clock::now();
                 DayArtifacts& day = run.days[d];
                 day.day_index = static_cast<int>(d);
                 char name[16];
                 std::snprintf(name, sizeof name, "day-%02zu", d);
                 day.dir = (fs::path(out_dir) / name).string();
                 fs::create_directories(day.dir);
                 day.orders_csv = (fs::path(day.dir) / "orders.csv").string();
                 day.trades_csv = (fs::path(day.dir) / "trades.csv").string();
                 day.l2_csv = (fs::path(day.dir) / "l2.csv").string();
                 {
                   exchange::CsvMarketRecorder recorder(
                       day.orders_csv, day.trades_csv, day.l2_csv);
                   day.stats = simulate_day(cfg, master_seed,
                                            static_cast<int>(d),
                                            csv_series.get(), profile,
                                            &recorder);
                 }
                 RunManifest m;
                 m.command = "simulate-day";
                 m.config_hash = config_hash;
                 m.seed = master_seed ^ d;
                 m.tool_version = std::string(kToolVersion);
                 m.wall_time_seconds =
                     std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - started)
                         .count();
                 m.add_output(day.dir, day.orders_csv);
                 m.add_output(day.dir, day.trades_csv);
                 m.add_output(day.dir, day.l2_csv);
                 day.manifest_path =
                     (fs::path(day.dir) / "manifest.json").string();
                 m.write(day.manifest_path);
               });

  RunManifest top;
  top.command = "simulate";
  top.config_hash = config_hash;
  top.seed = master_seed;
  top.tool_version = std::string(kToolVersion);
  if (cfg.fundamental.source == FundamentalConfig::Source::Csv)
    top.inputs.push_back(cfg.fundamental.csv_path);
  top.add_output(out_dir, run.config_path);
  for (const auto& day : run.days) top.add_output(out_dir, day.manifest_path);
  run.manifest_path = (fs::path(out_dir) / "manifest.json").string();
  top.write(run.manifest_path);
  return run;
}

}  // namespace lobarena::scenario
