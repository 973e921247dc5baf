#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lobarena/agents/config.hpp"
#include "lobarena/agents/steps.hpp"
#include "lobarena/fundamental/series.hpp"
#include "lobarena/sim/agent.hpp"
#include "lobarena/sim/kernel.hpp"
#include "lobarena/util/rng.hpp"

namespace lobarena::agents {

// Trades once per day: a market order of fixed size at a U-quadratic time.
class NoiseAgent final : public sim::Agent {
 public:
  NoiseAgent(AgentId id, std::string name, AgentId exchange, NoiseConfig cfg,
             SimTime t_open, SimTime t_close, std::uint64_t seed);

  void on_start(sim::Kernel& kernel) override;
  void on_message(sim::Kernel& kernel, const sim::Envelope& env) override;

 private:
  AgentId exchange_;
  NoiseConfig cfg_;
  SimTime t_open_;
  SimTime t_close_;
  Rng rng_;
  Qty q_ = 0;
};

// Quotes around a noisy fundamental estimate at exponential arrivals.
class ValueAgent final : public sim::Agent {
 public:
  ValueAgent(AgentId id, std::string name, AgentId exchange, ValueConfig cfg,
             const fundamental::FundamentalSeries* series, SimTime t_open,
             std::uint64_t seed);

  void on_start(sim::Kernel& kernel) override;
  void on_message(sim::Kernel& kernel, const sim::Envelope& env) override;

 private:
  AgentId exchange_;
  ValueConfig cfg_;
  const fundamental::FundamentalSeries* series_;
  SimTime t_open_;
  Rng rng_;
};

// Requotes both sides around (mid + fundamental)/2, cancelling the previous
// quotes first; observes the fundamental without noise.
class MarketMakerAgent final : public sim::Agent {
 public:
  MarketMakerAgent(AgentId id, std::string name, AgentId exchange,
                   MarketMakerConfig cfg,
                   const fundamental::FundamentalSeries* series, SimTime t_open,
                   std::uint64_t seed);

  void on_start(sim::Kernel& kernel) override;
  void on_message(sim::Kernel& kernel, const sim::Envelope& env) override;

 private:
  AgentId exchange_;
  MarketMakerConfig cfg_;
  const fundamental::FundamentalSeries* series_;
  SimTime t_open_;
  Rng rng_;
};

// Works a parent order as pre-scheduled market-order children (TWAP or VWAP
// schedules; the schedule is computed by the caller).
class ExecutionAgent final : public sim::Agent {
 public:
  ExecutionAgent(AgentId id, std::string name, AgentId exchange, Side side,
                 std::vector<std::pair<SimTime, Qty>> schedule);

  void on_start(sim::Kernel& kernel) override;
  void on_message(sim::Kernel& kernel, const sim::Envelope& env) override;

  Qty total_qty() const;

 private:
  AgentId exchange_;
  Side side_;
  std::vector<std::pair<SimTime, Qty>> schedule_;
};

// Samples the mid on a fixed 1-minute grid and trades an SMA crossover once
// enough history has accumulated.
class DirectionalAgent final : public sim::Agent {
 public:
  DirectionalAgent(AgentId id, std::string name, AgentId exchange,
                   DirectionalConfig cfg, SimTime t_open, SimTime t_close,
                   SimTime phase_ns, std::uint64_t seed,
                   SimTime grid_ns = 60 * kNsPerSec);

  void on_start(sim::Kernel& kernel) override;
  void on_message(sim::Kernel& kernel, const sim::Envelope& env) override;

  const std::vector<Tick>& mid_history() const { return history_; }

 private:
  AgentId exchange_;
  DirectionalConfig cfg_;
  SimTime t_open_;
  SimTime t_close_;
  SimTime phase_;
  SimTime grid_;
  Rng rng_;
  std::uint64_t next_slot_ = 0;
  std::vector<Tick> history_;
};

}  // namespace lobarena::agents
