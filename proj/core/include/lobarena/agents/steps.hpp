#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "lobarena/agents/config.hpp"
#include "lobarena/book/types.hpp"
#include "lobarena/fundamental/series.hpp"
#include "lobarena/sim/messages.hpp"
#include "lobarena/util/rng.hpp"

namespace lobarena::agents {

// Inverse-CDF draw from the U-quadratic distribution on [a, b]: with
// beta = (a+b)/2 and alpha = 12/(b-a)^3, returns beta + cbrt(3u/alpha -
// (beta-a)^3). Mass concentrates at both ends of the interval.
SimTime sample_u_quadratic(SimTime a, SimTime b, double u);

struct ValueDecision {
  std::optional<sim::LimitOrderMsg> order;
  SimTime next_wakeup = 0;
};

// One Alg.-2-style value-agent decision. Two-sided book: observes the
// fundamental (noisily), compares the mid against the estimate, and quotes
// q at b_t + delta (buy, estimate above mid) or a_t - delta (sell,
// otherwise); delta is capped at s_t - 1 so the order never crosses.
// One-sided or empty book: no order and only the next wakeup is drawn.
ValueDecision value_agent_step(const ValueConfig& cfg, const L2Snapshot& view,
                               const fundamental::FundamentalSeries& series,
                               SimTime now, Rng& rng);

struct MarketMakerDecision {
  std::vector<sim::LimitOrderMsg> orders;  // buy first, then sell
  SimTime next_wakeup = 0;
};

// One market-maker quote cycle (the caller must cancel outstanding quotes
// first). Centers at p_t = (m_t + r_hat)/2, draws q_t and a half-spread s_t,
// and splits q_t ceil/floor between bid and ask. One-sided book: quoting is
// skipped and only the next wakeup is drawn.
MarketMakerDecision market_maker_step(const MarketMakerConfig& cfg,
                                      const L2Snapshot& view, Tick r_hat,
                                      SimTime now, Rng& rng);

// Child-order schedule: n_slots slot-start times t_k = t_start +
// k*(t_end-t_start)/n_slots. TWAP splits parent_qty as evenly as integers
// allow; VWAP apportions by the volume profile restricted to the window
// (all-zero window weight falls back to the TWAP split; *used_fallback is
// set when given). Child sizes always sum to parent_qty.
std::vector<std::pair<SimTime, Qty>> twap_schedule(
    const ExecutionOrderConfig& cfg);
std::vector<std::pair<SimTime, Qty>> vwap_schedule(
    const ExecutionOrderConfig& cfg, const fundamental::VolumeProfile& profile,
    SimTime session_open, SimTime session_close,
    bool* used_fallback = nullptr);

// Largest-remainder apportionment of `total` across `weights` (weights >= 0,
// not all zero). Ties go to the lower index.
std::vector<Qty> apportion(Qty total, const std::vector<double>& weights);

// Moving-average crossover on a 1-minute mid-price history (oldest first).
// Returns no action when history is shorter than the long window. Momentum
// buys when the short SMA strictly exceeds the long SMA and sells otherwise;
// mean-reversion mirrors it. Comparison is integer-exact.
std::optional<sim::MarketOrderMsg> directional_step(
    const DirectionalConfig& cfg, const std::vector<Tick>& mid_history,
    Rng& rng);

}  // namespace lobarena::agents
