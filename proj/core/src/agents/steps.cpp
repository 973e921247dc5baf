#include "lobarena/agents/steps.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lobarena/util/error.hpp"

namespace lobarena::agents {

SimTime sample_u_quadratic(SimTime a, SimTime b, double u) {
  if (a >= b) throw Error("u_quadratic: need a < b, got ", a, " >= ", b);
  if (u < 0.0 || u > 1.0) throw Error("u_quadratic: u out of [0,1]: ", u);
  double beta = 0.5 * (static_cast<double>(a) + static_cast<double>(b));
  double h = beta - static_cast<double>(a);  // = (b-a)/2
  // With alpha = 12/(b-a)^3, the inverse CDF beta + cbrt(3u/alpha - h^3)
  // reduces to beta + h*cbrt(2u - 1).
  double x = beta + h * std::cbrt(2.0 * u - 1.0);
  x = std::clamp(x, static_cast<double>(a), static_cast<double>(b));
  return static_cast<SimTime>(std::llround(x));
}

namespace {

SimTime exp_wait(double mean_ns, Rng& rng) {
  double w = rng.exponential_mean(mean_ns);
  return static_cast<SimTime>(std::llround(std::max(0.0, w)));
}

}  // namespace

ValueDecision value_agent_step(const ValueConfig& cfg, const L2Snapshot& view,
                               const fundamental::FundamentalSeries& series,
                               SimTime now, Rng& rng) {
  ValueDecision d;
  if (!view.has_bid() || !view.has_ask()) {
    d.next_wakeup = now + exp_wait(cfg.lambda_a_ns, rng);
    return d;
  }
  Tick r_hat =
      fundamental::observe(series, now, {cfg.sigma_n}, rng);
  Tick b = view.bid_price[0];
  Tick a = view.ask_price[0];
  Tick m = mid_tick(b, a);
  Tick s = a - b;
  bool inside = rng.bernoulli(cfg.xi);
  Tick delta = 0;
  if (inside) {
    Tick delta_max = s * cfg.delta_s;
    delta = rng.uniform_int(0, delta_max);
  }
  // A buy at b + delta (or sell at a - delta) with delta >= s would cross
  // the touch; cap keeps the agent passive.
  delta = std::min(delta, s - 1);
  sim::LimitOrderMsg order;
  order.qty = cfg.q;
  if (m < r_hat) {
    order.side = Side::Buy;
    order.price = b + delta;
  } else {
    order.side = Side::Sell;
    order.price = a - delta;
  }
  d.order = order;
  d.next_wakeup = now + exp_wait(cfg.lambda_a_ns, rng);
  return d;
}

MarketMakerDecision market_maker_step(const MarketMakerConfig& cfg,
                                      const L2Snapshot& view, Tick r_hat,
                                      SimTime now, Rng& rng) {
  MarketMakerDecision d;
  if (!view.has_bid() || !view.has_ask()) {
    d.next_wakeup = now + exp_wait(cfg.lambda_a_ns, rng);
    return d;
  }
  Tick m = mid_tick(view.bid_price[0], view.ask_price[0]);
  Tick p = mid_tick(m, r_hat);
  Qty q_t = rng.uniform_int(1, cfg.q_max);
  Tick s_t = rng.uniform_int(1, cfg.delta_s);
  Qty buy_qty = (q_t + 1) / 2;  // odd sizes round the buy side up
  Qty sell_qty = q_t / 2;
  if (buy_qty > 0 && p - s_t > 0)
    d.orders.push_back({Side::Buy, p - s_t, buy_qty});
  if (sell_qty > 0) d.orders.push_back({Side::Sell, p + s_t, sell_qty});
  d.next_wakeup = now + exp_wait(cfg.lambda_a_ns, rng);
  return d;
}

std::vector<Qty> apportion(Qty total, const std::vector<double>& weights) {
  if (weights.empty()) throw Error("apportion: no weights");
  if (total < 0) throw Error("apportion: negative total");
  double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double w : weights)
    if (!(w >= 0)) throw Error("apportion: negative weight");
  if (sum <= 0) throw Error("apportion: weights sum to zero");
  std::size_t n = weights.size();
  std::vector<Qty> out(n);
  std::vector<std::pair<double, std::size_t>> fractional(n);
  Qty assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double ideal = static_cast<double>(total) * weights[i] / sum;
    double base = std::floor(ideal);
    out[i] = static_cast<Qty>(base);
    assigned += out[i];
    fractional[i] = {ideal - base, i};
  }
  Qty leftover = total - assigned;
  std::sort(fractional.begin(), fractional.end(),
            [](const auto& x, const auto& y) {
              if (x.first != y.first) return x.first > y.first;
              return x.second < y.second;
            });
  for (Qty k = 0; k < leftover; ++k)
    out[fractional[static_cast<std::size_t>(k) % n].second] += 1;
  return out;
}

namespace {

std::vector<SimTime> slot_times(const ExecutionOrderConfig& cfg) {
  if (cfg.parent_qty <= 0) throw Error("execution order: parent_qty <= 0");
  if (cfg.n_slots < 1) throw Error("execution order: n_slots < 1");
  if (cfg.t_end <= cfg.t_start)
    throw Error("execution order: window end not after start");
  std::vector<SimTime> times(static_cast<std::size_t>(cfg.n_slots));
  SimTime span = cfg.t_end - cfg.t_start;
  for (int k = 0; k < cfg.n_slots; ++k)
    times[static_cast<std::size_t>(k)] =
        cfg.t_start + span * static_cast<SimTime>(k) /
                          static_cast<SimTime>(cfg.n_slots);
  return times;
}

}  // namespace

std::vector<std::pair<SimTime, Qty>> twap_schedule(
    const ExecutionOrderConfig& cfg) {
  auto times = slot_times(cfg);
  auto sizes =
      apportion(cfg.parent_qty,
                std::vector<double>(static_cast<std::size_t>(cfg.n_slots), 1.0));
  std::vector<std::pair<SimTime, Qty>> out;
  out.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i)
    out.emplace_back(times[i], sizes[i]);
  return out;
}

std::vector<std::pair<SimTime, Qty>> vwap_schedule(
    const ExecutionOrderConfig& cfg, const fundamental::VolumeProfile& profile,
    SimTime session_open, SimTime session_close, bool* used_fallback) {
  if (used_fallback != nullptr) *used_fallback = false;
  auto times = slot_times(cfg);
  std::vector<double> weights(times.size());
  double sum = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    weights[i] = profile.weight_at(times[i], session_open, session_close);
    sum += weights[i];
  }
  if (sum <= 0) {
    if (used_fallback != nullptr) *used_fallback = true;
    return twap_schedule(cfg);
  }
  auto sizes = apportion(cfg.parent_qty, weights);
  std::vector<std::pair<SimTime, Qty>> out;
  out.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i)
    out.emplace_back(times[i], sizes[i]);
  return out;
}

std::optional<sim::MarketOrderMsg> directional_step(
    const DirectionalConfig& cfg, const std::vector<Tick>& mid_history,
    Rng& rng) {
  if (cfg.short_window < 1 || cfg.long_window <= cfg.short_window)
    throw Error("directional: need 1 <= short_window < long_window");
  auto long_n = static_cast<std::size_t>(cfg.long_window);
  auto short_n = static_cast<std::size_t>(cfg.short_window);
  if (mid_history.size() < long_n) return std::nullopt;
  Tick sum_long = 0;
  Tick sum_short = 0;
  std::size_t start = mid_history.size() - long_n;
  for (std::size_t i = start; i < mid_history.size(); ++i) {
    sum_long += mid_history[i];
    if (i >= mid_history.size() - short_n) sum_short += mid_history[i];
  }
  // SMA_short > SMA_long without division: cross-multiply by the windows.
  bool short_above = sum_short * cfg.long_window > sum_long * cfg.short_window;
  bool buy = cfg.mode == DirectionalMode::Momentum ? short_above : !short_above;
  sim::MarketOrderMsg order;
  order.side = buy ? Side::Buy : Side::Sell;
  order.qty = rng.uniform_int(1, cfg.q_max);
  return order;
}

}  // namespace lobarena::agents
