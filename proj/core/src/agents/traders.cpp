#include "lobarena/agents/traders.hpp"

#include <cmath>

#include "lobarena/util/error.hpp"

namespace lobarena::agents {

namespace {

SimTime exp_wait(double mean_ns, Rng& rng) {
  double w = rng.exponential_mean(mean_ns);
  return static_cast<SimTime>(std::llround(std::max(0.0, w)));
}

}  // namespace

NoiseAgent::NoiseAgent(AgentId id, std::string name, AgentId exchange,
                       NoiseConfig cfg, SimTime t_open, SimTime t_close,
                       std::uint64_t seed)
    : sim::Agent(id, std::move(name)),
      exchange_(exchange),
      cfg_(cfg),
      t_open_(t_open),
      t_close_(t_close),
      rng_(seed) {
  if (cfg_.q_min <= 0 || cfg_.q_max < cfg_.q_min)
    throw Error("noise agent: bad size range [", cfg_.q_min, ",", cfg_.q_max,
                "]");
}

void NoiseAgent::on_start(sim::Kernel& kernel) {
  q_ = rng_.uniform_int(cfg_.q_min, cfg_.q_max);
  SimTime t = sample_u_quadratic(t_open_, t_close_, rng_.uniform());
  kernel.wakeup_at(id(), t);  // outside the sim window -> dropped, never acts
}

void NoiseAgent::on_message(sim::Kernel& kernel, const sim::Envelope& env) {
  if (!std::holds_alternative<sim::WakeupMsg>(env.payload)) return;
  sim::MarketOrderMsg order;
  order.side = rng_.bernoulli(0.5) ? Side::Buy : Side::Sell;
  order.qty = q_;
  kernel.deliver(id(), exchange_, order);
}

ValueAgent::ValueAgent(AgentId id, std::string name, AgentId exchange,
                       ValueConfig cfg,
                       const fundamental::FundamentalSeries* series,
                       SimTime t_open, std::uint64_t seed)
    : sim::Agent(id, std::move(name)),
      exchange_(exchange),
      cfg_(cfg),
      series_(series),
      t_open_(t_open),
      rng_(seed) {
  if (series_ == nullptr) throw Error("value agent: null fundamental series");
}

void ValueAgent::on_start(sim::Kernel& kernel) {
  kernel.wakeup_at(id(), t_open_ + exp_wait(cfg_.lambda_a_ns, rng_));
}

void ValueAgent::on_message(sim::Kernel& kernel, const sim::Envelope& env) {
  if (std::holds_alternative<sim::WakeupMsg>(env.payload)) {
    kernel.deliver(id(), exchange_, sim::L2RequestMsg{});
    return;
  }
  if (const auto* resp = std::get_if<sim::L2ResponseMsg>(&env.payload)) {
    ValueDecision d =
        value_agent_step(cfg_, resp->snapshot, *series_, kernel.now(), rng_);
    if (d.order) kernel.deliver(id(), exchange_, *d.order);
    kernel.wakeup_at(id(), d.next_wakeup);
  }
}

MarketMakerAgent::MarketMakerAgent(AgentId id, std::string name,
                                   AgentId exchange, MarketMakerConfig cfg,
                                   const fundamental::FundamentalSeries* series,
                                   SimTime t_open, std::uint64_t seed)
    : sim::Agent(id, std::move(name)),
      exchange_(exchange),
      cfg_(cfg),
      series_(series),
      t_open_(t_open),
      rng_(seed) {
  if (series_ == nullptr)
    throw Error("market maker: null fundamental series");
  if (cfg_.q_max < 1 || cfg_.delta_s < 1)
    throw Error("market maker: q_max and delta_s must be >= 1");
}

void MarketMakerAgent::on_start(sim::Kernel& kernel) {
  kernel.wakeup_at(id(), t_open_ + exp_wait(cfg_.lambda_a_ns, rng_));
}

void MarketMakerAgent::on_message(sim::Kernel& kernel,
                                  const sim::Envelope& env) {
  if (std::holds_alternative<sim::WakeupMsg>(env.payload)) {
    // Same send time: the cancel reaches the exchange first (seq order), so
    // the snapshot excludes this agent's own stale quotes.
    kernel.deliver(id(), exchange_, sim::CancelAllMsg{});
    kernel.deliver(id(), exchange_, sim::L2RequestMsg{});
    return;
  }
  if (const auto* resp = std::get_if<sim::L2ResponseMsg>(&env.payload)) {
    Tick r_hat = series_->value_at(kernel.now());
    MarketMakerDecision d =
        market_maker_step(cfg_, resp->snapshot, r_hat, kernel.now(), rng_);
    for (const auto& order : d.orders) kernel.deliver(id(), exchange_, order);
    kernel.wakeup_at(id(), d.next_wakeup);
  }
}

ExecutionAgent::ExecutionAgent(AgentId id, std::string name, AgentId exchange,
                               Side side,
                               std::vector<std::pair<SimTime, Qty>> schedule)
    : sim::Agent(id, std::move(name)),
      exchange_(exchange),
      side_(side),
      schedule_(std::move(schedule)) {}

Qty ExecutionAgent::total_qty() const {
  Qty total = 0;
  for (const auto& [t, q] : schedule_) total += q;
  return total;
}

void ExecutionAgent::on_start(sim::Kernel& kernel) {
  for (std::size_t k = 0; k < schedule_.size(); ++k)
    if (schedule_[k].second > 0)
      kernel.wakeup_at(id(), schedule_[k].first, k);
}

void ExecutionAgent::on_message(sim::Kernel& kernel,
                                const sim::Envelope& env) {
  const auto* wake = std::get_if<sim::WakeupMsg>(&env.payload);
  if (wake == nullptr) return;
  const auto& child = schedule_.at(wake->tag);
  sim::MarketOrderMsg order;
  order.side = side_;
  order.qty = child.second;
  kernel.deliver(id(), exchange_, order);
}

DirectionalAgent::DirectionalAgent(AgentId id, std::string name,
                                   AgentId exchange, DirectionalConfig cfg,
                                   SimTime t_open, SimTime t_close,
                                   SimTime phase_ns, std::uint64_t seed,
                                   SimTime grid_ns)
    : sim::Agent(id, std::move(name)),
      exchange_(exchange),
      cfg_(cfg),
      t_open_(t_open),
      t_close_(t_close),
      phase_(phase_ns),
      grid_(grid_ns),
      rng_(seed) {
  if (grid_ == 0) throw Error("directional agent: zero sampling grid");
}

void DirectionalAgent::on_start(sim::Kernel& kernel) {
  next_slot_ = 1;
  kernel.wakeup_at(id(), t_open_ + phase_);
}

void DirectionalAgent::on_message(sim::Kernel& kernel,
                                  const sim::Envelope& env) {
  if (std::holds_alternative<sim::WakeupMsg>(env.payload)) {
    kernel.deliver(id(), exchange_, sim::L2RequestMsg{});
    // Next grid slot is anchored to the open, so response latency never
    // drifts the sampling times.
    SimTime next = t_open_ + phase_ + next_slot_ * grid_;
    ++next_slot_;
    if (next <= t_close_) kernel.wakeup_at(id(), next);
    return;
  }
  if (const auto* resp = std::get_if<sim::L2ResponseMsg>(&env.payload)) {
    const L2Snapshot& snap = resp->snapshot;
    if (snap.has_bid() && snap.has_ask())
      history_.push_back(mid_tick(snap.bid_price[0], snap.ask_price[0]));
    if (history_.size() > static_cast<std::size_t>(cfg_.long_window))
      history_.erase(history_.begin(),
                     history_.end() - cfg_.long_window);
    auto order = directional_step(cfg_, history_, rng_);
    if (order) kernel.deliver(id(), exchange_, *order);
  }
}

}  // namespace lobarena::agents
