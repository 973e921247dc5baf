#include "lobarena/exchange/exchange_agent.hpp"

#include "lobarena/util/error.hpp"

namespace lobarena::exchange {

BookSeed BookSeed::standard(Tick mid) {
  BookSeed s;
  s.mid = mid;
  // Three tight levels give agents a spread to work with; three deep
  // backstop levels keep one market order from blowing through the book
  // before organic liquidity accumulates.
  s.levels = {{5, 500}, {10, 500}, {15, 500},
              {40, 20000}, {60, 20000}, {80, 20000}};
  return s;
}

ExchangeAgent::ExchangeAgent(AgentId id, SimTime t_open, SimTime t_close,
                             MarketRecorder* recorder)
    : sim::Agent(id, "exchange"),
      t_open_(t_open),
      t_close_(t_close),
      recorder_(recorder) {
  if (t_close_ <= t_open_)
    throw Error("exchange close ", t_close_, " not after open ", t_open_);
}

void ExchangeAgent::set_archetype(AgentId agent, ArchetypeLabel label) {
  archetypes_[agent] = label;
}

ArchetypeLabel ExchangeAgent::archetype_of(AgentId agent) const {
  auto it = archetypes_.find(agent);
  if (it == archetypes_.end())
    throw Error("no archetype registered for agent ", agent);
  return it->second;
}

void ExchangeAgent::seed_book(const BookSeed& seed) {
  for (const auto& [offset, qty] : seed.levels) {
    if (qty <= 0 || offset <= 0 || seed.mid <= offset)
      throw Error("bad book seed level: offset=", offset, " qty=", qty);
    auto bid = book_.submit_limit(id(), Side::Buy, seed.mid - offset, qty, 0);
    auto ask = book_.submit_limit(id(), Side::Sell, seed.mid + offset, qty, 0);
    if (!bid.trades.empty() || !ask.trades.empty())
      throw Error("book seed crossed itself at offset ", offset);
  }
}

void ExchangeAgent::on_start(sim::Kernel& kernel) {
  // One book snapshot at the open, before any order can arrive.
  kernel.wakeup_at(id(), t_open_);
}

void ExchangeAgent::log_l2(SimTime now) {
  if (recorder_ == nullptr) return;
  L2LogRow row;
  row.snap = book_.snapshot_l2(now);
  row.last_trade_px = last_trade_px_;
  recorder_->on_l2(row);
}

void ExchangeAgent::emit_fills(sim::Kernel& kernel,
                               const OrderBook::SubmitResult& res,
                               AgentId taker, Side taker_side,
                               Qty submitted_qty) {
  Qty taker_remaining = submitted_qty;
  for (const Trade& t : res.trades) {
    if (recorder_ != nullptr) recorder_->on_trade(t);
    last_trade_px_ = t.price;
    taker_remaining -= t.qty;
    AgentId maker = taker_side == Side::Buy ? t.sell_agent : t.buy_agent;
    if (maker != id()) {
      sim::FillMsg fill;
      fill.order_id = t.maker_order;
      fill.side = opposite(taker_side);
      fill.price = t.price;
      fill.qty = t.qty;
      fill.remaining = t.maker_remaining;
      fill.was_aggressor = false;
      kernel.deliver(id(), maker, fill);
    }
    if (taker != id()) {
      sim::FillMsg fill;
      fill.order_id = t.taker_order;
      fill.side = taker_side;
      fill.price = t.price;
      fill.qty = t.qty;
      fill.remaining = taker_remaining;
      fill.was_aggressor = true;
      kernel.deliver(id(), taker, fill);
    }
  }
}

void ExchangeAgent::handle_limit(sim::Kernel& kernel,
                                 const sim::Envelope& env) {
  const auto& m = std::get<sim::LimitOrderMsg>(env.payload);
  SimTime now = kernel.now();
  sim::OrderAckMsg ack;
  if (!market_open(now)) {
    ack.reason = sim::RejectReason::MarketClosed;
    kernel.deliver(id(), env.sender, ack);
    return;
  }
  if (recorder_ != nullptr) {
    OrderLogRow row{now,    env.sender, archetype_of(env.sender),
                    OrderAction::Limit, m.side,     m.price,
                    m.qty};
    recorder_->on_order(row);
  }
  auto res = book_.submit_limit(env.sender, m.side, m.price, m.qty, now);
  ack.order_id = res.order_id;
  ack.accepted = res.accepted;
  ack.reason = res.reason;
  ack.resting_qty = res.resting_qty;
  kernel.deliver(id(), env.sender, ack);
  if (res.accepted) {
    emit_fills(kernel, res, env.sender, m.side, m.qty);
    log_l2(now);
  }
}

void ExchangeAgent::handle_market(sim::Kernel& kernel,
                                  const sim::Envelope& env) {
  const auto& m = std::get<sim::MarketOrderMsg>(env.payload);
  SimTime now = kernel.now();
  sim::OrderAckMsg ack;
  if (!market_open(now)) {
    ack.reason = sim::RejectReason::MarketClosed;
    kernel.deliver(id(), env.sender, ack);
    return;
  }
  if (recorder_ != nullptr) {
    OrderLogRow row{now,     env.sender, archetype_of(env.sender),
                    OrderAction::Market, m.side,     0,
                    m.qty};
    recorder_->on_order(row);
  }
  auto res = book_.submit_market(env.sender, m.side, m.qty, now);
  ack.order_id = res.order_id;
  ack.accepted = res.accepted;
  ack.reason = res.reason;
  kernel.deliver(id(), env.sender, ack);
  if (!res.trades.empty()) {
    emit_fills(kernel, res, env.sender, m.side, m.qty);
    log_l2(now);
  }
}

void ExchangeAgent::handle_cancel(sim::Kernel& kernel,
                                  const sim::Envelope& env) {
  const auto& m = std::get<sim::CancelOrderMsg>(env.payload);
  SimTime now = kernel.now();
  sim::CancelResultMsg result;
  result.order_id = m.order_id;
  auto info = market_open(now) ? book_.find(m.order_id) : std::nullopt;
  if (info && info->agent == env.sender) {
    if (recorder_ != nullptr) {
      OrderLogRow row{now,     env.sender,  archetype_of(env.sender),
                      OrderAction::Cancel, info->side, info->price,
                      info->open_qty};
      recorder_->on_order(row);
    }
    Qty removed = 0;
    book_.cancel(env.sender, m.order_id, &removed);
    result.cancelled_orders = 1;
    result.cancelled_qty = removed;
    log_l2(now);
  }
  kernel.deliver(id(), env.sender, result);
}

void ExchangeAgent::handle_cancel_all(sim::Kernel& kernel,
                                      const sim::Envelope& env) {
  SimTime now = kernel.now();
  sim::CancelResultMsg result;
  // Post-close cancels are refused like orders; the book is frozen outside
  // the session so every logged row stays inside it.
  const std::set<OrderId>* owned =
      market_open(now) ? book_.orders_of(env.sender) : nullptr;
  if (owned != nullptr) {
    std::vector<OrderId> ids(owned->begin(), owned->end());
    for (OrderId oid : ids) {
      auto info = book_.find(oid);
      if (!info) continue;
      if (recorder_ != nullptr) {
        OrderLogRow row{now,     env.sender,  archetype_of(env.sender),
                        OrderAction::Cancel, info->side, info->price,
                        info->open_qty};
        recorder_->on_order(row);
      }
      Qty removed = 0;
      if (book_.cancel(env.sender, oid, &removed)) {
        ++result.cancelled_orders;
        result.cancelled_qty += removed;
      }
    }
    if (result.cancelled_orders > 0) log_l2(now);
  }
  kernel.deliver(id(), env.sender, result);
}

void ExchangeAgent::on_message(sim::Kernel& kernel, const sim::Envelope& env) {
  if (std::holds_alternative<sim::WakeupMsg>(env.payload)) {
    log_l2(kernel.now());
    return;
  }
  if (std::holds_alternative<sim::LimitOrderMsg>(env.payload)) {
    handle_limit(kernel, env);
    return;
  }
  if (std::holds_alternative<sim::MarketOrderMsg>(env.payload)) {
    handle_market(kernel, env);
    return;
  }
  if (std::holds_alternative<sim::CancelOrderMsg>(env.payload)) {
    handle_cancel(kernel, env);
    return;
  }
  if (std::holds_alternative<sim::CancelAllMsg>(env.payload)) {
    handle_cancel_all(kernel, env);
    return;
  }
  if (std::holds_alternative<sim::L2RequestMsg>(env.payload)) {
    sim::L2ResponseMsg resp;
    resp.snapshot = book_.snapshot_l2(kernel.now());
    kernel.deliver(id(), env.sender, resp);
    return;
  }
  // Anything else addressed to the exchange is ignored.
}

}  // namespace lobarena::exchange
