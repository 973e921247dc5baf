#include "support/brute_matcher.hpp"

#include <algorithm>
#include <map>

namespace lobarena::testing {

std::optional<std::size_t> BruteMatcher::best_match(
    Side taker_side, std::optional<Tick> limit) const {
  const Side maker_side = opposite(taker_side);
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < rest_.size(); ++i) {
    const Rest& r = rest_[i];
    if (r.side != maker_side) continue;
    if (limit) {
      const bool compatible =
          taker_side == Side::Buy ? r.price <= *limit : r.price >= *limit;
      if (!compatible) continue;
    }
    if (!best) {
      best = i;
      continue;
    }
    const Rest& b = rest_[*best];
    if (r.price != b.price) {
      const bool better =
          taker_side == Side::Buy ? r.price < b.price : r.price > b.price;
      if (better) best = i;
      continue;
    }
    if (r.entry_time != b.entry_time) {
      if (r.entry_time < b.entry_time) best = i;
      continue;
    }
    if (r.entry_qty != b.entry_qty) {
      if (r.entry_qty > b.entry_qty) best = i;
      continue;
    }
    if (r.id < b.id) best = i;
  }
  return best;
}

Qty BruteMatcher::run_match(AgentId taker, OrderId taker_id, Side taker_side,
                            Qty qty, std::optional<Tick> limit, SimTime now,
                            std::vector<Trade>* trades) {
  while (qty > 0) {
    auto idx = best_match(taker_side, limit);
    if (!idx) break;
    Rest& maker = rest_[*idx];
    const Qty fill = std::min(qty, maker.open_qty);
    maker.open_qty -= fill;
    qty -= fill;
    Trade t;
    t.time = now;
    t.price = maker.price;
    t.qty = fill;
    t.aggressor = taker_side;
    t.buy_agent = taker_side == Side::Buy ? taker : maker.agent;
    t.sell_agent = taker_side == Side::Sell ? taker : maker.agent;
    t.maker_order = maker.id;
    t.taker_order = taker_id;
    t.maker_remaining = maker.open_qty;
    trades->push_back(t);
    if (maker.open_qty == 0) {
      rest_.erase(rest_.begin() + static_cast<std::ptrdiff_t>(*idx));
    }
  }
  return qty;
}

BruteMatcher::SubmitResult BruteMatcher::submit_limit(AgentId agent, Side side,
                                                      Tick price, Qty qty,
                                                      SimTime now) {
  SubmitResult res;
  if (qty <= 0 || price <= 0) return res;
  res.order_id = next_id_++;
  res.accepted = true;
  const Qty remaining =
      run_match(agent, res.order_id, side, qty, price, now, &res.trades);
  if (remaining > 0) {
    Rest r;
    r.id = res.order_id;
    r.agent = agent;
    r.side = side;
    r.price = price;
    r.open_qty = remaining;
    r.entry_time = now;
    r.entry_qty = remaining;
    rest_.push_back(r);
    res.resting_qty = remaining;
  }
  return res;
}

BruteMatcher::SubmitResult BruteMatcher::submit_market(AgentId agent, Side side,
                                                       Qty qty, SimTime now) {
  SubmitResult res;
  if (qty <= 0) return res;
  res.order_id = next_id_++;
  res.cancelled_qty =
      run_match(agent, res.order_id, side, qty, std::nullopt, now, &res.trades);
  res.accepted = !res.trades.empty();
  return res;
}

bool BruteMatcher::cancel(AgentId agent, OrderId id, Qty* removed_qty) {
  if (removed_qty != nullptr) *removed_qty = 0;
  for (std::size_t i = 0; i < rest_.size(); ++i) {
    if (rest_[i].id != id) continue;
    if (rest_[i].agent != agent) return false;
    if (removed_qty != nullptr) *removed_qty = rest_[i].open_qty;
    rest_.erase(rest_.begin() + static_cast<std::ptrdiff_t>(i));
    return true;
  }
  return false;
}

std::uint32_t BruteMatcher::cancel_all(AgentId agent, Qty* removed_qty) {
  if (removed_qty != nullptr) *removed_qty = 0;
  std::vector<OrderId> ids;
  for (const Rest& r : rest_) {
    if (r.agent == agent) ids.push_back(r.id);
  }
  std::sort(ids.begin(), ids.end());
  std::uint32_t count = 0;
  for (OrderId id : ids) {
    Qty removed = 0;
    if (cancel(agent, id, &removed)) {
      ++count;
      if (removed_qty != nullptr) *removed_qty += removed;
    }
  }
  return count;
}

std::optional<Tick> BruteMatcher::best_bid() const {
  std::optional<Tick> best;
  for (const Rest& r : rest_) {
    if (r.side != Side::Buy) continue;
    if (!best || r.price > *best) best = r.price;
  }
  return best;
}

std::optional<Tick> BruteMatcher::best_ask() const {
  std::optional<Tick> best;
  for (const Rest& r : rest_) {
    if (r.side != Side::Sell) continue;
    if (!best || r.price < *best) best = r.price;
  }
  return best;
}

std::vector<BruteMatcher::Level> BruteMatcher::levels(Side side) const {
  std::map<Tick, Qty> agg;
  for (const Rest& r : rest_) {
    if (r.side == side) agg[r.price] += r.open_qty;
  }
  std::vector<Level> out;
  out.reserve(agg.size());
  if (side == Side::Buy) {
    for (auto it = agg.rbegin(); it != agg.rend(); ++it)
      out.push_back({it->first, it->second});
  } else {
    for (const auto& [price, vol] : agg) out.push_back({price, vol});
  }
  return out;
}

}  // namespace lobarena::testing
