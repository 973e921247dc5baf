#include "lobarena/book/order_book.hpp"

#include <algorithm>

#include "lobarena/util/error.hpp"

namespace lobarena {

namespace {

// Priority within a level: earlier entry first, then larger entry size,
// then lower id (ids are assigned in submission order).
bool higher_priority(const OrderBook::Resting& a, const OrderBook::Resting& b) {
  if (a.entry_time != b.entry_time) return a.entry_time < b.entry_time;
  if (a.entry_qty != b.entry_qty) return a.entry_qty > b.entry_qty;
  return a.id < b.id;
}

}  // namespace

template <class Book>
Qty OrderBook::match_against(Book& book, std::optional<Tick> limit,
                             AgentId taker, OrderId taker_id, Side taker_side,
                             Qty qty, SimTime now,
                             std::vector<Trade>* trades) {
  while (qty > 0 && !book.empty()) {
    auto level_it = book.begin();
    Tick level_price = level_it->first;
    if (limit) {
      bool compatible = taker_side == Side::Buy ? level_price <= *limit
                                                : level_price >= *limit;
      if (!compatible) break;
    }
    Level& level = level_it->second;
    while (qty > 0 && !level.queue.empty()) {
      Resting& maker = level.queue.front();
      Qty fill = std::min(qty, maker.open_qty);
      maker.open_qty -= fill;
      qty -= fill;
      Trade t;
      t.time = now;
      t.price = level_price;
      t.qty = fill;
      t.aggressor = taker_side;
      t.buy_agent = taker_side == Side::Buy ? taker : maker.agent;
      t.sell_agent = taker_side == Side::Sell ? taker : maker.agent;
      t.maker_order = maker.id;
      t.taker_order = taker_id;
      t.maker_remaining = maker.open_qty;
      trades->push_back(t);
      if (maker.open_qty == 0) {
        drop_from_index(maker.id, maker.agent);
        level.queue.erase(level.queue.begin());
      }
    }
    if (level.queue.empty()) book.erase(level_it);
  }
  return qty;
}

void OrderBook::rest_order(Side side, Tick price, Resting r) {
  Level* level;
  if (side == Side::Buy)
    level = &bids_[price];
  else
    level = &asks_[price];
  auto pos = std::upper_bound(level->queue.begin(), level->queue.end(), r,
                              higher_priority);
  OrderId id = r.id;
  AgentId agent = r.agent;
  level->queue.insert(pos, std::move(r));
  index_[id] = Locator{side, price};
  by_owner_[agent].insert(id);
}

void OrderBook::drop_from_index(OrderId id, AgentId owner) {
  index_.erase(id);
  auto owner_it = by_owner_.find(owner);
  if (owner_it == by_owner_.end()) return;
  owner_it->second.erase(id);
  if (owner_it->second.empty()) by_owner_.erase(owner_it);
}

OrderBook::SubmitResult OrderBook::submit_limit(AgentId agent, Side side,
                                                Tick price, Qty qty,
                                                SimTime now) {
  SubmitResult res;
  if (qty <= 0) {
    res.reason = sim::RejectReason::BadQty;
    return res;
  }
  if (price <= 0) {
    res.reason = sim::RejectReason::BadPrice;
    return res;
  }
  res.order_id = next_id_++;
  res.accepted = true;
  Qty remaining;
  if (side == Side::Buy)
    remaining = match_against(asks_, price, agent, res.order_id, side, qty,
                              now, &res.trades);
  else
    remaining = match_against(bids_, price, agent, res.order_id, side, qty,
                              now, &res.trades);
  if (remaining > 0) {
    Resting r;
    r.id = res.order_id;
    r.agent = agent;
    r.open_qty = remaining;
    r.entry_time = now;
    r.entry_qty = remaining;  // priority size is what actually rested
    rest_order(side, price, std::move(r));
    res.resting_qty = remaining;
  }
  return res;
}

OrderBook::SubmitResult OrderBook::submit_market(AgentId agent, Side side,
                                                 Qty qty, SimTime now) {
  SubmitResult res;
  if (qty <= 0) {
    res.reason = sim::RejectReason::BadQty;
    return res;
  }
  res.order_id = next_id_++;
  Qty remaining;
  if (side == Side::Buy)
    remaining = match_against(asks_, std::nullopt, agent, res.order_id, side,
                              qty, now, &res.trades);
  else
    remaining = match_against(bids_, std::nullopt, agent, res.order_id, side,
                              qty, now, &res.trades);
  res.cancelled_qty = remaining;
  if (res.trades.empty()) {
    res.reason = sim::RejectReason::NoLiquidity;
    return res;
  }
  res.accepted = true;
  return res;
}

bool OrderBook::cancel(AgentId agent, OrderId id, Qty* removed_qty) {
  if (removed_qty != nullptr) *removed_qty = 0;
  auto it = index_.find(id);
  if (it == index_.end()) return false;
  Locator loc = it->second;
  Level* level = nullptr;
  if (loc.side == Side::Buy) {
    auto lvl = bids_.find(loc.price);
    if (lvl != bids_.end()) level = &lvl->second;
  } else {
    auto lvl = asks_.find(loc.price);
    if (lvl != asks_.end()) level = &lvl->second;
  }
  if (level == nullptr) return false;
  auto pos = std::find_if(level->queue.begin(), level->queue.end(),
                          [&](const Resting& r) { return r.id == id; });
  if (pos == level->queue.end()) return false;
  if (pos->agent != agent) return false;
  if (removed_qty != nullptr) *removed_qty = pos->open_qty;
  level->queue.erase(pos);
  index_.erase(id);
  auto owner_it = by_owner_.find(agent);
  if (owner_it != by_owner_.end()) {
    owner_it->second.erase(id);
    if (owner_it->second.empty()) by_owner_.erase(owner_it);
  }
  if (level->queue.empty()) {
    if (loc.side == Side::Buy)
      bids_.erase(loc.price);
    else
      asks_.erase(loc.price);
  }
  return true;
}

OrderBook::CancelAllResult OrderBook::cancel_all(AgentId agent) {
  CancelAllResult res;
  auto owner_it = by_owner_.find(agent);
  if (owner_it == by_owner_.end()) return res;
  // Copy: cancel() mutates the owner set. Ascending id order for determinism.
  std::vector<OrderId> ids(owner_it->second.begin(), owner_it->second.end());
  for (OrderId id : ids) {
    Qty removed = 0;
    if (cancel(agent, id, &removed)) {
      ++res.orders;
      res.qty += removed;
    }
  }
  return res;
}

std::optional<Tick> OrderBook::best_bid() const {
  if (bids_.empty()) return std::nullopt;
  return bids_.begin()->first;
}

std::optional<Tick> OrderBook::best_ask() const {
  if (asks_.empty()) return std::nullopt;
  return asks_.begin()->first;
}

L2Snapshot OrderBook::snapshot_l2(SimTime time) const {
  L2Snapshot snap;
  snap.time = time;
  int i = 0;
  for (const auto& [price, level] : bids_) {
    if (i >= L2Snapshot::kDepth) break;
    Qty vol = 0;
    for (const Resting& r : level.queue) vol += r.open_qty;
    snap.bid_price[i] = price;
    snap.bid_volume[i] = vol;
    ++i;
  }
  i = 0;
  for (const auto& [price, level] : asks_) {
    if (i >= L2Snapshot::kDepth) break;
    Qty vol = 0;
    for (const Resting& r : level.queue) vol += r.open_qty;
    snap.ask_price[i] = price;
    snap.ask_volume[i] = vol;
    ++i;
  }
  return snap;
}

std::optional<OrderBook::OrderInfo> OrderBook::find(OrderId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  const Locator& loc = it->second;
  const Level* level = nullptr;
  if (loc.side == Side::Buy) {
    auto lvl = bids_.find(loc.price);
    if (lvl != bids_.end()) level = &lvl->second;
  } else {
    auto lvl = asks_.find(loc.price);
    if (lvl != asks_.end()) level = &lvl->second;
  }
  if (level == nullptr) return std::nullopt;
  for (const Resting& r : level->queue)
    if (r.id == id)
      return OrderInfo{r.agent, loc.side, loc.price, r.open_qty};
  return std::nullopt;
}

Qty OrderBook::open_qty(OrderId id) const {
  auto info = find(id);
  return info ? info->open_qty : 0;
}

const std::set<OrderId>* OrderBook::orders_of(AgentId agent) const {
  auto it = by_owner_.find(agent);
  if (it == by_owner_.end()) return nullptr;
  return &it->second;
}

}  // namespace lobarena
