#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "lobarena/book/types.hpp"
#include "lobarena/sim/messages.hpp"

namespace lobarena {

// Price-then-FIFO limit order book with a size tie-break: within one price
// level, priority is (entry_time asc, entry_qty desc, entry_seq asc), frozen
// at entry. Trades print at the resting order's limit price.
class OrderBook {
 public:
  struct Resting {
    OrderId id = 0;
    AgentId agent = 0;
    Qty open_qty = 0;
    SimTime entry_time = 0;
    Qty entry_qty = 0;  // priority key uses the size at entry, not open qty
  };

  struct SubmitResult {
    OrderId order_id = 0;
    bool accepted = false;
    sim::RejectReason reason = sim::RejectReason::None;
    std::vector<Trade> trades;
    Qty resting_qty = 0;    // residual that rested (limit orders)
    Qty cancelled_qty = 0;  // market-order remainder thrown away
  };

  struct CancelAllResult {
    std::uint32_t orders = 0;
    Qty qty = 0;
  };

  SubmitResult submit_limit(AgentId agent, Side side, Tick price, Qty qty,
                            SimTime now);
  SubmitResult submit_market(AgentId agent, Side side, Qty qty, SimTime now);

  // True iff an open order owned by `agent` was removed. `removed_qty`, if
  // given, receives the open quantity taken off the book.
  bool cancel(AgentId agent, OrderId id, Qty* removed_qty = nullptr);

  // Removes every open order owned by `agent`, ascending by order id.
  CancelAllResult cancel_all(AgentId agent);

  std::optional<Tick> best_bid() const;
  std::optional<Tick> best_ask() const;
  L2Snapshot snapshot_l2(SimTime time) const;

  struct OrderInfo {
    AgentId agent = 0;
    Side side = Side::Buy;
    Tick price = 0;
    Qty open_qty = 0;
  };
  std::optional<OrderInfo> find(OrderId id) const;

  Qty open_qty(OrderId id) const;  // 0 if not resting
  std::size_t open_order_count() const { return index_.size(); }
  const std::set<OrderId>* orders_of(AgentId agent) const;

 private:
  struct Level {
    std::vector<Resting> queue;  // priority order, front matched first
  };

  using BidMap = std::map<Tick, Level, std::greater<Tick>>;
  using AskMap = std::map<Tick, Level, std::less<Tick>>;

  struct Locator {
    Side side = Side::Buy;
    Tick price = 0;
  };

  template <class Book>
  Qty match_against(Book& book, std::optional<Tick> limit, AgentId taker,
                    OrderId taker_id, Side taker_side, Qty qty, SimTime now,
                    std::vector<Trade>* trades);
  void rest_order(Side side, Tick price, Resting r);
  void drop_from_index(OrderId id, AgentId owner);

  BidMap bids_;
  AskMap asks_;
  std::unordered_map<OrderId, Locator> index_;
  std::unordered_map<AgentId, std::set<OrderId>> by_owner_;
  OrderId next_id_ = 1;
};

}  // namespace lobarena
