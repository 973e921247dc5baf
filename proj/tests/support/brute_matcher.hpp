#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lobarena/book/types.hpp"

namespace lobarena::testing {

// Deliberately naive reference matcher. Resting orders live in one flat
// vector; every fill rescans the whole vector for the best counterparty
// under (price, entry time, entry size desc, order id). No indexes, no
// shared code with the production book, so the two can be replayed side by
// side as independent implementations of the same matching rules.
class BruteMatcher {
 public:
  struct SubmitResult {
    OrderId order_id = 0;
    bool accepted = false;
    std::vector<Trade> trades;
    Qty resting_qty = 0;
    Qty cancelled_qty = 0;
  };

  struct Level {
    Tick price = 0;
    Qty volume = 0;
  };

  SubmitResult submit_limit(AgentId agent, Side side, Tick price, Qty qty,
                            SimTime now);
  SubmitResult submit_market(AgentId agent, Side side, Qty qty, SimTime now);

  bool cancel(AgentId agent, OrderId id, Qty* removed_qty = nullptr);
  std::uint32_t cancel_all(AgentId agent, Qty* removed_qty = nullptr);

  std::optional<Tick> best_bid() const;
  std::optional<Tick> best_ask() const;
  std::size_t open_order_count() const { return rest_.size(); }

  // Aggregated depth, best price first.
  std::vector<Level> levels(Side side) const;

 private:
  struct Rest {
    OrderId id = 0;
    AgentId agent = 0;
    Side side = Side::Buy;
    Tick price = 0;
    Qty open_qty = 0;
    SimTime entry_time = 0;
    Qty entry_qty = 0;
  };

  // Index into rest_ of the highest-priority order matchable by a taker on
  // `taker_side` bounded by `limit` (no bound for market orders).
  std::optional<std::size_t> best_match(Side taker_side,
                                        std::optional<Tick> limit) const;
  Qty run_match(AgentId taker, OrderId taker_id, Side taker_side, Qty qty,
                std::optional<Tick> limit, SimTime now,
                std::vector<Trade>* trades);

  std::vector<Rest> rest_;
  OrderId next_id_ = 1;
};

}  // namespace lobarena::testing
