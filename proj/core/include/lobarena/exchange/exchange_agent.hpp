#pragma once

#include <unordered_map>
#include <utility>
#include <vector>

#include "lobarena/book/order_book.hpp"
#include "lobarena/exchange/logs.hpp"
#include "lobarena/sim/agent.hpp"
#include "lobarena/sim/kernel.hpp"

namespace lobarena::exchange {

// Liquidity resting on the book before the open, owned by the exchange
// itself. Offsets are ticks from the seed mid; each entry places one bid at
// mid - offset and one ask at mid + offset.
struct BookSeed {
  Tick mid = 0;
  std::vector<std::pair<Tick, Qty>> levels;  // (offset, qty)

  static BookSeed standard(Tick mid);
};

// The exchange: owns the book, matches incoming order messages, acks and
// fills counterparties, and records the three run logs. One L2 row is
// written after every book mutation, plus one at the open.
class ExchangeAgent final : public sim::Agent {
 public:
  ExchangeAgent(AgentId id, SimTime t_open, SimTime t_close,
                MarketRecorder* recorder);

  void set_archetype(AgentId agent, ArchetypeLabel label);
  ArchetypeLabel archetype_of(AgentId agent) const;

  // Must run before the kernel starts; seeded orders bypass the logs.
  void seed_book(const BookSeed& seed);

  OrderBook& book() { return book_; }
  const OrderBook& book() const { return book_; }
  SimTime t_open() const { return t_open_; }
  SimTime t_close() const { return t_close_; }

  void on_start(sim::Kernel& kernel) override;
  void on_message(sim::Kernel& kernel, const sim::Envelope& env) override;

 private:
  bool market_open(SimTime now) const {
    return now >= t_open_ && now <= t_close_;
  }
  void emit_fills(sim::Kernel& kernel, const OrderBook::SubmitResult& res,
                  AgentId taker, Side taker_side, Qty submitted_qty);
  void log_l2(SimTime now);

  void handle_limit(sim::Kernel& kernel, const sim::Envelope& env);
  void handle_market(sim::Kernel& kernel, const sim::Envelope& env);
  void handle_cancel(sim::Kernel& kernel, const sim::Envelope& env);
  void handle_cancel_all(sim::Kernel& kernel, const sim::Envelope& env);

  OrderBook book_;
  SimTime t_open_;
  SimTime t_close_;
  MarketRecorder* recorder_;
  std::unordered_map<AgentId, ArchetypeLabel> archetypes_;
  Tick last_trade_px_ = 0;
};

}  // namespace lobarena::exchange
