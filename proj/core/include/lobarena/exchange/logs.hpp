#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "lobarena/archetype.hpp"
#include "lobarena/book/types.hpp"
#include "lobarena/util/csv.hpp"

namespace lobarena::exchange {

enum class OrderAction : std::uint8_t { Limit, Market, Cancel };

std::string_view to_string(OrderAction a);
std::optional<OrderAction> order_action_from_string(std::string_view s);

struct OrderLogRow {
  SimTime time = 0;
  AgentId agent = 0;
  ArchetypeLabel archetype = ArchetypeLabel::Background;
  OrderAction action = OrderAction::Limit;
  Side side = Side::Buy;
  Tick price = 0;  // 0 for market orders
  Qty qty = 0;
};

struct L2LogRow {
  L2Snapshot snap;
  Tick last_trade_px = 0;  // 0 until the first trade prints
};

// Receives every order event, trade, and post-mutation book state, in
// simulation order.
class MarketRecorder {
 public:
  virtual ~MarketRecorder() = default;
  virtual void on_order(const OrderLogRow& row) = 0;
  virtual void on_trade(const Trade& trade) = 0;
  virtual void on_l2(const L2LogRow& row) = 0;
};

// Writes the three run logs:
//   orders.csv  time_ns,agent_id,archetype,action,side,price_ticks,qty
//   trades.csv  time_ns,price_ticks,qty,buy_agent,sell_agent,aggressor
//   l2.csv      time_ns,bid_px_1..5,bid_vol_1..5,ask_px_1..5,ask_vol_1..5,
//               last_trade_px
class CsvMarketRecorder final : public MarketRecorder {
 public:
  CsvMarketRecorder(const std::string& orders_path,
                    const std::string& trades_path,
                    const std::string& l2_path);
  void on_order(const OrderLogRow& row) override;
  void on_trade(const Trade& trade) override;
  void on_l2(const L2LogRow& row) override;

 private:
  CsvWriter orders_;
  CsvWriter trades_;
  CsvWriter l2_;
};

class MemoryRecorder final : public MarketRecorder {
 public:
  void on_order(const OrderLogRow& row) override { orders.push_back(row); }
  void on_trade(const Trade& trade) override { trades.push_back(trade); }
  void on_l2(const L2LogRow& row) override { l2.push_back(row); }

  std::vector<OrderLogRow> orders;
  std::vector<Trade> trades;
  std::vector<L2LogRow> l2;
};

struct TradeLogRow {
  SimTime time = 0;
  Tick price = 0;
  Qty qty = 0;
  AgentId buy_agent = 0;
  AgentId sell_agent = 0;
  Side aggressor = Side::Buy;
};

// Readers for the CSV logs above. Rows come back in file order; malformed
// rows raise Error naming path and row number.
std::vector<OrderLogRow> load_orders_csv(const std::string& path);
std::vector<L2LogRow> load_l2_csv(const std::string& path);
std::vector<TradeLogRow> load_trades_csv(const std::string& path);

}  // namespace lobarena::exchange
