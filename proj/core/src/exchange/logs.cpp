#include "lobarena/exchange/logs.hpp"

namespace lobarena::exchange {

std::string_view to_string(OrderAction a) {
  switch (a) {
    case OrderAction::Limit: return "LIMIT";
    case OrderAction::Market: return "MARKET";
    case OrderAction::Cancel: return "CANCEL";
  }
  return "LIMIT";
}

std::optional<OrderAction> order_action_from_string(std::string_view s) {
  if (s == "LIMIT") return OrderAction::Limit;
  if (s == "MARKET") return OrderAction::Market;
  if (s == "CANCEL") return OrderAction::Cancel;
  return std::nullopt;
}

CsvMarketRecorder::CsvMarketRecorder(const std::string& orders_path,
                                     const std::string& trades_path,
                                     const std::string& l2_path)
    : orders_(orders_path), trades_(trades_path), l2_(l2_path) {
  orders_.header({"time_ns", "agent_id", "archetype", "action", "side",
                  "price_ticks", "qty"});
  trades_.header({"time_ns", "price_ticks", "qty", "buy_agent", "sell_agent",
                  "aggressor"});
  l2_.header({"time_ns", "bid_px_1", "bid_px_2", "bid_px_3", "bid_px_4",
              "bid_px_5", "bid_vol_1", "bid_vol_2", "bid_vol_3", "bid_vol_4",
              "bid_vol_5", "ask_px_1", "ask_px_2", "ask_px_3", "ask_px_4",
              "ask_px_5", "ask_vol_1", "ask_vol_2", "ask_vol_3", "ask_vol_4",
              "ask_vol_5", "last_trade_px"});
}

void CsvMarketRecorder::on_order(const OrderLogRow& row) {
  orders_.row(row.time, static_cast<std::uint64_t>(row.agent),
              to_string(row.archetype), to_string(row.action),
              to_string(row.side), row.price, row.qty);
}

void CsvMarketRecorder::on_trade(const Trade& t) {
  trades_.row(t.time, t.price, t.qty, static_cast<std::uint64_t>(t.buy_agent),
              static_cast<std::uint64_t>(t.sell_agent),
              to_string(t.aggressor));
}

void CsvMarketRecorder::on_l2(const L2LogRow& row) {
  const L2Snapshot& s = row.snap;
  l2_.row(s.time, s.bid_price[0], s.bid_price[1], s.bid_price[2],
          s.bid_price[3], s.bid_price[4], s.bid_volume[0], s.bid_volume[1],
          s.bid_volume[2], s.bid_volume[3], s.bid_volume[4], s.ask_price[0],
          s.ask_price[1], s.ask_price[2], s.ask_price[3], s.ask_price[4],
          s.ask_volume[0], s.ask_volume[1], s.ask_volume[2], s.ask_volume[3],
          s.ask_volume[4], row.last_trade_px);
}

std::vector<OrderLogRow> load_orders_csv(const std::string& path) {
  CsvReader in(path, "time_ns,agent_id,archetype,action,side,price_ticks,qty");
  std::vector<OrderLogRow> rows;
  while (in.next()) {
    OrderLogRow row;
    row.time = in.uint_field(0);
    row.agent = static_cast<AgentId>(in.uint_field(1));
    auto arch = archetype_from_string(in.str_field(2));
    if (!arch) {
      throw Error(path, ":", in.row_number(), ": unknown archetype '",
                  in.str_field(2), "'");
    }
    row.archetype = *arch;
    auto action = order_action_from_string(in.str_field(3));
    if (!action) {
      throw Error(path, ":", in.row_number(), ": unknown action '",
                  in.str_field(3), "'");
    }
    row.action = *action;
    auto side = side_from_string(in.str_field(4));
    if (!side) {
      throw Error(path, ":", in.row_number(), ": unknown side '",
                  in.str_field(4), "'");
    }
    row.side = *side;
    row.price = in.int_field(5);
    row.qty = in.int_field(6);
    rows.push_back(row);
  }
  return rows;
}

std::vector<TradeLogRow> load_trades_csv(const std::string& path) {
  CsvReader in(path, "time_ns,price_ticks,qty,buy_agent,sell_agent,aggressor");
  std::vector<TradeLogRow> rows;
  while (in.next()) {
    TradeLogRow row;
    row.time = in.uint_field(0);
    row.price = in.int_field(1);
    row.qty = in.int_field(2);
    row.buy_agent = static_cast<AgentId>(in.uint_field(3));
    row.sell_agent = static_cast<AgentId>(in.uint_field(4));
    auto side = side_from_string(in.str_field(5));
    if (!side) {
      throw Error(path, ":", in.row_number(), ": unknown side '", in.str_field(5),
                  "'");
    }
    row.aggressor = *side;
    rows.push_back(row);
  }
  return rows;
}

std::vector<L2LogRow> load_l2_csv(const std::string& path) {
  CsvReader in(path,
               "time_ns,bid_px_1,bid_px_2,bid_px_3,bid_px_4,bid_px_5,"
               "bid_vol_1,bid_vol_2,bid_vol_3,bid_vol_4,bid_vol_5,"
               "ask_px_1,ask_px_2,ask_px_3,ask_px_4,ask_px_5,"
               "ask_vol_1,ask_vol_2,ask_vol_3,ask_vol_4,ask_vol_5,"
               "last_trade_px");
  std::vector<L2LogRow> rows;
  while (in.next()) {
    L2LogRow row;
    row.snap.time = in.uint_field(0);
    for (int i = 0; i < L2Snapshot::kDepth; ++i) {
      row.snap.bid_price[i] = in.int_field(1 + i);
      row.snap.bid_volume[i] = in.int_field(6 + i);
      row.snap.ask_price[i] = in.int_field(11 + i);
      row.snap.ask_volume[i] = in.int_field(16 + i);
    }
    row.last_trade_px = in.int_field(21);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace lobarena::exchange
