#include "support/replay.hpp"

#include <sstream>
#include <vector>

#include "lobarena/book/order_book.hpp"
#include "lobarena/util/rng.hpp"
#include "support/brute_matcher.hpp"

namespace lobarena::testing {
namespace {

std::string describe_trade(const Trade& t) {
  std::ostringstream os;
  os << t.qty << "@" << t.price << " buy=" << t.buy_agent
     << " sell=" << t.sell_agent << " aggr=" << to_string(t.aggressor)
     << " maker#" << t.maker_order << " taker#" << t.taker_order
     << " maker_rem=" << t.maker_remaining << " t=" << t.time;
  return os.str();
}

bool trades_equal(const Trade& a, const Trade& b) {
  return a.time == b.time && a.price == b.price && a.qty == b.qty &&
         a.buy_agent == b.buy_agent && a.sell_agent == b.sell_agent &&
         a.aggressor == b.aggressor && a.maker_order == b.maker_order &&
         a.taker_order == b.taker_order && a.maker_remaining == b.maker_remaining;
}

}  // namespace

std::string replay_sequence(std::uint64_t seed, const ReplayParams& params) {
  Rng rng(seed);
  OrderBook book;
  BruteMatcher oracle;
  std::vector<OrderId> known_ids;  // every id ever issued, live or not
  SimTime now = 1;

  const int ops = 1 + static_cast<int>(rng.uniform_below(
                          static_cast<std::uint64_t>(params.max_ops)));
  std::ostringstream log;

  auto fail = [&](int op, const std::string& what) {
    std::ostringstream os;
    os << "seed " << seed << " op " << op << ": " << what << "\n  history:\n"
       << log.str();
    return os.str();
  };

  auto compare_trades = [&](int op, const std::vector<Trade>& got,
                            const std::vector<Trade>& want) -> std::string {
    if (got.size() != want.size()) {
      return fail(op, "trade count " + std::to_string(got.size()) + " vs oracle " +
                          std::to_string(want.size()));
    }
    for (std::size_t i = 0; i < got.size(); ++i) {
      if (!trades_equal(got[i], want[i])) {
        return fail(op, "trade " + std::to_string(i) + ": book [" +
                            describe_trade(got[i]) + "] vs oracle [" +
                            describe_trade(want[i]) + "]");
      }
    }
    return "";
  };

  for (int op = 0; op < ops; ++op) {
    // Hold the clock still about half the time so (price, time) ties are
    // common and the size tie-break actually gets exercised.
    if (rng.bernoulli(0.5)) now += 1 + rng.uniform_below(3);

    const auto agent =
        static_cast<AgentId>(1 + rng.uniform_below(static_cast<std::uint64_t>(params.agents)));
    const Side side = rng.bernoulli(0.5) ? Side::Buy : Side::Sell;
    const auto price = static_cast<Tick>(
        params.price_lo +
        static_cast<Tick>(rng.uniform_below(
            static_cast<std::uint64_t>(params.price_hi - params.price_lo + 1))));
    const auto qty = static_cast<Qty>(1 + rng.uniform_below(
                                              static_cast<std::uint64_t>(params.max_qty)));

    const std::uint64_t kind = rng.uniform_below(100);
    if (kind < 55) {
      log << "  limit agent=" << agent << " " << to_string(side) << " " << qty
          << "@" << price << " t=" << now << "\n";
      const auto got = book.submit_limit(agent, side, price, qty, now);
      const auto want = oracle.submit_limit(agent, side, price, qty, now);
      if (got.order_id != want.order_id)
        return fail(op, "limit order_id mismatch");
      if (got.accepted != want.accepted) return fail(op, "limit accepted mismatch");
      if (got.resting_qty != want.resting_qty)
        return fail(op, "limit resting_qty mismatch");
      if (auto err = compare_trades(op, got.trades, want.trades); !err.empty())
        return err;
      if (got.accepted) known_ids.push_back(got.order_id);
    } else if (kind < 75) {
      log << "  market agent=" << agent << " " << to_string(side) << " " << qty
          << " t=" << now << "\n";
      const auto got = book.submit_market(agent, side, qty, now);
      const auto want = oracle.submit_market(agent, side, qty, now);
      if (got.order_id != want.order_id)
        return fail(op, "market order_id mismatch");
      if (got.accepted != want.accepted)
        return fail(op, "market accepted mismatch");
      if (got.cancelled_qty != want.cancelled_qty)
        return fail(op, "market cancelled_qty mismatch");
      if (auto err = compare_trades(op, got.trades, want.trades); !err.empty())
        return err;
    } else if (kind < 90) {
      if (known_ids.empty()) continue;
      const OrderId target =
          known_ids[rng.uniform_below(known_ids.size())];
      log << "  cancel agent=" << agent << " #" << target << "\n";
      Qty got_removed = 0;
      Qty want_removed = 0;
      const bool got = book.cancel(agent, target, &got_removed);
      const bool want = oracle.cancel(agent, target, &want_removed);
      if (got != want) return fail(op, "cancel result mismatch");
      if (got_removed != want_removed) return fail(op, "cancel qty mismatch");
    } else {
      log << "  cancel_all agent=" << agent << "\n";
      Qty want_removed = 0;
      const auto got = book.cancel_all(agent);
      const std::uint32_t want = oracle.cancel_all(agent, &want_removed);
      if (got.orders != want) return fail(op, "cancel_all count mismatch");
      if (got.qty != want_removed) return fail(op, "cancel_all qty mismatch");
    }

    // Cross-check quoted state and the no-crossed-book invariant after
    // every operation.
    if (book.best_bid() != oracle.best_bid()) return fail(op, "best_bid mismatch");
    if (book.best_ask() != oracle.best_ask()) return fail(op, "best_ask mismatch");
    const auto bb = book.best_bid();
    const auto ba = book.best_ask();
    if (bb && ba && *bb >= *ba) return fail(op, "crossed book at rest");
    if (book.open_order_count() != oracle.open_order_count())
      return fail(op, "open order count mismatch");
  }

  // Final depth comparison over the full book, both sides.
  for (const Side side : {Side::Buy, Side::Sell}) {
    const auto want = oracle.levels(side);
    const L2Snapshot snap = book.snapshot_l2(now);
    const auto& px = side == Side::Buy ? snap.bid_price : snap.ask_price;
    const auto& vol = side == Side::Buy ? snap.bid_volume : snap.ask_volume;
    for (int i = 0; i < L2Snapshot::kDepth; ++i) {
      const auto k = static_cast<std::size_t>(i);
      const Tick want_px = k < want.size() ? want[k].price : 0;
      const Qty want_vol = k < want.size() ? want[k].volume : 0;
      if (px[k] != want_px || vol[k] != want_vol) {
        return fail(ops, "final depth mismatch on " +
                             std::string(to_string(side)) + " level " +
                             std::to_string(i));
      }
    }
  }
  return "";
}

}  // namespace lobarena::testing
