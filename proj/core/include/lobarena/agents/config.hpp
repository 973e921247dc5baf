#pragma once

#include <cstdint>

#include "lobarena/book/types.hpp"
#include "lobarena/util/time.hpp"

namespace lobarena::agents {

struct NoiseConfig {
  // Per-day order size is drawn uniformly from this range (the strategy
  // itself uses one fixed q per day).
  Qty q_min = 10;
  Qty q_max = 100;
};

struct ValueConfig {
  double lambda_a_ns = 300.0 * 1e9;  // mean inter-arrival
  int delta_s = 2;                   // spread depth multiplier
  Qty q = 100;                       // order size
  double xi = 0.3;                   // inside-spread probability
  double sigma_n = 50.0;             // observation noise variance, ticks^2
};

struct MarketMakerConfig {
  double lambda_a_ns = 10.0 * 1e9;
  Qty q_max = 50;  // >= 2, even; half per side
  int delta_s = 5; // maximum half-spread in ticks
};

struct ExecutionOrderConfig {
  Qty parent_qty = 2000;
  Side side = Side::Buy;
  SimTime t_start = 0;
  SimTime t_end = 0;
  int n_slots = 24;
};

enum class DirectionalMode : std::uint8_t { Momentum, MeanReversion };

struct DirectionalConfig {
  DirectionalMode mode = DirectionalMode::Momentum;
  int short_window = 20;  // samples on the 1-minute grid
  int long_window = 50;
  Qty q_max = 50;
};

}  // namespace lobarena::agents
