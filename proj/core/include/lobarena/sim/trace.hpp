#pragma once

#include <fstream>
#include <string>

#include "lobarena/sim/messages.hpp"

namespace lobarena::sim {

// Observes every delivered message, in delivery order.
class TraceSink {
 public:
  virtual ~TraceSink() = default;
  virtual void on_deliver(const Envelope& env) = 0;
};

// Newline-delimited JSON, one object per delivered message:
//   {"time_ns":..., "sender":..., "recipient":..., "kind":"..."}
class NdjsonTrace final : public TraceSink {
 public:
  explicit NdjsonTrace(const std::string& path);
  void on_deliver(const Envelope& env) override;

 private:
  std::ofstream out_;
};

}  // namespace lobarena::sim
