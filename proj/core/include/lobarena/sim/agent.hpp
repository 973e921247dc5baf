#pragma once

#include <string>

#include "lobarena/sim/messages.hpp"

namespace lobarena::sim {

class Kernel;

class Agent {
 public:
  Agent(AgentId id, std::string name) : id_(id), name_(std::move(name)) {}
  virtual ~Agent() = default;

  AgentId id() const { return id_; }
  const std::string& name() const { return name_; }

  // Called once when the kernel starts, before any message is delivered.
  virtual void on_start(Kernel& kernel) { (void)kernel; }

  // Called for every delivered message addressed to this agent (wakeups
  // included; they arrive as WakeupMsg envelopes from the agent itself).
  virtual void on_message(Kernel& kernel, const Envelope& env) = 0;

 private:
  AgentId id_;
  std::string name_;
};

}  // namespace lobarena::sim
