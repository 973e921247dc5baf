#include "lobarena/sim/kernel.hpp"

#include "lobarena/util/error.hpp"
#include "lobarena/util/hash.hpp"

namespace lobarena::sim {

Kernel::Kernel(SimTime window_start, SimTime window_end, LatencyModel latency)
    : window_start_(window_start),
      window_end_(window_end),
      latency_(std::move(latency)),
      now_(window_start),
      trace_hash_(kFnvOffset) {
  if (window_end_ < window_start_)
    throw Error("kernel window end ", window_end_, " before start ",
                window_start_);
}

void Kernel::register_agent(Agent* agent) {
  if (agent == nullptr) throw Error("register_agent: null agent");
  if (started_)
    throw Error("register_agent after start: ", agent->name());
  auto [it, inserted] = agents_.emplace(agent->id(), agent);
  (void)it;
  if (!inserted)
    throw Error("duplicate agent id ", agent->id(), " (", agent->name(), ")");
  registration_order_.push_back(agent);
}

Agent& Kernel::agent(AgentId id) const {
  auto it = agents_.find(id);
  if (it == agents_.end()) throw Error("unknown agent id ", id);
  return *it->second;
}

void Kernel::schedule(Envelope env) {
  if (env.deliver_at < now_)
    throw Error("schedule in the past: deliver_at=", env.deliver_at,
                " now=", now_, " recipient=", env.recipient);
  env.seq = next_seq_++;
  queue_.push(std::move(env));
}

bool Kernel::wakeup_at(AgentId agent_id, SimTime t, std::uint64_t tag) {
  if (t < window_start_ || t > window_end_) {
    dropped_wakeups_.emplace_back(agent_id, t);
    return false;
  }
  Envelope env;
  env.deliver_at = t;
  env.sender = agent_id;
  env.recipient = agent_id;
  env.payload = WakeupMsg{tag};
  schedule(std::move(env));
  return true;
}

SimTime Kernel::deliver(AgentId sender, AgentId recipient, Payload payload) {
  if (!has_agent(sender)) throw Error("deliver from unknown agent ", sender);
  if (!has_agent(recipient))
    throw Error("deliver to unknown agent ", recipient);
  Envelope env;
  env.deliver_at = latency_.deliver_at(now_, sender, recipient);
  env.sender = sender;
  env.recipient = recipient;
  env.payload = std::move(payload);
  SimTime at = env.deliver_at;
  schedule(std::move(env));
  return at;
}

void Kernel::start() {
  if (started_) return;
  started_ = true;
  for (Agent* a : registration_order_) a->on_start(*this);
}

void Kernel::process(const Envelope& env) {
  now_ = env.deliver_at;
  ++delivered_count_;
  trace_hash_ = fnv1a64(trace_hash_, env.deliver_at);
  trace_hash_ = fnv1a64(trace_hash_, static_cast<std::uint64_t>(env.sender));
  trace_hash_ = fnv1a64(trace_hash_, static_cast<std::uint64_t>(env.recipient));
  trace_hash_ = fnv1a64(trace_hash_, payload_kind(env.payload));
  if (trace_ != nullptr) trace_->on_deliver(env);
  agent(env.recipient).on_message(*this, env);
}

std::uint64_t Kernel::run(SimTime until) {
  start();
  std::uint64_t processed = 0;
  while (!queue_.empty() && queue_.top().deliver_at <= until) {
    Envelope env = queue_.top();
    queue_.pop();
    process(env);
    ++processed;
  }
  if (until > now_) now_ = until;
  return processed;
}

std::uint64_t Kernel::run_all() {
  start();
  std::uint64_t processed = 0;
  while (!queue_.empty()) {
    Envelope env = queue_.top();
    queue_.pop();
    process(env);
    ++processed;
  }
  return processed;
}

}  // namespace lobarena::sim
