// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

// Deterministic discrete-event core. Events run in (at, seq) order where seq
// is assigned at insertion, so equal-time events fire in insertion order.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "frame.hpp"

namespace tsnsim {

enum class EventKind : uint8_t { FrameStartRx, FrameEndRx, TxComplete, GeneratorFire, ScheduleTick, StatsFlush };

struct Event {
  SimTime at;
  uint64_t seq = 0;
  EventKind kind = EventKind::StatsFlush;
  uint32_t target = 0;  // component id (device or generator)
  uint32_t port = 0;
  Frame frame;
};

/// Handle returned by schedule(); cancelling a fired event is a no-op.
struct EventToken {
  uint64_t seq = UINT64_MAX;
  bool valid() const { return seq != UINT64_MAX; }
};

class EventQueue {
 public:
  /// Throws InternalError if `at` lies before the current clock.
  EventToken schedule(SimTime at, EventKind kind, uint32_t target, uint32_t port = 0, Frame frame = {});
  void cancel(EventToken token);

  /// Next live event, advancing the clock; nullopt when empty.
  std::optional<Event> pop();
  /// Time of the next live event.
  std::optional<SimTime> peek_time();

  SimTime now() const { return now_; }
  bool empty();
  /// Visits every live pending event (unordered).
  void for_each_pending(const std::function<void(const Event&)>& fn) const;

 private:
  bool is_cancelled(uint64_t seq) const { return seq < cancelled_.size() && cancelled_[seq]; }
  void drop_cancelled_top();

  std::vector<Event> heap_;
  std::vector<bool> cancelled_;
  uint64_t next_seq_ = 0;
  SimTime now_;
};

/// Run loop: dispatches events with at < end and folds every dispatched event
/// into a trace hash so repeated runs can be compared.
class Engine {
 public:
  using Handler = std::function<void(const Event&)>;

  EventQueue& queue() { return queue_; }
  SimTime now() const { return queue_.now(); }

  /// Processes all events strictly before `end`.
  void run_until(SimTime end, const Handler& handler);

  uint64_t trace_hash() const { return trace_hash_; }
  uint64_t events_processed() const { return processed_; }

 private:
  EventQueue queue_;
  uint64_t trace_hash_ = 1469598103934665603ull;
  uint64_t processed_ = 0;
};

}  // namespace tsnsim
