// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

// 802.1Qci per-stream filtering and policing: stream filter -> stream gate ->
// flow meter. One IngressPolicer instance sits behind every switch port set.

#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cbm.hpp"
#include "frame.hpp"

namespace tsnsim {

enum class GateState { Open, Closed };

struct GateScheduleEntry {
  Duration offset;
  GateState state = GateState::Open;
  friend bool operator==(const GateScheduleEntry&, const GateScheduleEntry&) = default;
};

/// OPEN/CLOSED gate, optionally cycling through a static schedule on the global clock.
struct StreamGate {
  GateState state = GateState::Open;
  Duration period;
  std::vector<GateScheduleEntry> schedule;

  GateState state_at(SimTime t) const;
  /// Offsets strictly increasing and inside [0, period).
  void validate() const;

  friend bool operator==(const StreamGate&, const StreamGate&) = default;
};

using GateIndex = std::size_t;
using MeterIndex = std::size_t;

struct StreamFilter {
  StreamId stream = 0;
  GateIndex gate = 0;
  MeterIndex meter = 0;
};

enum class DropReason { GateClosed, MeterExceeded, NoFilter };

const char* to_string(DropReason r);

struct IngressDecision {
  bool enqueue = true;
  DropReason reason = DropReason::NoFilter;  // meaningful when !enqueue
  std::optional<MeterIndex> meter;           // meter that accepted the frame, if any
};

/// Observer for credit-affecting meter events: (meter, time, state after the event).
using MeterObserver = std::function<void(MeterIndex, SimTime, const CbmState&)>;

class IngressPolicer {
 public:
  GateIndex add_gate(StreamGate gate);
  MeterIndex add_meter(const CbmParams& params);
  /// Exactly one filter per (port, stream); gate and meter must exist.
  void add_filter(std::size_t port, StreamFilter filter);

  /// Stream-class frames without a filter row are dropped instead of passed.
  void set_strict_unmatched(bool strict) { strict_unmatched_ = strict; }
  void set_observer(MeterObserver observer) { observer_ = std::move(observer); }

  /// First bit of `frame` on `port`. Gate and meter are consulted here.
  IngressDecision on_frame_start(std::size_t port, const Frame& frame, SimTime now, Duration line_duration);
  /// End of an accepted reception window on `meter`.
  void on_frame_end(MeterIndex meter, SimTime now);

  const CbmState& meter_state(MeterIndex m) const { return meters_.at(m); }
  std::size_t meter_count() const { return meters_.size(); }
  const StreamFilter* find_filter(std::size_t port, StreamId stream) const;

 private:
  std::vector<StreamGate> gates_;
  std::vector<CbmState> meters_;
  std::map<std::pair<std::size_t, StreamId>, StreamFilter> filters_;
  bool strict_unmatched_ = false;
  MeterObserver observer_;
};

}  // namespace tsnsim
