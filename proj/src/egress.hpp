// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <deque>
#include <optional>

#include "cbs.hpp"
#include "frame.hpp"
#include "tt_schedule.hpp"

namespace tsnsim {

/// Strict-priority egress port: TT > Stream > BestEffort, one frame in flight,
/// optional CBS on the Stream queue, optional guard band around TT windows.
class EgressPort {
 public:
  explicit EgressPort(Bandwidth link = Bandwidth{}) : link_(link) {}

  void enable_cbs(Bandwidth reserved);
  void disable_cbs() { cbs_.reset(); }
  /// Lower classes may not overlap `windows` when `guard_band` is set.
  void set_tt_windows(TtWindowSet windows, bool guard_band);

  Bandwidth link_bandwidth() const { return link_; }
  bool in_flight() const { return in_flight_; }
  SimTime busy_until() const { return busy_until_; }
  const std::optional<CbsState>& cbs() const { return cbs_; }
  const TtWindowSet& tt_windows() const { return windows_; }
  std::size_t queued(TrafficClass c) const { return queues_[static_cast<int>(c)].size(); }
  const std::deque<Frame>& queue(TrafficClass c) const { return queues_[static_cast<int>(c)]; }

  Duration line_duration(const Frame& f) const { return transmission_duration(f.wire_bits, link_, true); }

  void enqueue(const Frame& frame, SimTime now);

  struct Selection {
    std::optional<Frame> frame;      // frame whose transmission started at `now`
    Duration duration;               // its line time including IFG
    std::optional<SimTime> retry_at; // when nothing could start but frames wait
  };

  /// Picks and starts the next transmission. Requires !in_flight().
  Selection select(SimTime now);
  /// The in-flight transmission ended at `now`.
  void on_tx_complete(SimTime now);

 private:
  Bandwidth link_;
  std::array<std::deque<Frame>, kTrafficClassCount> queues_;
  std::optional<CbsState> cbs_;
  TtWindowSet windows_;
  bool guard_band_ = false;
  bool in_flight_ = false;
  TrafficClass in_flight_class_ = TrafficClass::BestEffort;
  SimTime busy_until_;
};

}  // namespace tsnsim
