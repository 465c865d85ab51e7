// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

// Time-triggered schedule: nominal TT transmission windows per egress port,
// overlap/gap validation, and the guard band that keeps lower classes out of
// those windows.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "units.hpp"

namespace tsnsim {

struct TtWindow {
  Duration start;  // offset within the cycle
  Duration length;
  friend bool operator==(const TtWindow&, const TtWindow&) = default;
};

/// Sorted, non-overlapping TT windows repeating every `cycle`.
class TtWindowSet {
 public:
  TtWindowSet() = default;
  /// Windows may wrap past the cycle end; they are split. Throws ConfigError on overlap.
  TtWindowSet(Duration cycle, std::vector<TtWindow> windows);

  bool empty() const { return windows_.empty(); }
  Duration cycle() const { return cycle_; }
  const std::vector<TtWindow>& windows() const { return windows_; }

  /// Earliest t' >= t such that [t', t' + length) touches no window; the
  /// largest SimTime if no gap is long enough.
  SimTime next_permitted_start(SimTime t, Duration length) const;
  /// Longest TT-silent stretch of the cycle, wrapping around.
  Duration max_gap() const;

 private:
  Duration cycle_;
  std::vector<TtWindow> windows_;
};

/// One hop of a TT flow: the port it leaves by and its nominal window there.
struct TtHop {
  std::string port;
  bool switch_output = false;
  Duration offset;  // window start relative to the flow's period start
  Duration length;
};

struct TtFlowPlan {
  std::string name;
  Duration period;
  std::vector<TtHop> hops;
};

struct TtSchedule {
  Duration cycle;  // hyperperiod of all flows
  std::map<std::string, TtWindowSet> ports;
};

/// Builds per-port windows over the hyperperiod. Throws ConfigError if two TT
/// windows overlap on a port or a switch output keeps no TT-silent gap of at
/// least `required_gap`.
TtSchedule tt_schedule(const std::vector<TtFlowPlan>& flows, Duration required_gap);

}  // namespace tsnsim
