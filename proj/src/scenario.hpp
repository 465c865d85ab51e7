// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

// Declarative scenario: topology, streams, Qci configuration, traffic
// generators and run parameters. See docs/scenario-format.md for the grammar.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "frame.hpp"
#include "qci.hpp"
#include "tt_schedule.hpp"
#include "units.hpp"

namespace tsnsim {

struct RunParams {
  Duration duration = Duration::from_s(10);
  uint64_t seed = 1;
  int frame_overhead = kDefaultFrameOverheadBytes;
  Duration hist_bin = Duration::from_us(10);
  Duration bw_window = Duration::from_us(125);
  bool strict_unmatched = false;
  bool attack = false;
  friend bool operator==(const RunParams&, const RunParams&) = default;
};

struct DeviceSpec {
  std::string name;
  bool is_switch = false;
  friend bool operator==(const DeviceSpec&, const DeviceSpec&) = default;
};

struct LinkSpec {
  std::string a, b;
  Bandwidth bandwidth = Bandwidth::mbps(100);
  Duration delay;
  friend bool operator==(const LinkSpec&, const LinkSpec&) = default;
};

struct StreamSpec {
  StreamId id = 0;
  std::string src, dst;
  Bandwidth reserved;
  int payload = 0;
  friend bool operator==(const StreamSpec&, const StreamSpec&) = default;
};

struct GateSpec {
  std::string name;
  StreamGate gate;
  friend bool operator==(const GateSpec&, const GateSpec&) = default;
};

struct MeterSpec {
  std::string name;
  int burst_max = 1;
  bool trace = false;
  friend bool operator==(const MeterSpec&, const MeterSpec&) = default;
};

struct FilterSpec {
  std::string device;     // switch holding the filter
  std::string port_peer;  // ingress port, named by the neighbour on its link
  StreamId stream = 0;
  std::string gate, meter;
  friend bool operator==(const FilterSpec&, const FilterSpec&) = default;
};

struct TalkerSpec {
  StreamId stream = 0;
  std::optional<Bandwidth> rate;  // defaults to the stream's reservation
  Duration offset;
  friend bool operator==(const TalkerSpec&, const TalkerSpec&) = default;
};

struct TtFlowSpec {
  std::string src, dst;
  Duration period;
  Duration offset;
  int payload = kMaxPayloadBytes;
  friend bool operator==(const TtFlowSpec&, const TtFlowSpec&) = default;
};

struct BeBroadcastSpec {
  std::string src;
  Duration period;
  Duration offset;
  int payload = kMaxPayloadBytes;
  friend bool operator==(const BeBroadcastSpec&, const BeBroadcastSpec&) = default;
};

struct BeReplySpec {
  Duration jitter;  // uniform reply delay in [0, jitter]
  int payload = kMaxPayloadBytes;
  friend bool operator==(const BeReplySpec&, const BeReplySpec&) = default;
};

struct AttackerSpec {
  std::string node;
  StreamId stream = 0;
  Bandwidth rate = Bandwidth::mbps(100);  // offered input bandwidth in line bits
  Duration offset;
  friend bool operator==(const AttackerSpec&, const AttackerSpec&) = default;
};

/// Explicit CBS setting for one egress port ("<device>.<peer>"). Ports without
/// an entry shape their Stream queue at the sum of the reservations routed
/// through them.
struct CbsSpec {
  std::string device;
  std::string port_peer;
  bool enabled = true;
  std::optional<Bandwidth> idleslope;
  friend bool operator==(const CbsSpec&, const CbsSpec&) = default;
};

struct TtParams {
  Duration gap = Duration::from_us(123);
  bool guard_band = true;
  friend bool operator==(const TtParams&, const TtParams&) = default;
};

struct SweepParams {
  std::vector<Bandwidth> rates;
  std::string meter;
  friend bool operator==(const SweepParams&, const SweepParams&) = default;
};

struct Scenario {
  RunParams run;
  std::vector<DeviceSpec> devices;
  std::vector<LinkSpec> links;
  std::vector<StreamSpec> streams;
  std::vector<GateSpec> gates;
  std::vector<MeterSpec> meters;
  std::vector<FilterSpec> filters;
  std::vector<TalkerSpec> talkers;
  std::vector<TtFlowSpec> tt_flows;
  std::optional<BeBroadcastSpec> be_broadcast;
  std::optional<BeReplySpec> be_reply;
  std::optional<AttackerSpec> attacker;
  std::vector<CbsSpec> shapers;
  TtParams tt;
  SweepParams sweep;

  const DeviceSpec* find_device(std::string_view name) const;
  const StreamSpec* find_stream(StreamId id) const;
  const MeterSpec* find_meter(std::string_view name) const;
  const GateSpec* find_gate(std::string_view name) const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Parses scenario text. Throws ParseError (with line number) on syntax errors.
/// Defaults are applied; semantic checks are left to validate_scenario.
Scenario parse_scenario(std::string_view text);

/// Reads and parses a scenario file.
Scenario load_scenario(const std::string& path);

/// Canonical text form; parse_scenario(to_text(s)) == s.
std::string to_text(const Scenario& s);

class Topology;

/// A meter resolved against the topology: where it sits and what it meters.
struct MeterBinding {
  CbmParams params;
  uint32_t device = 0;
  uint32_t port = 0;
  std::vector<StreamId> streams;
};

/// Resolves a meter referenced by at least one filter. RB accumulates over the
/// referencing streams; FS_stream is the largest of their frames. Returns
/// nullopt (with a reason in `error`) when the meter cannot be bound.
std::optional<MeterBinding> bind_meter(const Scenario& s, const Topology& topo, const MeterSpec& meter,
                                       std::string* error = nullptr);

/// Nominal per-hop TT windows of every TT flow.
std::vector<TtFlowPlan> build_tt_plans(const Scenario& s, const Topology& topo);

struct ValidationReport {
  std::vector<std::string> warnings;
};

/// Throws ConfigError listing every violation; returns non-fatal warnings.
ValidationReport validate_scenario(const Scenario& s);

}  // namespace tsnsim
