// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <optional>

#include "units.hpp"

namespace tsnsim {

using NodeId = uint32_t;
using StreamId = uint32_t;

inline constexpr NodeId kBroadcast = std::numeric_limits<NodeId>::max();

/// Default bytes added to a payload on the wire (preamble, SFD, FCS framing).
inline constexpr int kDefaultFrameOverheadBytes = 20;
inline constexpr int kMinPayloadBytes = 42;
inline constexpr int kMaxPayloadBytes = 1500;

/// Egress priority classes, highest first.
enum class TrafficClass : uint8_t { TimeTriggered = 0, Stream = 1, BestEffort = 2 };

inline constexpr int kTrafficClassCount = 3;

inline constexpr int64_t wire_bits_for(int payload_bytes, int overhead_bytes) {
  return 8 * static_cast<int64_t>(payload_bytes + overhead_bytes);
}

struct Frame {
  std::optional<StreamId> stream;  // set iff traffic_class == Stream
  TrafficClass traffic_class = TrafficClass::BestEffort;
  int payload_bytes = 0;
  int64_t wire_bits = 0;
  NodeId src_node = 0;
  NodeId dst_node = 0;
  SimTime created_at;
  uint64_t seq = 0;

  friend bool operator==(const Frame&, const Frame&) = default;
};

}  // namespace tsnsim
