// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "units.hpp"

namespace tsnsim {

struct Scenario;

struct PortRef {
  uint32_t device = 0;
  uint32_t port = 0;
  friend bool operator==(const PortRef&, const PortRef&) = default;
};

/// Devices, their ports and shortest-path routing, derived from the scenario's
/// device and link lists. Ports are numbered per device in link order; a port
/// is named "<device>.<neighbour>".
class Topology {
 public:
  struct Port {
    uint32_t peer_device = 0;
    uint32_t peer_port = 0;
    Bandwidth bandwidth;
    Duration delay;
  };

  /// Links naming unknown devices are skipped; validate_scenario reports them.
  explicit Topology(const Scenario& s);

  std::size_t device_count() const { return names_.size(); }
  std::optional<uint32_t> find(std::string_view name) const;
  const std::string& name(uint32_t device) const { return names_[device]; }
  bool is_switch(uint32_t device) const { return is_switch_[device]; }
  const std::vector<Port>& ports(uint32_t device) const { return ports_[device]; }
  std::optional<uint32_t> port_toward_neighbour(uint32_t device, uint32_t neighbour) const;
  std::string port_name(uint32_t device, uint32_t port) const;

  /// Output port at `device` on the shortest path to `dst`, or nullopt.
  std::optional<uint32_t> next_hop(uint32_t device, uint32_t dst) const;
  /// Egress ports visited from src to dst, in order; nullopt if unreachable.
  std::optional<std::vector<PortRef>> route(uint32_t src, uint32_t dst) const;
  /// True if the link graph has no cycles (broadcast flooding terminates).
  bool loop_free() const;

 private:
  std::vector<std::string> names_;
  std::vector<bool> is_switch_;
  std::unordered_map<std::string, uint32_t> index_;
  std::vector<std::vector<Port>> ports_;
  std::vector<std::vector<int32_t>> next_hop_;  // [device][dst] -> port or -1
  std::size_t link_count_ = 0;
};

}  // namespace tsnsim
