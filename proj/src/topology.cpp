// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "topology.hpp"

#include <deque>
#include <numeric>

#include "scenario.hpp"

namespace tsnsim {

Topology::Topology(const Scenario& s) {
  for (const auto& d : s.devices) {
    if (index_.count(d.name)) continue;
    index_.emplace(d.name, static_cast<uint32_t>(names_.size()));
    names_.push_back(d.name);
    is_switch_.push_back(d.is_switch);
  }
  ports_.resize(names_.size());
  for (const auto& l : s.links) {
    const auto a = find(l.a);
    const auto b = find(l.b);
    if (!a || !b || *a == *b) continue;
    const auto pa = static_cast<uint32_t>(ports_[*a].size());
    const auto pb = static_cast<uint32_t>(ports_[*b].size());
    ports_[*a].push_back(Port{*b, pb, l.bandwidth, l.delay});
    ports_[*b].push_back(Port{*a, pa, l.bandwidth, l.delay});
    ++link_count_;
  }

  // BFS from every destination over reversed edges (links are symmetric).
  const auto n = names_.size();
  next_hop_.assign(n, std::vector<int32_t>(n, -1));
  for (uint32_t dst = 0; dst < n; ++dst) {
    std::vector<bool> seen(n, false);
    std::deque<uint32_t> frontier{dst};
    seen[dst] = true;
    while (!frontier.empty()) {
      const uint32_t u = frontier.front();
      frontier.pop_front();
      for (const auto& p : ports_[u]) {
        if (seen[p.peer_device]) continue;
        seen[p.peer_device] = true;
        next_hop_[p.peer_device][dst] = static_cast<int32_t>(p.peer_port);
        frontier.push_back(p.peer_device);
      }
    }
  }
}

std::optional<uint32_t> Topology::find(std::string_view name) const {
  const auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<uint32_t> Topology::port_toward_neighbour(uint32_t device, uint32_t neighbour) const {
  const auto& ps = ports_[device];
  for (uint32_t i = 0; i < ps.size(); ++i) {
    if (ps[i].peer_device == neighbour) return i;
  }
  return std::nullopt;
}

std::string Topology::port_name(uint32_t device, uint32_t port) const {
  return names_[device] + "." + names_[ports_[device][port].peer_device];
}

std::optional<uint32_t> Topology::next_hop(uint32_t device, uint32_t dst) const {
  const int32_t p = next_hop_[device][dst];
  if (p < 0) return std::nullopt;
  return static_cast<uint32_t>(p);
}

std::optional<std::vector<PortRef>> Topology::route(uint32_t src, uint32_t dst) const {
  std::vector<PortRef> hops;
  uint32_t at = src;
  while (at != dst) {
    const auto p = next_hop(at, dst);
    if (!p || hops.size() > names_.size()) return std::nullopt;
    hops.push_back(PortRef{at, *p});
    at = ports_[at][*p].peer_device;
  }
  return hops;
}

bool Topology::loop_free() const {
  // a forest has exactly (devices - components) links
  std::vector<uint32_t> parent(names_.size());
  std::iota(parent.begin(), parent.end(), 0u);
  auto root = [&](uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = names_.size();
  for (uint32_t d = 0; d < names_.size(); ++d) {
    for (const auto& p : ports_[d]) {
      const auto a = root(d), b = root(p.peer_device);
      if (a != b) {
        parent[a] = b;
        --components;
      }
    }
  }
  return link_count_ == names_.size() - components;
}

}  // namespace tsnsim
