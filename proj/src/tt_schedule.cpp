// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "tt_schedule.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "errors.hpp"

namespace tsnsim {

namespace {

constexpr int64_t kMaxCycleNs = 1000000000;

int64_t mod(int64_t a, int64_t m) { return ((a % m) + m) % m; }

}  // namespace

TtWindowSet::TtWindowSet(Duration cycle, std::vector<TtWindow> windows) : cycle_(cycle) {
  if (cycle.ns <= 0) throw ConfigError("TT cycle must be positive");
  for (const auto& w : windows) {
    if (w.length.ns <= 0) continue;
    if (w.length > cycle) throw ConfigError("TT window longer than its cycle");
    const int64_t s = mod(w.start.ns, cycle.ns);
    const int64_t e = s + w.length.ns;
    if (e <= cycle.ns) {
      windows_.push_back({Duration(s), w.length});
    } else {
      windows_.push_back({Duration(s), Duration(cycle.ns - s)});
      windows_.push_back({Duration(0), Duration(e - cycle.ns)});
    }
  }
  std::sort(windows_.begin(), windows_.end(), [](const TtWindow& a, const TtWindow& b) { return a.start < b.start; });
  for (std::size_t i = 1; i < windows_.size(); ++i) {
    if (windows_[i - 1].start + windows_[i - 1].length > windows_[i].start) {
      throw ConfigError("overlapping TT windows at offset " + format_duration(windows_[i].start));
    }
  }
}

SimTime TtWindowSet::next_permitted_start(SimTime t, Duration length) const {
  if (windows_.empty()) return t;
  if (length > max_gap()) return SimTime(std::numeric_limits<int64_t>::max());
  // Each step either returns or jumps past a window end, so this terminates.
  for (;;) {
    const int64_t base = t.ns - mod(t.ns, cycle_.ns);
    bool moved = false;
    for (int64_t b : {base, base + cycle_.ns}) {
      for (const auto& w : windows_) {
        const int64_t ws = b + w.start.ns;
        const int64_t we = ws + w.length.ns;
        if (we <= t.ns) continue;
        if (t.ns + length.ns <= ws) return t;
        t = SimTime(we);
        moved = true;
        break;
      }
      if (moved) break;
    }
    if (!moved) return t;
  }
}

Duration TtWindowSet::max_gap() const {
  if (windows_.empty()) return cycle_;
  int64_t best = 0;
  for (std::size_t i = 0; i < windows_.size(); ++i) {
    const int64_t end = windows_[i].start.ns + windows_[i].length.ns;
    const int64_t next = i + 1 < windows_.size() ? windows_[i + 1].start.ns : windows_[0].start.ns + cycle_.ns;
    best = std::max(best, next - end);
  }
  return Duration(best);
}

TtSchedule tt_schedule(const std::vector<TtFlowPlan>& flows, Duration required_gap) {
  TtSchedule out;
  if (flows.empty()) return out;
  int64_t cycle = 1;
  for (const auto& f : flows) {
    if (f.period.ns <= 0) throw ConfigError("TT flow " + f.name + " needs a positive period");
    cycle = std::lcm(cycle, f.period.ns);
    if (cycle > kMaxCycleNs) throw ConfigError("TT hyperperiod exceeds 1s");
  }
  out.cycle = Duration(cycle);

  std::map<std::string, std::vector<TtWindow>> per_port;
  std::map<std::string, bool> is_switch_output;
  for (const auto& f : flows) {
    for (const auto& hop : f.hops) {
      auto& list = per_port[hop.port];
      is_switch_output[hop.port] = hop.switch_output;
      for (int64_t k = 0; k < cycle / f.period.ns; ++k) {
        list.push_back({hop.offset + f.period * k, hop.length});
      }
    }
  }

  std::vector<std::string> errors;
  for (auto& [port, list] : per_port) {
    try {
      TtWindowSet set(out.cycle, std::move(list));
      if (is_switch_output[port] && set.max_gap() < required_gap) {
        errors.push_back("TT schedule leaves no " + format_duration(required_gap) + " gap on port " + port +
                         " (longest gap " + format_duration(set.max_gap()) + ")");
      }
      out.ports.emplace(port, std::move(set));
    } catch (const ConfigError& e) {
      errors.push_back(std::string(e.what()) + " on port " + port);
    }
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return out;
}

}  // namespace tsnsim
