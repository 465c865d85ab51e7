// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

// Network model: nodes and switches built from a scenario, traffic
// generators, Qci ingress at every switch, strict-priority egress everywhere.

#pragma once

#include <memory>
#include <optional>

#include "metrics.hpp"
#include "scenario.hpp"

namespace tsnsim {

struct RunOverrides {
  std::optional<Duration> duration;
  std::optional<uint64_t> seed;
  std::optional<bool> attack;
  std::optional<Bandwidth> attacker_rate;
};

/// `s` with the overrides applied; this is the effective configuration of a run.
Scenario apply_overrides(Scenario s, const RunOverrides& o);

/// Runs one scenario for its configured duration. The scenario must pass
/// validate_scenario. Throws InternalError on broken invariants.
MetricsStore simulate(const Scenario& s);

}  // namespace tsnsim
