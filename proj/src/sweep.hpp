// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "metrics.hpp"
#include "scenario.hpp"
#include "simulation.hpp"

namespace tsnsim {

struct RunResult {
  Scenario effective;
  ValidationReport report;
  MetricsStore metrics;
};

/// Validates, applies overrides and simulates. Throws ConfigError on invalid input.
RunResult run_once(const Scenario& s, const RunOverrides& overrides = {});

/// CSV files plus report.txt: summary lines followed by the effective scenario.
void write_run_outputs(const RunResult& r, const std::string& dir);

/// report.txt content; loading it back reproduces the run.
std::string report_text(const RunResult& r);

/// One attacked run per rate, seed = base seed + index, at most `workers` at a
/// time. Points that fail carry their error; the others are still reported.
std::vector<SweepPoint> run_sweep(const Scenario& s, const std::vector<Bandwidth>& rates, int workers,
                                  const RunOverrides& overrides = {});

/// Output bandwidth and drop rate of `meter` in a finished run.
SweepPoint sweep_point_of(const MetricsStore& m, const std::string& meter, Bandwidth input);

}  // namespace tsnsim
