// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "sweep.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "errors.hpp"

namespace tsnsim {

RunResult run_once(const Scenario& s, const RunOverrides& overrides) {
  RunResult r;
  r.effective = apply_overrides(s, overrides);
  r.report = validate_scenario(r.effective);
  r.metrics = simulate(r.effective);
  return r;
}

std::string report_text(const RunResult& r) {
  std::string out = summary_text(r.metrics);
  for (const auto& w : r.report.warnings) out += "# warning " + w + "\n";
  out += "# effective scenario follows\n\n";
  out += to_text(r.effective);
  return out;
}

void write_run_outputs(const RunResult& r, const std::string& dir) {
  export_csv(r.metrics, dir);
  write_text_file(dir, "report.txt", report_text(r));
}

SweepPoint sweep_point_of(const MetricsStore& m, const std::string& meter, Bandwidth input) {
  SweepPoint p;
  p.input = input;
  const MeterStats* ms = m.find_meter(meter);
  if (!ms) {
    p.error = "meter " + meter + " not present in the run";
    return p;
  }
  p.accepted = ms->accepted_frames;
  p.dropped = ms->dropped_frames;
  const double secs = static_cast<double>(m.duration.ns) / 1e9;
  if (secs > 0) {
    p.output_bps = static_cast<double>(ms->accepted_bits) / secs;
    p.drops_per_second = static_cast<double>(ms->dropped_frames) / secs;
  }
  return p;
}

std::vector<SweepPoint> run_sweep(const Scenario& s, const std::vector<Bandwidth>& rates, int workers,
                                  const RunOverrides& overrides) {
  if (!s.attacker) throw ConfigError("sweep needs an attacker");
  if (s.sweep.meter.empty()) throw ConfigError("sweep needs a meter");
  const Scenario base = apply_overrides(s, overrides);
  std::vector<SweepPoint> points(rates.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= rates.size()) return;
      RunOverrides o;
      o.seed = base.run.seed + i;
      o.attack = true;
      o.attacker_rate = rates[i];
      try {
        const RunResult r = run_once(base, o);
        points[i] = sweep_point_of(r.metrics, base.sweep.meter, rates[i]);
      } catch (const std::exception& e) {
        points[i].input = rates[i];
        points[i].error = e.what();
      }
    }
  };
  const int n = std::clamp<int>(workers, 1, static_cast<int>(std::max<std::size_t>(rates.size(), 1)));
  std::vector<std::thread> pool;
  for (int w = 0; w < n; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return points;
}

}  // namespace tsnsim
