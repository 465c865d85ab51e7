// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Talks to the simulator only through the C API.

#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tsnsim/tsnsim.h"

namespace {

struct ScenarioDeleter {
  void operator()(tsnsim_scenario* s) const { tsnsim_scenario_free(s); }
};
struct ResultDeleter {
  void operator()(tsnsim_result* r) const { tsnsim_result_free(r); }
};
struct SweepDeleter {
  void operator()(tsnsim_sweep* w) const { tsnsim_sweep_free(w); }
};
using ScenarioPtr = std::unique_ptr<tsnsim_scenario, ScenarioDeleter>;

int report_failure(tsnsim_status status, const char* what) {
  std::fprintf(stderr, "tsnsim: %s: %s\n", what, tsnsim_last_error());
  return tsnsim_exit_code(status);
}

struct Common {
  std::string scenario;
  std::string out_dir;
  std::string duration;
  std::string seed;
  std::string attack;
};

// Loads the scenario and applies command-line overrides. Returns an exit code, 0 on success.
int load(const Common& c, ScenarioPtr& out) {
  tsnsim_scenario* raw = nullptr;
  if (auto st = tsnsim_scenario_load(c.scenario.c_str(), &raw); st != TSNSIM_OK) {
    return report_failure(st, c.scenario.c_str());
  }
  out.reset(raw);
  if (!c.duration.empty()) {
    int64_t ns = 0;
    if (auto st = tsnsim_parse_duration(c.duration.c_str(), &ns); st != TSNSIM_OK) return report_failure(st, "--duration");
    if (auto st = tsnsim_scenario_set_duration_ns(raw, ns); st != TSNSIM_OK) return report_failure(st, "--duration");
  }
  if (!c.seed.empty()) {
    char* end = nullptr;
    const unsigned long long seed = std::strtoull(c.seed.c_str(), &end, 10);
    if (end == c.seed.c_str() || *end != '\0') {
      std::fprintf(stderr, "tsnsim: --seed: not a number: %s\n", c.seed.c_str());
      return 1;
    }
    tsnsim_scenario_set_seed(raw, seed);
  }
  if (!c.attack.empty()) tsnsim_scenario_set_attack(raw, c.attack == "on" ? 1 : 0);
  return 0;
}

int validate_and_warn(tsnsim_scenario* s) {
  size_t warnings = 0;
  if (auto st = tsnsim_scenario_validate(s, &warnings); st != TSNSIM_OK) return report_failure(st, "invalid scenario");
  for (size_t i = 0; i < warnings; ++i) std::fprintf(stderr, "warning: %s\n", tsnsim_scenario_warning(s, i));
  return 0;
}

std::string default_out_dir() {
  const char* env = std::getenv("TSNSIM_OUT_DIR");
  return env && *env ? env : "out";
}

int cmd_validate(const Common& c) {
  ScenarioPtr s;
  if (int rc = load(c, s)) return rc;
  if (int rc = validate_and_warn(s.get())) return rc;
  tsnsim_scenario_info info{};
  tsnsim_scenario_describe(s.get(), &info);
  std::printf("ok: %zu nodes, %zu switches, %zu links, %zu streams, %zu meters\n", info.nodes, info.switches,
              info.links, info.streams, info.meters);
  return 0;
}

int cmd_run(const Common& c) {
  ScenarioPtr s;
  if (int rc = load(c, s)) return rc;
  if (int rc = validate_and_warn(s.get())) return rc;
  tsnsim_result* raw = nullptr;
  if (auto st = tsnsim_run(s.get(), &raw); st != TSNSIM_OK) return report_failure(st, "run failed");
  std::unique_ptr<tsnsim_result, ResultDeleter> r(raw);
  const std::string dir = c.out_dir.empty() ? default_out_dir() : c.out_dir;
  if (auto st = tsnsim_result_write(r.get(), dir.c_str()); st != TSNSIM_OK) return report_failure(st, "write failed");

  size_t needed = 0;
  tsnsim_result_report(r.get(), nullptr, 0, &needed);
  std::string text(needed, '\0');
  tsnsim_result_report(r.get(), text.data(), text.size(), nullptr);
  // print the summary block only; the echoed scenario lives in report.txt
  size_t pos = 0;
  while (pos < text.size() && text[pos] == '#') {
    const size_t nl = text.find('\n', pos);
    std::fwrite(text.data() + pos, 1, (nl == std::string::npos ? text.size() : nl + 1) - pos, stdout);
    if (nl == std::string::npos) break;
    pos = nl + 1;
  }
  std::printf("outputs written to %s\n", dir.c_str());
  return 0;
}

int cmd_sweep(const Common& c, const std::vector<std::string>& rate_text, int workers) {
  ScenarioPtr s;
  if (int rc = load(c, s)) return rc;
  if (int rc = validate_and_warn(s.get())) return rc;
  std::vector<int64_t> rates;
  for (const auto& t : rate_text) {
    int64_t bps = 0;
    if (auto st = tsnsim_parse_bandwidth(t.c_str(), &bps); st != TSNSIM_OK) return report_failure(st, "--rates");
    rates.push_back(bps);
  }
  tsnsim_sweep* raw = nullptr;
  const auto st = tsnsim_sweep_run(s.get(), rates.empty() ? nullptr : rates.data(), rates.size(), workers, &raw);
  if (st != TSNSIM_OK) return report_failure(st, "sweep failed");
  std::unique_ptr<tsnsim_sweep, SweepDeleter> w(raw);
  const std::string dir = c.out_dir.empty() ? default_out_dir() : c.out_dir;
  if (auto ws = tsnsim_sweep_write(w.get(), dir.c_str()); ws != TSNSIM_OK) return report_failure(ws, "write failed");

  int rc = 0;
  std::printf("%14s %16s %14s\n", "input_bps", "output_bps", "drops_per_s");
  for (size_t i = 0; i < tsnsim_sweep_size(w.get()); ++i) {
    tsnsim_sweep_point p{};
    tsnsim_sweep_point_at(w.get(), i, &p);
    if (p.failed) {
      std::fprintf(stderr, "tsnsim: point %zu failed: %s\n", i, tsnsim_sweep_point_error(w.get(), i));
      rc = 2;
      continue;
    }
    std::printf("%14lld %16.1f %14.1f\n", static_cast<long long>(p.input_bps), p.output_bps, p.drops_per_second);
  }
  std::printf("outputs written to %s\n", dir.c_str());
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-event TSN simulator with 802.1Qci credit based metering"};
  app.set_version_flag("--version", tsnsim_version());
  app.require_subcommand(1);

  Common common;
  std::vector<std::string> rates;
  int workers = 1;

  auto add_common = [&](CLI::App* sub, bool outputs) {
    sub->add_option("scenario", common.scenario, "Scenario file")->required();
    sub->add_option("--duration", common.duration, "Override the simulated duration, e.g. 10s");
    sub->add_option("--seed", common.seed, "Override the base seed");
    sub->add_option("--attack", common.attack, "Enable or disable the attacker")
        ->check(CLI::IsMember({"on", "off"}));
    if (outputs) sub->add_option("-o,--out", common.out_dir, "Output directory (default $TSNSIM_OUT_DIR or ./out)");
  };

  auto* validate = app.add_subcommand("validate", "Check a scenario and list warnings");
  add_common(validate, false);
  auto* run = app.add_subcommand("run", "Run one simulation and write CSVs and report.txt");
  add_common(run, true);
  auto* sweep = app.add_subcommand("sweep", "Sweep the attacker input bandwidth");
  add_common(sweep, true);
  sweep->add_option("--rates", rates, "Input bandwidths, e.g. 5M,10M (default: the scenario's list)")->delimiter(',');
  sweep->add_option("--workers", workers, "Concurrent runs")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  if (validate->parsed()) return cmd_validate(common);
  if (run->parsed()) return cmd_run(common);
  return cmd_sweep(common, rates, workers);
}
