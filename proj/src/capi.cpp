// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cstring>
#include <memory>
#include <exception>
#include <string>
#include <vector>

#include "errors.hpp"
#include "scenario.hpp"
#include "sweep.hpp"
#include "topology.hpp"
#include "tsnsim/tsnsim.h"

struct tsnsim_scenario {
  tsnsim::Scenario scenario;
  std::vector<std::string> warnings;
};

struct tsnsim_result {
  tsnsim::RunResult run;
  std::string report;
};

struct tsnsim_sweep {
  std::vector<tsnsim::SweepPoint> points;
};

namespace {

thread_local std::string last_error;

tsnsim_status fail(tsnsim_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs `fn`, translating exceptions into status codes.
template <class F>
tsnsim_status guarded(F&& fn) {
  try {
    return fn();
  } catch (const tsnsim::ConfigError& e) {
    return fail(TSNSIM_ERR_CONFIG, e.what());
  } catch (const tsnsim::InternalError& e) {
    return fail(TSNSIM_ERR_RUNTIME, e.what());
  } catch (const std::bad_alloc&) {
    return fail(TSNSIM_ERR_RUNTIME, "out of memory");
  } catch (const std::exception& e) {
    return fail(TSNSIM_ERR_RUNTIME, e.what());
  }
}

tsnsim_status copy_out(const std::string& text, char* buf, size_t cap, size_t* needed) {
  if (needed) *needed = text.size() + 1;
  if (buf && cap > 0) {
    const size_t n = std::min(cap - 1, text.size());
    std::memcpy(buf, text.data(), n);
    buf[n] = '\0';
  }
  return TSNSIM_OK;
}

#define TSNSIM_REQUIRE(cond, what) \
  if (!(cond)) return fail(TSNSIM_ERR_INVALID_ARGUMENT, what)

}  // namespace

extern "C" {

const char* tsnsim_version(void) { return "1.0.0"; }

const char* tsnsim_last_error(void) { return last_error.c_str(); }

int tsnsim_exit_code(tsnsim_status status) {
  switch (status) {
    case TSNSIM_OK: return 0;
    case TSNSIM_ERR_CONFIG: return 1;
    default: return 2;
  }
}

tsnsim_status tsnsim_parse_duration(const char* text, int64_t* out_ns) {
  TSNSIM_REQUIRE(text && out_ns, "null argument");
  return guarded([&] {
    *out_ns = tsnsim::parse_duration(text).ns;
    return TSNSIM_OK;
  });
}

tsnsim_status tsnsim_parse_bandwidth(const char* text, int64_t* out_bps) {
  TSNSIM_REQUIRE(text && out_bps, "null argument");
  return guarded([&] {
    *out_bps = tsnsim::parse_bandwidth(text).bps;
    return TSNSIM_OK;
  });
}

tsnsim_status tsnsim_scenario_load(const char* path, tsnsim_scenario** out) {
  TSNSIM_REQUIRE(path && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto h = std::make_unique<tsnsim_scenario>();
    h->scenario = tsnsim::load_scenario(path);
    *out = h.release();
    return TSNSIM_OK;
  });
}

tsnsim_status tsnsim_scenario_parse(const char* text, tsnsim_scenario** out) {
  TSNSIM_REQUIRE(text && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto h = std::make_unique<tsnsim_scenario>();
    h->scenario = tsnsim::parse_scenario(text);
    *out = h.release();
    return TSNSIM_OK;
  });
}

void tsnsim_scenario_free(tsnsim_scenario* s) { delete s; }

tsnsim_status tsnsim_scenario_set_duration_ns(tsnsim_scenario* s, int64_t duration_ns) {
  TSNSIM_REQUIRE(s, "null scenario");
  TSNSIM_REQUIRE(duration_ns >= 0, "duration must be >= 0");
  s->scenario.run.duration = tsnsim::Duration(duration_ns);
  return TSNSIM_OK;
}

tsnsim_status tsnsim_scenario_set_seed(tsnsim_scenario* s, uint64_t seed) {
  TSNSIM_REQUIRE(s, "null scenario");
  s->scenario.run.seed = seed;
  return TSNSIM_OK;
}

tsnsim_status tsnsim_scenario_set_attack(tsnsim_scenario* s, int enabled) {
  TSNSIM_REQUIRE(s, "null scenario");
  s->scenario.run.attack = enabled != 0;
  return TSNSIM_OK;
}

tsnsim_status tsnsim_scenario_validate(tsnsim_scenario* s, size_t* warning_count) {
  TSNSIM_REQUIRE(s, "null scenario");
  return guarded([&] {
    s->warnings = tsnsim::validate_scenario(s->scenario).warnings;
    if (warning_count) *warning_count = s->warnings.size();
    return TSNSIM_OK;
  });
}

const char* tsnsim_scenario_warning(const tsnsim_scenario* s, size_t index) {
  if (!s || index >= s->warnings.size()) return nullptr;
  return s->warnings[index].c_str();
}

tsnsim_status tsnsim_scenario_describe(const tsnsim_scenario* s, tsnsim_scenario_info* out) {
  TSNSIM_REQUIRE(s && out, "null argument");
  const auto& sc = s->scenario;
  *out = tsnsim_scenario_info{};
  for (const auto& d : sc.devices) (d.is_switch ? out->switches : out->nodes)++;
  out->links = sc.links.size();
  out->streams = sc.streams.size();
  out->meters = sc.meters.size();
  out->duration_ns = sc.run.duration.ns;
  out->seed = sc.run.seed;
  out->attack = sc.run.attack ? 1 : 0;
  return TSNSIM_OK;
}

tsnsim_status tsnsim_scenario_to_text(const tsnsim_scenario* s, char* buf, size_t cap, size_t* needed) {
  TSNSIM_REQUIRE(s, "null scenario");
  return guarded([&] { return copy_out(tsnsim::to_text(s->scenario), buf, cap, needed); });
}

tsnsim_status tsnsim_run(const tsnsim_scenario* s, tsnsim_result** out) {
  TSNSIM_REQUIRE(s && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto h = std::make_unique<tsnsim_result>();
    h->run = tsnsim::run_once(s->scenario);
    h->report = tsnsim::report_text(h->run);
    *out = h.release();
    return TSNSIM_OK;
  });
}

void tsnsim_result_free(tsnsim_result* r) { delete r; }

tsnsim_status tsnsim_result_stream(const tsnsim_result* r, uint32_t stream, tsnsim_stream_stats* out) {
  TSNSIM_REQUIRE(r && out, "null argument");
  const auto& streams = r->run.metrics.streams;
  const auto it = streams.find(stream);
  TSNSIM_REQUIRE(it != streams.end(), "unknown stream " + std::to_string(stream));
  const auto& st = it->second;
  out->generated = st.generated;
  out->delivered = st.delivered;
  out->dropped_meter = st.dropped_meter;
  out->dropped_gate = st.dropped_gate;
  out->dropped_no_filter = st.dropped_no_filter;
  out->in_flight = st.in_flight;
  out->latency_min_ns = st.latency.min() ? st.latency.min()->ns : -1;
  out->latency_max_ns = st.latency.max() ? st.latency.max()->ns : -1;
  return TSNSIM_OK;
}

tsnsim_status tsnsim_result_meter(const tsnsim_result* r, const char* meter, tsnsim_meter_stats* out) {
  TSNSIM_REQUIRE(r && meter && out, "null argument");
  const auto* m = r->run.metrics.find_meter(meter);
  TSNSIM_REQUIRE(m, std::string("unknown meter ") + meter);
  out->accepted_frames = m->accepted_frames;
  out->accepted_line_bits = m->accepted_bits;
  out->dropped_frames = m->dropped_frames;
  out->credit_max_nanobits = m->credit_max;
  out->reserved_bps = m->reserved_bps;
  return TSNSIM_OK;
}

tsnsim_status tsnsim_result_burst(const tsnsim_result* r, const char* port, uint32_t stream, int* out) {
  TSNSIM_REQUIRE(r && port && out, "null argument");
  TSNSIM_REQUIRE(r->run.metrics.ports.count(port), std::string("unknown port ") + port);
  *out = r->run.metrics.port_stream_burst(port, stream);
  return TSNSIM_OK;
}

tsnsim_status tsnsim_result_latency_bins(const tsnsim_result* r, uint32_t stream, int64_t* edges_ns,
                                         uint64_t* counts, size_t cap, size_t* needed) {
  TSNSIM_REQUIRE(r, "null result");
  const auto& streams = r->run.metrics.streams;
  const auto it = streams.find(stream);
  TSNSIM_REQUIRE(it != streams.end(), "unknown stream " + std::to_string(stream));
  const auto& h = it->second.latency;
  size_t n = 0;
  if (!h.bins().empty()) n = static_cast<size_t>(h.bins().rbegin()->first - h.bins().begin()->first + 1);
  if (needed) *needed = n;
  const int64_t first = n ? h.bins().begin()->first : 0;
  for (size_t i = 0; i < n && i < cap; ++i) {
    const int64_t bin = first + static_cast<int64_t>(i);
    if (edges_ns) edges_ns[i] = bin * h.bin_width().ns;
    if (counts) counts[i] = h.count_in(bin);
  }
  return TSNSIM_OK;
}

uint64_t tsnsim_result_trace_hash(const tsnsim_result* r) { return r ? r->run.metrics.trace_hash : 0; }

uint64_t tsnsim_result_events(const tsnsim_result* r) { return r ? r->run.metrics.events : 0; }

tsnsim_status tsnsim_result_write(const tsnsim_result* r, const char* dir) {
  TSNSIM_REQUIRE(r && dir, "null argument");
  try {
    tsnsim::write_run_outputs(r->run, dir);
    return TSNSIM_OK;
  } catch (const std::exception& e) {
    return fail(TSNSIM_ERR_IO, e.what());
  }
}

tsnsim_status tsnsim_result_report(const tsnsim_result* r, char* buf, size_t cap, size_t* needed) {
  TSNSIM_REQUIRE(r, "null result");
  return copy_out(r->report, buf, cap, needed);
}

tsnsim_status tsnsim_sweep_run(const tsnsim_scenario* s, const int64_t* rates_bps, size_t count, int workers,
                               tsnsim_sweep** out) {
  TSNSIM_REQUIRE(s && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    tsnsim::validate_scenario(s->scenario);
    std::vector<tsnsim::Bandwidth> rates;
    if (rates_bps) {
      for (size_t i = 0; i < count; ++i) rates.emplace_back(rates_bps[i]);
    } else {
      rates = s->scenario.sweep.rates;
    }
    if (rates.empty()) throw tsnsim::ConfigError("sweep has no rates");
    auto h = std::make_unique<tsnsim_sweep>();
    h->points = tsnsim::run_sweep(s->scenario, rates, workers);
    *out = h.release();
    return TSNSIM_OK;
  });
}

void tsnsim_sweep_free(tsnsim_sweep* w) { delete w; }

size_t tsnsim_sweep_size(const tsnsim_sweep* w) { return w ? w->points.size() : 0; }

tsnsim_status tsnsim_sweep_point_at(const tsnsim_sweep* w, size_t index, tsnsim_sweep_point* out) {
  TSNSIM_REQUIRE(w && out, "null argument");
  TSNSIM_REQUIRE(index < w->points.size(), "sweep index out of range");
  const auto& p = w->points[index];
  out->input_bps = p.input.bps;
  out->output_bps = p.output_bps;
  out->drops_per_second = p.drops_per_second;
  out->accepted = p.accepted;
  out->dropped = p.dropped;
  out->failed = p.error ? 1 : 0;
  return TSNSIM_OK;
}

const char* tsnsim_sweep_point_error(const tsnsim_sweep* w, size_t index) {
  if (!w || index >= w->points.size() || !w->points[index].error) return nullptr;
  return w->points[index].error->c_str();
}

tsnsim_status tsnsim_sweep_write(const tsnsim_sweep* w, const char* dir) {
  TSNSIM_REQUIRE(w && dir, "null argument");
  try {
    tsnsim::export_sweep_csv(w->points, dir);
    return TSNSIM_OK;
  } catch (const std::exception& e) {
    return fail(TSNSIM_ERR_IO, e.what());
  }
}

}  // extern "C"
