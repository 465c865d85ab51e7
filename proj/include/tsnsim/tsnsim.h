/* Copyright 2026 The tsnsim Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the tsnsim simulator. All handles are opaque. Every call
 * returning tsnsim_status leaves a message in tsnsim_last_error() when it
 * fails; the message is per thread and valid until the next failing call.
 */

#ifndef TSNSIM_TSNSIM_H_
#define TSNSIM_TSNSIM_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TSNSIM_API __declspec(dllexport)
#else
#define TSNSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tsnsim_status {
  TSNSIM_OK = 0,
  TSNSIM_ERR_CONFIG = 1,           /* parse or validation failure */
  TSNSIM_ERR_RUNTIME = 2,          /* simulator invariant broken */
  TSNSIM_ERR_INVALID_ARGUMENT = 3, /* null handle, unknown name, bad index */
  TSNSIM_ERR_IO = 4                /* output could not be written */
} tsnsim_status;

typedef struct tsnsim_scenario tsnsim_scenario;
typedef struct tsnsim_result tsnsim_result;
typedef struct tsnsim_sweep tsnsim_sweep;

typedef struct tsnsim_scenario_info {
  size_t nodes;
  size_t switches;
  size_t links;
  size_t streams;
  size_t meters;
  int64_t duration_ns;
  uint64_t seed;
  int attack;
} tsnsim_scenario_info;

typedef struct tsnsim_stream_stats {
  uint64_t generated;
  uint64_t delivered;
  uint64_t dropped_meter;
  uint64_t dropped_gate;
  uint64_t dropped_no_filter;
  uint64_t in_flight;
  int64_t latency_min_ns; /* -1 when nothing was delivered */
  int64_t latency_max_ns;
} tsnsim_stream_stats;

typedef struct tsnsim_meter_stats {
  uint64_t accepted_frames;
  uint64_t accepted_line_bits;
  uint64_t dropped_frames;
  int64_t credit_max_nanobits;
  int64_t reserved_bps;
} tsnsim_meter_stats;

typedef struct tsnsim_sweep_point {
  int64_t input_bps;
  double output_bps;
  double drops_per_second;
  uint64_t accepted;
  uint64_t dropped;
  int failed; /* nonzero if this point's run failed */
} tsnsim_sweep_point;

TSNSIM_API const char* tsnsim_version(void);
TSNSIM_API const char* tsnsim_last_error(void);
/* Process exit code for a status: 0 ok, 1 configuration, 2 anything else. */
TSNSIM_API int tsnsim_exit_code(tsnsim_status status);

/* Text forms used in scenario files: "10s", "125us", "25M", "100000000". */
TSNSIM_API tsnsim_status tsnsim_parse_duration(const char* text, int64_t* out_ns);
TSNSIM_API tsnsim_status tsnsim_parse_bandwidth(const char* text, int64_t* out_bps);

TSNSIM_API tsnsim_status tsnsim_scenario_load(const char* path, tsnsim_scenario** out);
TSNSIM_API tsnsim_status tsnsim_scenario_parse(const char* text, tsnsim_scenario** out);
TSNSIM_API void tsnsim_scenario_free(tsnsim_scenario* s);

TSNSIM_API tsnsim_status tsnsim_scenario_set_duration_ns(tsnsim_scenario* s, int64_t duration_ns);
TSNSIM_API tsnsim_status tsnsim_scenario_set_seed(tsnsim_scenario* s, uint64_t seed);
TSNSIM_API tsnsim_status tsnsim_scenario_set_attack(tsnsim_scenario* s, int enabled);

/* Checks the scenario; on success *warning_count (optional) receives the
 * number of warnings retrievable with tsnsim_scenario_warning. */
TSNSIM_API tsnsim_status tsnsim_scenario_validate(tsnsim_scenario* s, size_t* warning_count);
TSNSIM_API const char* tsnsim_scenario_warning(const tsnsim_scenario* s, size_t index);
TSNSIM_API tsnsim_status tsnsim_scenario_describe(const tsnsim_scenario* s, tsnsim_scenario_info* out);
/* Canonical text. Copies at most cap bytes including the terminator; *needed
 * (optional) receives the full size including the terminator. */
TSNSIM_API tsnsim_status tsnsim_scenario_to_text(const tsnsim_scenario* s, char* buf, size_t cap, size_t* needed);

TSNSIM_API tsnsim_status tsnsim_run(const tsnsim_scenario* s, tsnsim_result** out);
TSNSIM_API void tsnsim_result_free(tsnsim_result* r);
TSNSIM_API tsnsim_status tsnsim_result_stream(const tsnsim_result* r, uint32_t stream, tsnsim_stream_stats* out);
TSNSIM_API tsnsim_status tsnsim_result_meter(const tsnsim_result* r, const char* meter, tsnsim_meter_stats* out);
/* Largest burst of `stream` on egress port "<device>.<neighbour>". */
TSNSIM_API tsnsim_status tsnsim_result_burst(const tsnsim_result* r, const char* port, uint32_t stream, int* out);
/* Latency histogram: bin left edges (ns) and counts, contiguous from the
 * lowest to the highest populated bin. Same size protocol as to_text. */
TSNSIM_API tsnsim_status tsnsim_result_latency_bins(const tsnsim_result* r, uint32_t stream, int64_t* edges_ns,
                                                    uint64_t* counts, size_t cap, size_t* needed);
TSNSIM_API uint64_t tsnsim_result_trace_hash(const tsnsim_result* r);
TSNSIM_API uint64_t tsnsim_result_events(const tsnsim_result* r);
/* Writes the CSV files and report.txt into dir (created if missing). */
TSNSIM_API tsnsim_status tsnsim_result_write(const tsnsim_result* r, const char* dir);
/* Summary report text; same size protocol as tsnsim_scenario_to_text. */
TSNSIM_API tsnsim_status tsnsim_result_report(const tsnsim_result* r, char* buf, size_t cap, size_t* needed);

/* Runs the attacker-rate sweep. rates_bps may be NULL to use the scenario's
 * [sweep] rates. workers < 1 means one. */
TSNSIM_API tsnsim_status tsnsim_sweep_run(const tsnsim_scenario* s, const int64_t* rates_bps, size_t count,
                                          int workers, tsnsim_sweep** out);
TSNSIM_API void tsnsim_sweep_free(tsnsim_sweep* w);
TSNSIM_API size_t tsnsim_sweep_size(const tsnsim_sweep* w);
TSNSIM_API tsnsim_status tsnsim_sweep_point_at(const tsnsim_sweep* w, size_t index, tsnsim_sweep_point* out);
/* Error message of a failed point, or NULL. */
TSNSIM_API const char* tsnsim_sweep_point_error(const tsnsim_sweep* w, size_t index);
TSNSIM_API tsnsim_status tsnsim_sweep_write(const tsnsim_sweep* w, const char* dir);

#ifdef __cplusplus
}
#endif

#endif /* TSNSIM_TSNSIM_H_ */
