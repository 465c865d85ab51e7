// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cbm.hpp"
#include "frame.hpp"
#include "qci.hpp"
#include "units.hpp"

namespace tsnsim {

/// Fixed-width histogram keyed by bin index (left edge = index * width).
class Histogram {
 public:
  explicit Histogram(Duration bin_width = Duration::from_us(10)) : width_(bin_width) {}

  void add(Duration sample);
  Duration bin_width() const { return width_; }
  uint64_t total() const { return total_; }
  const std::map<int64_t, uint64_t>& bins() const { return bins_; }
  uint64_t count_in(int64_t bin) const;
  std::optional<Duration> min() const { return min_; }
  std::optional<Duration> max() const { return max_; }

  friend bool operator==(const Histogram&, const Histogram&) = default;

 private:
  Duration width_;
  std::map<int64_t, uint64_t> bins_;
  uint64_t total_ = 0;
  std::optional<Duration> min_, max_;
};

/// A frame's start time and its line bits (wire bits plus IFG).
struct FrameStart {
  SimTime start;
  int64_t bits = 0;
};

struct BandwidthSample {
  SimTime window_start;
  double bps = 0;
};

/// Tumbling windows [k*w, (k+1)*w) over [0, end); a frame counts in the window
/// holding its start, so one starting on a boundary belongs to the later window.
/// Without `end` the series stops after the last frame's window.
std::vector<BandwidthSample> windowed_bandwidth(const std::vector<FrameStart>& frames, Duration window,
                                                std::optional<SimTime> end = std::nullopt);

/// One transmission seen on a port.
struct PortTx {
  SimTime start;
  Duration line;  // transmission time including IFG
  TrafficClass traffic_class = TrafficClass::BestEffort;
  std::optional<StreamId> stream;
};

/// Burst sizes on one port. A burst is a maximal run of Stream-class frames in
/// which each frame starts exactly when the previous one's line time (IFG
/// included) ends. A stream's burst size is the number of its own frames in
/// such a run; the class burst counts every frame of the run.
class BurstTracker {
 public:
  void on_tx(const PortTx& tx);

  int max_class_burst() const { return max_class_; }
  /// 0 for streams never seen.
  int max_stream_burst(StreamId s) const;
  const std::map<StreamId, int>& stream_bursts() const { return max_stream_; }

 private:
  std::optional<SimTime> run_end_;
  int run_len_ = 0;
  std::map<StreamId, int> run_counts_;
  int max_class_ = 0;
  std::map<StreamId, int> max_stream_;
};

/// Largest burst of `stream` over a whole transmission record.
int observed_burst_max(const std::vector<PortTx>& txs, StreamId stream);

struct CreditSample {
  SimTime at;
  CbmState state;  // after the event
};

struct CreditPoint {
  SimTime at;
  NanoBits credit = 0;
};

/// Exact credit at `t` from the event samples, by replaying the lazy dynamics
/// from the last sample at or before `t`.
std::optional<NanoBits> credit_at(const std::vector<CreditSample>& trace, SimTime t);

/// Polyline through every sample and every kink between samples (end of a
/// reception window, reaching the ceiling), suitable for plotting.
std::vector<CreditPoint> credit_polyline(const std::vector<CreditSample>& trace, std::optional<SimTime> end = {});

struct MeterStats {
  std::string name;
  std::string port;  // "<switch>.<neighbour>"
  NanoBits credit_max = 0;
  int64_t reserved_bps = 0;
  uint64_t accepted_frames = 0;
  uint64_t accepted_bits = 0;  // line bits
  uint64_t dropped_frames = 0;
  bool traced = false;
  std::vector<CreditSample> trace;
  std::vector<FrameStart> accepted;
};

struct StreamStats {
  uint64_t generated = 0;
  uint64_t delivered = 0;
  uint64_t dropped_meter = 0;
  uint64_t dropped_gate = 0;
  uint64_t dropped_no_filter = 0;
  uint64_t in_flight = 0;  // queued or on a link when the run ended
  Histogram latency;
};

struct PortStats {
  uint64_t tx_frames = 0;
  uint64_t tx_bits = 0;  // line bits
  BurstTracker bursts;
  std::map<StreamId, std::vector<FrameStart>> stream_tx;
};

/// Everything one run observes.
struct MetricsStore {
  Duration duration;
  Duration bw_window = Duration::from_us(125);
  uint64_t events = 0;
  uint64_t trace_hash = 0;
  std::map<StreamId, StreamStats> streams;
  std::vector<MeterStats> meters;
  std::map<std::string, PortStats> ports;
  uint64_t tt_generated = 0, tt_delivered = 0;
  uint64_t be_generated = 0, be_delivered = 0;
  uint64_t be_in_flight = 0, tt_in_flight = 0;
  Histogram tt_latency;

  StreamStats& stream(StreamId id, Duration bin);
  const MeterStats* find_meter(const std::string& name) const;
  /// Largest burst of `stream` on port `port`; 0 if nothing was sent.
  int port_stream_burst(const std::string& port, StreamId stream) const;
};

/// Writes the per-run CSV files into `dir` (created if missing). Throws
/// std::runtime_error if the directory is not writable.
void export_csv(const MetricsStore& m, const std::string& dir);

/// Summary lines, each starting with "# ".
std::string summary_text(const MetricsStore& m);

struct SweepPoint {
  Bandwidth input;
  double output_bps = 0;       // accepted line bits / duration at the sweep meter
  double drops_per_second = 0;
  uint64_t dropped = 0;
  uint64_t accepted = 0;
  std::optional<std::string> error;
};

void export_sweep_csv(const std::vector<SweepPoint>& points, const std::string& dir);

/// Writes `content` to `dir/name`, creating `dir`.
void write_text_file(const std::string& dir, const std::string& name, const std::string& content);

}  // namespace tsnsim
