// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tsnsim {

void Histogram::add(Duration sample) {
  int64_t bin = sample.ns / width_.ns;
  if (sample.ns < 0 && sample.ns % width_.ns != 0) --bin;
  ++bins_[bin];
  ++total_;
  if (!min_ || sample < *min_) min_ = sample;
  if (!max_ || sample > *max_) max_ = sample;
}

uint64_t Histogram::count_in(int64_t bin) const {
  const auto it = bins_.find(bin);
  return it == bins_.end() ? 0 : it->second;
}

std::vector<BandwidthSample> windowed_bandwidth(const std::vector<FrameStart>& frames, Duration window,
                                                std::optional<SimTime> end) {
  if (window.ns <= 0) throw std::invalid_argument("bandwidth window must be positive");
  int64_t count = 0;
  if (end) {
    count = (end->ns + window.ns - 1) / window.ns;
  } else {
    for (const auto& f : frames) count = std::max(count, f.start.ns / window.ns + 1);
  }
  std::vector<int64_t> bits(static_cast<std::size_t>(std::max<int64_t>(count, 0)), 0);
  for (const auto& f : frames) {
    if (f.start.ns < 0 || (end && f.start >= *end)) continue;
    bits[static_cast<std::size_t>(f.start.ns / window.ns)] += f.bits;
  }
  std::vector<BandwidthSample> out;
  out.reserve(bits.size());
  for (std::size_t k = 0; k < bits.size(); ++k) {
    out.push_back({SimTime(static_cast<int64_t>(k) * window.ns), static_cast<double>(bits[k]) * 1e9 / window.ns});
  }
  return out;
}

void BurstTracker::on_tx(const PortTx& tx) {
  if (tx.traffic_class != TrafficClass::Stream) {
    run_end_.reset();
    return;
  }
  if (!run_end_ || *run_end_ != tx.start) {
    run_len_ = 0;
    run_counts_.clear();
  }
  ++run_len_;
  max_class_ = std::max(max_class_, run_len_);
  if (tx.stream) {
    const int n = ++run_counts_[*tx.stream];
    int& best = max_stream_[*tx.stream];
    best = std::max(best, n);
  }
  run_end_ = tx.start + tx.line;
}

int BurstTracker::max_stream_burst(StreamId s) const {
  const auto it = max_stream_.find(s);
  return it == max_stream_.end() ? 0 : it->second;
}

int observed_burst_max(const std::vector<PortTx>& txs, StreamId stream) {
  BurstTracker t;
  for (const auto& tx : txs) t.on_tx(tx);
  return t.max_stream_burst(stream);
}

std::optional<NanoBits> credit_at(const std::vector<CreditSample>& trace, SimTime t) {
  const auto it = std::upper_bound(trace.begin(), trace.end(), t,
                                   [](SimTime v, const CreditSample& s) { return v < s.at; });
  if (it == trace.begin()) return std::nullopt;
  return cbm_advance(std::prev(it)->state, t).credit;
}

std::vector<CreditPoint> credit_polyline(const std::vector<CreditSample>& trace, std::optional<SimTime> end) {
  std::vector<CreditPoint> out;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& sample = trace[i];
    out.push_back({sample.at, sample.state.credit});
    std::optional<SimTime> next;
    if (i + 1 < trace.size()) next = trace[i + 1].at;
    else next = end;
    if (!next) continue;
    CbmState s = sample.state;
    if (s.receiving() && *s.receiving_until < *next) {
      s = cbm_advance(s, *s.receiving_until);
      out.push_back({s.last_update, s.credit});
    }
    if (!s.receiving() && s.credit < s.credit_max && s.idleslope > 0) {
      const NanoBits missing = s.credit_max - s.credit;
      const SimTime full = s.last_update + Duration((missing + s.idleslope - 1) / s.idleslope);
      if (full < *next) out.push_back({full, cbm_advance(s, full).credit});
    }
    if (i + 1 == trace.size() && *next > out.back().at) out.push_back({*next, cbm_advance(s, *next).credit});
  }
  return out;
}

StreamStats& MetricsStore::stream(StreamId id, Duration bin) {
  auto it = streams.find(id);
  if (it == streams.end()) {
    StreamStats st;
    st.latency = Histogram(bin);
    it = streams.emplace(id, std::move(st)).first;
  }
  return it->second;
}

const MeterStats* MetricsStore::find_meter(const std::string& name) const {
  for (const auto& m : meters)
    if (m.name == name) return &m;
  return nullptr;
}

int MetricsStore::port_stream_burst(const std::string& port, StreamId stream) const {
  const auto it = ports.find(port);
  return it == ports.end() ? 0 : it->second.bursts.max_stream_burst(stream);
}

void write_text_file(const std::string& dir, const std::string& name, const std::string& content) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir + "': " + ec.message());
  const auto path = std::filesystem::path(dir) / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
  out.close();
  if (!out) throw std::runtime_error("error writing '" + path.string() + "'");
}

namespace {

std::string histogram_csv(const Histogram& h) {
  std::string out = "x,y\n";
  if (h.bins().empty()) return out;
  const int64_t first = h.bins().begin()->first;
  const int64_t last = h.bins().rbegin()->first;
  for (int64_t b = first; b <= last; ++b) {
    out += format_seconds(b * h.bin_width().ns);
    out += ',';
    out += std::to_string(h.count_in(b));
    out += '\n';
  }
  return out;
}

std::string stream_tag(StreamId s) { return "str" + std::to_string(s); }

}  // namespace

void export_csv(const MetricsStore& m, const std::string& dir) {
  for (const auto& [id, st] : m.streams) {
    write_text_file(dir, "hist_end_to_end_latency_" + stream_tag(id) + ".csv", histogram_csv(st.latency));
  }
  for (const auto& meter : m.meters) {
    if (!meter.traced) continue;
    std::string out = "x,y\n";
    for (const auto& p : credit_polyline(meter.trace, SimTime{} + m.duration)) {
      out += format_seconds(p.at.ns) + "," + format_nanobits(p.credit) + "\n";
    }
    write_text_file(dir, "vec_credit_" + meter.name + ".csv", out);
  }
  const std::string window = format_duration(m.bw_window);
  for (const auto& [port, ps] : m.ports) {
    for (const auto& [id, starts] : ps.stream_tx) {
      std::string out = "x,y\n";
      for (const auto& s : windowed_bandwidth(starts, m.bw_window, SimTime{} + m.duration)) {
        out += format_seconds(s.window_start.ns) + "," + format_double(s.bps) + "\n";
      }
      write_text_file(dir, "vec_bandwidth_" + window + "_" + port + "_" + stream_tag(id) + ".csv", out);
    }
  }
}

std::string summary_text(const MetricsStore& m) {
  std::ostringstream o;
  o << "# duration " << format_seconds(m.duration.ns) << " s\n";
  o << "# events " << m.events << "\n";
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(m.trace_hash));
  o << "# trace_hash " << hash << "\n";
  for (const auto& [id, st] : m.streams) {
    o << "# stream " << id << " generated=" << st.generated << " delivered=" << st.delivered
      << " dropped_meter=" << st.dropped_meter << " dropped_gate=" << st.dropped_gate
      << " dropped_no_filter=" << st.dropped_no_filter << " in_flight=" << st.in_flight;
    if (st.latency.min()) {
      o << " latency_min=" << format_duration(*st.latency.min()) << " latency_max=" << format_duration(*st.latency.max());
    }
    o << "\n";
  }
  o << "# tt generated=" << m.tt_generated << " delivered=" << m.tt_delivered << " in_flight=" << m.tt_in_flight << "\n";
  o << "# be generated=" << m.be_generated << " delivered=" << m.be_delivered << " in_flight=" << m.be_in_flight << "\n";
  for (const auto& meter : m.meters) {
    const double secs = static_cast<double>(m.duration.ns) / 1e9;
    o << "# meter " << meter.name << " port=" << meter.port << " credit_max_bits=" << format_nanobits(meter.credit_max)
      << " accepted_frames=" << meter.accepted_frames << " accepted_line_bits=" << meter.accepted_bits
      << " dropped=" << meter.dropped_frames;
    if (secs > 0) o << " accepted_bps=" << format_double(static_cast<double>(meter.accepted_bits) / secs);
    o << "\n";
  }
  for (const auto& [name, ps] : m.ports) {
    if (ps.bursts.stream_bursts().empty()) continue;
    o << "# burst " << name << " class=" << ps.bursts.max_class_burst();
    for (const auto& [id, b] : ps.bursts.stream_bursts()) o << " " << stream_tag(id) << "=" << b;
    o << "\n";
  }
  return o.str();
}

void export_sweep_csv(const std::vector<SweepPoint>& points, const std::string& dir) {
  std::string bw = "x,y\n", dropped = "x,y\n";
  for (const auto& p : points) {
    if (p.error) continue;
    const std::string x = std::to_string(p.input.bps);
    bw += x + "," + format_double(p.output_bps) + "\n";
    dropped += x + "," + format_double(p.drops_per_second) + "\n";
  }
  write_text_file(dir, "spam_sweep_bandwidth.csv", bw);
  write_text_file(dir, "spam_sweep_dropped.csv", dropped);
}

}  // namespace tsnsim
