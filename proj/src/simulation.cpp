// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "simulation.hpp"

#include <limits>
#include <map>

#include "egress.hpp"
#include "errors.hpp"
#include "event_queue.hpp"
#include "qci.hpp"
#include "rng.hpp"
#include "topology.hpp"

namespace tsnsim {

Scenario apply_overrides(Scenario s, const RunOverrides& o) {
  if (o.duration) s.run.duration = *o.duration;
  if (o.seed) s.run.seed = *o.seed;
  if (o.attack) s.run.attack = *o.attack;
  if (o.attacker_rate && s.attacker) s.attacker->rate = *o.attacker_rate;
  return s;
}

namespace {

constexpr SimTime kNever{std::numeric_limits<int64_t>::max()};

struct Generator {
  enum class Kind { Talker, Attacker, TimeTriggered, Broadcast, Reply };
  Kind kind = Kind::Talker;
  uint32_t device = 0;
  NodeId dst = 0;
  std::optional<StreamId> stream;
  TrafficClass traffic_class = TrafficClass::BestEffort;
  int payload = 0;
  // periodic emission k happens at offset + ceil(k * step_num / step_den) ns
  Duration offset;
  int64_t step_num = 0;
  int64_t step_den = 1;
  int64_t k = 0;

  SimTime emission(int64_t index) const {
    const __int128 num = static_cast<__int128>(index) * step_num;
    const __int128 t = (num + step_den - 1) / step_den;
    return SimTime{offset.ns + static_cast<int64_t>(t)};
  }
};

struct PortState {
  EgressPort egress;
  EventToken tick;
  SimTime tick_at = kNever;
  PortStats* stats = nullptr;
};

struct Device {
  bool is_switch = false;
  std::vector<PortState> ports;
  std::unique_ptr<IngressPolicer> policer;
  std::vector<std::size_t> meter_ids;  // policer-local meter -> MetricsStore::meters index
  std::optional<RngStream> reply_rng;
  std::optional<uint32_t> reply_generator;
};

class Simulation {
 public:
  explicit Simulation(const Scenario& s) : s_(s), topo_(s) {
    metrics_.duration = s.run.duration;
    metrics_.bw_window = s.run.bw_window;
    metrics_.tt_latency = Histogram(s.run.hist_bin);
    for (const auto& st : s.streams) metrics_.stream(st.id, s.run.hist_bin);
    build_devices();
    build_policing();
    build_shaping();
    build_generators();
  }

  MetricsStore run() {
    const SimTime end = SimTime{} + s_.run.duration;
    engine_.run_until(end, [this](const Event& ev) { dispatch(ev); });
    count_in_flight();
    metrics_.events = engine_.events_processed();
    metrics_.trace_hash = engine_.trace_hash();
    return std::move(metrics_);
  }

 private:
  SimTime now() const { return engine_.now(); }
  EventQueue& queue() { return engine_.queue(); }

  // ---- construction

  void build_devices() {
    devices_.resize(topo_.device_count());
    for (uint32_t d = 0; d < topo_.device_count(); ++d) {
      Device& dev = devices_[d];
      dev.is_switch = topo_.is_switch(d);
      const auto& ports = topo_.ports(d);
      dev.ports.resize(ports.size());
      for (uint32_t p = 0; p < ports.size(); ++p) {
        dev.ports[p].egress = EgressPort(ports[p].bandwidth);
        dev.ports[p].stats = &metrics_.ports[topo_.port_name(d, p)];
      }
      if (dev.is_switch) {
        dev.policer = std::make_unique<IngressPolicer>();
        dev.policer->set_strict_unmatched(s_.run.strict_unmatched);
        dev.policer->set_observer([this, d](MeterIndex m, SimTime at, const CbmState& state) {
          MeterStats& stats = metrics_.meters[devices_[d].meter_ids[m]];
          if (stats.traced) stats.trace.push_back({at, state});
        });
      } else {
        dev.reply_rng.emplace(s_.run.seed, "be_reply/" + topo_.name(d));
      }
    }
  }

  void build_policing() {
    std::map<std::pair<uint32_t, std::string>, GateIndex> gates;
    for (const auto& m : s_.meters) {
      std::string why;
      const auto binding = bind_meter(s_, topo_, m, &why);
      if (!binding) continue;  // unreferenced meters are only a warning
      Device& dev = devices_[binding->device];
      if (!dev.policer) throw InternalError("meter " + m.name + " bound to a non-switch");
      const MeterIndex local = dev.policer->add_meter(binding->params);
      dev.meter_ids.push_back(metrics_.meters.size());
      MeterStats stats;
      stats.name = m.name;
      stats.port = topo_.port_name(binding->device, binding->port);
      stats.credit_max = compute_credit_max(binding->params);
      stats.reserved_bps = binding->params.reserved_bandwidth.bps;
      stats.traced = m.trace;
      if (m.trace) stats.trace.push_back({SimTime{}, dev.policer->meter_state(local)});
      metrics_.meters.push_back(std::move(stats));

      for (const auto& f : s_.filters) {
        if (f.meter != m.name) continue;
        auto key = std::pair{binding->device, f.gate};
        auto it = gates.find(key);
        if (it == gates.end()) {
          const GateSpec* g = s_.find_gate(f.gate);
          if (!g) throw ConfigError("unknown gate " + f.gate);
          it = gates.emplace(key, dev.policer->add_gate(g->gate)).first;
        }
        dev.policer->add_filter(binding->port, StreamFilter{f.stream, it->second, local});
      }
    }
  }

  bool attack_active() const { return s_.run.attack && s_.attacker.has_value(); }

  void build_shaping() {
    // Stream queues are shaped at the sum of the reservations routed through them.
    std::map<std::pair<uint32_t, uint32_t>, int64_t> reserved;
    for (const auto& st : s_.streams) {
      const auto path = route_of(st.src, st.dst);
      for (const auto& hop : path) reserved[{hop.device, hop.port}] += st.reserved.bps;
    }
    for (const auto& [key, bps] : reserved) devices_[key.first].ports[key.second].egress.enable_cbs(Bandwidth(bps));
    for (const auto& c : s_.shapers) {
      const uint32_t d = device_of(c.device);
      const auto p = topo_.port_toward_neighbour(d, device_of(c.port_peer));
      if (!p) throw ConfigError("cbs on missing port " + c.device + "." + c.port_peer);
      auto& egress = devices_[d].ports[*p].egress;
      if (!c.enabled) egress.disable_cbs();
      else if (c.idleslope) egress.enable_cbs(*c.idleslope);
    }
    if (attack_active()) {
      const auto dev = topo_.find(s_.attacker->node);
      for (auto& p : devices_[*dev].ports) p.egress.disable_cbs();
    }

    if (s_.tt_flows.empty()) return;
    const TtSchedule sched = tt_schedule(build_tt_plans(s_, topo_), s_.tt.gap);
    for (uint32_t d = 0; d < devices_.size(); ++d) {
      for (uint32_t p = 0; p < devices_[d].ports.size(); ++p) {
        const auto it = sched.ports.find(topo_.port_name(d, p));
        if (it != sched.ports.end()) devices_[d].ports[p].egress.set_tt_windows(it->second, s_.tt.guard_band);
      }
    }
  }

  std::vector<PortRef> route_of(const std::string& a, const std::string& b) const {
    const auto x = topo_.find(a), y = topo_.find(b);
    if (!x || !y) throw ConfigError("unknown device in route " + a + " -> " + b);
    auto r = topo_.route(*x, *y);
    if (!r) throw ConfigError("no route from " + a + " to " + b);
    return *r;
  }

  uint32_t device_of(const std::string& name) const {
    const auto d = topo_.find(name);
    if (!d) throw ConfigError("unknown device " + name);
    return *d;
  }

  void add_generator(Generator g) {
    const auto id = static_cast<uint32_t>(generators_.size());
    generators_.push_back(g);
    if (g.kind != Generator::Kind::Reply) queue().schedule(g.emission(0), EventKind::GeneratorFire, id);
  }

  // Emission step for a periodic source sending `payload` at `rate` line bits per second.
  void set_rate(Generator& g, Bandwidth rate) const {
    g.step_num = (wire_bits_for(g.payload, s_.run.frame_overhead) + kIfgBits) * 1000000000;
    g.step_den = rate.bps;
  }

  void build_generators() {
    for (const auto& t : s_.talkers) {
      const StreamSpec* st = s_.find_stream(t.stream);
      if (!st) throw ConfigError("talker for unknown stream " + std::to_string(t.stream));
      if (attack_active() && s_.attacker->stream == t.stream && s_.attacker->node == st->src) continue;
      const Bandwidth rate = t.rate.value_or(st->reserved);
      if (rate.bps <= 0) continue;
      Generator g;
      g.kind = Generator::Kind::Talker;
      g.device = device_of(st->src);
      g.dst = device_of(st->dst);
      g.stream = st->id;
      g.traffic_class = TrafficClass::Stream;
      g.payload = st->payload;
      g.offset = t.offset;
      set_rate(g, rate);
      add_generator(g);
    }
    if (attack_active()) {
      const auto& a = *s_.attacker;
      const StreamSpec* st = s_.find_stream(a.stream);
      if (!st) throw ConfigError("attacker spoofs unknown stream " + std::to_string(a.stream));
      Generator g;
      g.kind = Generator::Kind::Attacker;
      g.device = device_of(a.node);
      g.dst = device_of(st->dst);
      g.stream = st->id;
      g.traffic_class = TrafficClass::Stream;
      g.payload = st->payload;
      g.offset = a.offset;
      set_rate(g, a.rate);
      add_generator(g);
    }
    for (const auto& t : s_.tt_flows) {
      Generator g;
      g.kind = Generator::Kind::TimeTriggered;
      g.device = device_of(t.src);
      g.dst = device_of(t.dst);
      g.traffic_class = TrafficClass::TimeTriggered;
      g.payload = t.payload;
      g.offset = t.offset;
      g.step_num = t.period.ns;
      add_generator(g);
    }
    if (s_.be_broadcast) {
      const auto& b = *s_.be_broadcast;
      Generator g;
      g.kind = Generator::Kind::Broadcast;
      g.device = device_of(b.src);
      g.dst = kBroadcast;
      g.payload = b.payload;
      g.offset = b.offset;
      g.step_num = b.period.ns;
      add_generator(g);
      if (s_.be_reply) {
        for (uint32_t d = 0; d < devices_.size(); ++d) {
          if (devices_[d].is_switch || d == g.device) continue;
          Generator r;
          r.kind = Generator::Kind::Reply;
          r.device = d;
          r.dst = g.device;
          r.payload = s_.be_reply->payload;
          devices_[d].reply_generator = static_cast<uint32_t>(generators_.size());
          add_generator(r);
        }
      }
    }
  }

  // ---- event handling

  void dispatch(const Event& ev) {
    switch (ev.kind) {
      case EventKind::GeneratorFire: on_generator(ev); break;
      case EventKind::FrameStartRx: on_frame_start(ev); break;
      case EventKind::FrameEndRx: on_frame_end(ev); break;
      case EventKind::TxComplete:
        devices_[ev.target].ports[ev.port].egress.on_tx_complete(now());
        kick(ev.target, ev.port);
        break;
      case EventKind::ScheduleTick: {
        PortState& ps = devices_[ev.target].ports[ev.port];
        ps.tick = EventToken{};
        ps.tick_at = kNever;
        kick(ev.target, ev.port);
        break;
      }
      case EventKind::StatsFlush: break;
    }
  }

  Frame make_frame(const Generator& g) {
    Frame f;
    f.stream = g.stream;
    f.traffic_class = g.traffic_class;
    f.payload_bytes = g.payload;
    f.wire_bits = wire_bits_for(g.payload, s_.run.frame_overhead);
    f.src_node = g.device;
    f.dst_node = g.dst;
    f.created_at = now();
    f.seq = next_frame_seq_++;
    return f;
  }

  void on_generator(const Event& ev) {
    Generator& g = generators_[ev.target];
    if (g.kind == Generator::Kind::Reply) {
      Frame f = ev.frame;
      f.created_at = now();
      f.seq = next_frame_seq_++;
      ++metrics_.be_generated;
      send_from_node(g.device, f);
      return;
    }
    const Frame f = make_frame(g);
    switch (g.traffic_class) {
      case TrafficClass::Stream: ++metrics_.stream(*f.stream, s_.run.hist_bin).generated; break;
      case TrafficClass::TimeTriggered: ++metrics_.tt_generated; break;
      case TrafficClass::BestEffort: ++metrics_.be_generated; break;
    }
    send_from_node(g.device, f);
    ++g.k;
    queue().schedule(g.emission(g.k), EventKind::GeneratorFire, ev.target);
  }

  void send_from_node(uint32_t device, const Frame& f) {
    if (f.dst_node == kBroadcast) {
      for (uint32_t p = 0; p < devices_[device].ports.size(); ++p) enqueue(device, p, f);
      return;
    }
    const auto p = topo_.next_hop(device, f.dst_node);
    if (!p) throw InternalError("unroutable frame from " + topo_.name(device) + " to " + topo_.name(f.dst_node));
    enqueue(device, *p, f);
  }

  void enqueue(uint32_t device, uint32_t port, const Frame& f) {
    devices_[device].ports[port].egress.enqueue(f, now());
    kick(device, port);
  }

  void kick(uint32_t device, uint32_t port) {
    PortState& ps = devices_[device].ports[port];
    if (ps.egress.in_flight()) return;
    const auto sel = ps.egress.select(now());
    if (sel.frame) {
      if (ps.tick.valid()) {
        queue().cancel(ps.tick);
        ps.tick = EventToken{};
        ps.tick_at = kNever;
      }
      const Frame& f = *sel.frame;
      queue().schedule(now() + sel.duration, EventKind::TxComplete, device, port);
      const auto& link = topo_.ports(device)[port];
      queue().schedule(now() + link.delay, EventKind::FrameStartRx, link.peer_device, link.peer_port, f);
      record_tx(ps, f, sel.duration);
      return;
    }
    if (sel.retry_at && *sel.retry_at != kNever && *sel.retry_at != ps.tick_at) {
      if (ps.tick.valid()) queue().cancel(ps.tick);
      ps.tick = queue().schedule(*sel.retry_at, EventKind::ScheduleTick, device, port);
      ps.tick_at = *sel.retry_at;
    }
  }

  void record_tx(PortState& ps, const Frame& f, Duration line) {
    PortStats& st = *ps.stats;
    const int64_t bits = f.wire_bits + kIfgBits;
    ++st.tx_frames;
    st.tx_bits += static_cast<uint64_t>(bits);
    st.bursts.on_tx(PortTx{now(), line, f.traffic_class, f.stream});
    if (f.traffic_class == TrafficClass::Stream && f.stream) st.stream_tx[*f.stream].push_back({now(), bits});
  }

  void on_frame_start(const Event& ev) {
    Device& dev = devices_[ev.target];
    const Frame& f = ev.frame;
    const Duration line = transmission_duration(f.wire_bits, topo_.ports(ev.target)[ev.port].bandwidth, true);
    if (dev.policer) {
      const IngressDecision d = dev.policer->on_frame_start(ev.port, f, now(), line);
      if (f.stream) {
        if (const StreamFilter* filter = dev.policer->find_filter(ev.port, *f.stream)) {
          MeterStats& m = metrics_.meters[dev.meter_ids[filter->meter]];
          if (d.enqueue) {
            ++m.accepted_frames;
            m.accepted_bits += static_cast<uint64_t>(f.wire_bits + kIfgBits);
            m.accepted.push_back({now(), f.wire_bits + kIfgBits});
          } else if (d.reason == DropReason::MeterExceeded) {
            ++m.dropped_frames;
          }
        }
      }
      if (!d.enqueue) {
        count_drop(f, d.reason);
        return;
      }
    }
    queue().schedule(now() + line, EventKind::FrameEndRx, ev.target, ev.port, f);
  }

  void count_drop(const Frame& f, DropReason reason) {
    if (!f.stream) return;
    StreamStats& st = metrics_.stream(*f.stream, s_.run.hist_bin);
    switch (reason) {
      case DropReason::MeterExceeded: ++st.dropped_meter; break;
      case DropReason::GateClosed: ++st.dropped_gate; break;
      case DropReason::NoFilter: ++st.dropped_no_filter; break;
    }
  }

  void on_frame_end(const Event& ev) {
    Device& dev = devices_[ev.target];
    const Frame& f = ev.frame;
    if (dev.is_switch) {
      if (f.stream) {
        if (const StreamFilter* filter = dev.policer->find_filter(ev.port, *f.stream)) {
          dev.policer->on_frame_end(filter->meter, now());
        }
      }
      if (f.dst_node == kBroadcast) {
        for (uint32_t p = 0; p < dev.ports.size(); ++p) {
          if (p != ev.port) enqueue(ev.target, p, f);
        }
        return;
      }
      const auto p = topo_.next_hop(ev.target, f.dst_node);
      if (!p) throw InternalError("unroutable frame at " + topo_.name(ev.target));
      enqueue(ev.target, *p, f);
      return;
    }

    if (f.dst_node == kBroadcast) {
      ++metrics_.be_delivered;
      if (dev.reply_generator) {
        const Generator& r = generators_[*dev.reply_generator];
        Frame reply = make_frame(r);
        reply.dst_node = f.src_node;
        const Duration jitter(dev.reply_rng->uniform(0, s_.be_reply->jitter.ns));
        queue().schedule(now() + jitter, EventKind::GeneratorFire, *dev.reply_generator, 0, reply);
      }
      return;
    }
    if (f.dst_node != ev.target) throw InternalError("frame for " + topo_.name(f.dst_node) + " reached " + topo_.name(ev.target));
    const Duration latency = now() - f.created_at;
    switch (f.traffic_class) {
      case TrafficClass::Stream: {
        StreamStats& st = metrics_.stream(*f.stream, s_.run.hist_bin);
        ++st.delivered;
        st.latency.add(latency);
        break;
      }
      case TrafficClass::TimeTriggered:
        ++metrics_.tt_delivered;
        metrics_.tt_latency.add(latency);
        break;
      case TrafficClass::BestEffort: ++metrics_.be_delivered; break;
    }
  }

  void count_in_flight() {
    auto count = [this](const Frame& f) {
      switch (f.traffic_class) {
        case TrafficClass::Stream: ++metrics_.stream(*f.stream, s_.run.hist_bin).in_flight; break;
        case TrafficClass::TimeTriggered: ++metrics_.tt_in_flight; break;
        case TrafficClass::BestEffort: ++metrics_.be_in_flight; break;
      }
    };
    for (const auto& dev : devices_) {
      for (const auto& p : dev.ports) {
        for (int c = 0; c < kTrafficClassCount; ++c) {
          for (const auto& f : p.egress.queue(static_cast<TrafficClass>(c))) count(f);
        }
      }
    }
    queue().for_each_pending([&](const Event& ev) {
      if (ev.kind == EventKind::FrameStartRx || ev.kind == EventKind::FrameEndRx) count(ev.frame);
    });
  }

  const Scenario& s_;
  Topology topo_;
  Engine engine_;
  MetricsStore metrics_;
  std::vector<Device> devices_;
  std::vector<Generator> generators_;
  uint64_t next_frame_seq_ = 0;
};

}  // namespace

MetricsStore simulate(const Scenario& s) {
  Simulation sim(s);
  return sim.run();
}

}  // namespace tsnsim
