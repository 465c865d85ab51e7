// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "scenario.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "errors.hpp"
#include "topology.hpp"

namespace tsnsim {

const DeviceSpec* Scenario::find_device(std::string_view name) const {
  for (const auto& d : devices)
    if (d.name == name) return &d;
  return nullptr;
}

const StreamSpec* Scenario::find_stream(StreamId id) const {
  for (const auto& st : streams)
    if (st.id == id) return &st;
  return nullptr;
}

const MeterSpec* Scenario::find_meter(std::string_view name) const {
  for (const auto& m : meters)
    if (m.name == name) return &m;
  return nullptr;
}

const GateSpec* Scenario::find_gate(std::string_view name) const {
  for (const auto& g : gates)
    if (g.name == name) return &g;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

std::vector<std::string_view> split_on(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t b = 0;
  for (;;) {
    const auto e = s.find(sep, b);
    out.push_back(trim(s.substr(b, e == std::string_view::npos ? std::string_view::npos : e - b)));
    if (e == std::string_view::npos) break;
    b = e + 1;
  }
  return out;
}

// One "keyword positional... key=value..." line.
class Directive {
 public:
  Directive(int line, std::vector<std::string_view> tokens) : line_(line) {
    keyword_ = std::string(tokens.at(0));
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      const auto eq = tokens[i].find('=');
      if (eq == std::string_view::npos) {
        positional_.emplace_back(tokens[i]);
      } else {
        const std::string key(tokens[i].substr(0, eq));
        if (!kv_.emplace(key, std::string(tokens[i].substr(eq + 1))).second) fail("duplicate key '" + key + "'");
      }
    }
  }

  const std::string& keyword() const { return keyword_; }
  const std::vector<std::string>& positional() const { return positional_; }

  std::optional<std::string> take(const std::string& key) {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return std::nullopt;
    std::string v = it->second;
    kv_.erase(it);
    return v;
  }
  std::string require(const std::string& key) {
    auto v = take(key);
    if (!v) fail(keyword_ + ": missing " + key + "=");
    return *v;
  }
  void expect_positional(std::size_t n) const {
    if (positional_.size() != n) {
      fail(keyword_ + ": expected " + std::to_string(n) + " positional argument(s), got " +
           std::to_string(positional_.size()));
    }
  }
  void finish() const {
    if (!kv_.empty()) fail(keyword_ + ": unknown key '" + kv_.begin()->first + "'");
  }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, what); }
  int line() const { return line_; }

 private:
  int line_;
  std::string keyword_;
  std::vector<std::string> positional_;
  std::map<std::string, std::string> kv_;
};

template <class F>
auto at_line(int line, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const ConfigError& e) {
    throw ParseError(line, e.what());
  }
}

int64_t parse_int(int line, std::string_view v) {
  int64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) throw ParseError(line, "invalid integer '" + std::string(v) + "'");
  return out;
}

bool parse_bool(int line, std::string_view v) {
  if (v == "yes" || v == "true" || v == "on" || v == "1") return true;
  if (v == "no" || v == "false" || v == "off" || v == "0") return false;
  throw ParseError(line, "invalid boolean '" + std::string(v) + "'");
}

GateState parse_gate_state(int line, std::string_view v) {
  if (v == "open") return GateState::Open;
  if (v == "closed") return GateState::Closed;
  throw ParseError(line, "gate state must be open or closed, got '" + std::string(v) + "'");
}

void parse_key_value(int line, std::string_view body, std::string& key, std::string& value) {
  const auto eq = body.find('=');
  if (eq == std::string_view::npos) throw ParseError(line, "expected key = value");
  key = std::string(trim(body.substr(0, eq)));
  value = std::string(trim(body.substr(eq + 1)));
  if (key.empty()) throw ParseError(line, "empty key");
}

void parse_run(Scenario& s, int line, const std::string& key, const std::string& v) {
  at_line(line, [&] {
    if (key == "duration") s.run.duration = parse_duration(v);
    else if (key == "seed") s.run.seed = static_cast<uint64_t>(parse_int(line, v));
    else if (key == "frame_overhead") s.run.frame_overhead = static_cast<int>(parse_int(line, v));
    else if (key == "hist_bin") s.run.hist_bin = parse_duration(v);
    else if (key == "bw_window") s.run.bw_window = parse_duration(v);
    else if (key == "strict_unmatched") s.run.strict_unmatched = parse_bool(line, v);
    else if (key == "attack") s.run.attack = parse_bool(line, v);
    else throw ParseError(line, "unknown [run] key '" + key + "'");
  });
}

void parse_tt(Scenario& s, int line, const std::string& key, const std::string& v) {
  at_line(line, [&] {
    if (key == "gap") s.tt.gap = parse_duration(v);
    else if (key == "guard_band") s.tt.guard_band = parse_bool(line, v);
    else throw ParseError(line, "unknown [tt] key '" + key + "'");
  });
}

void parse_sweep(Scenario& s, int line, const std::string& key, const std::string& v) {
  at_line(line, [&] {
    if (key == "rates") {
      s.sweep.rates.clear();
      if (!v.empty())
        for (auto item : split_on(v, ',')) s.sweep.rates.push_back(parse_bandwidth(item));
    } else if (key == "meter") {
      s.sweep.meter = v;
    } else {
      throw ParseError(line, "unknown [sweep] key '" + key + "'");
    }
  });
}

void parse_devices(Scenario& s, Directive& d) {
  if (d.keyword() != "node" && d.keyword() != "switch") d.fail("expected 'node' or 'switch'");
  if (d.positional().empty()) d.fail(d.keyword() + ": missing name");
  for (const auto& name : d.positional()) s.devices.push_back(DeviceSpec{name, d.keyword() == "switch"});
  d.finish();
}

void parse_links(Scenario& s, Directive& d) {
  if (d.keyword() != "link") d.fail("expected 'link'");
  d.expect_positional(2);
  LinkSpec l;
  l.a = d.positional()[0];
  l.b = d.positional()[1];
  at_line(d.line(), [&] {
    if (auto v = d.take("bandwidth")) l.bandwidth = parse_bandwidth(*v);
    if (auto v = d.take("delay")) l.delay = parse_duration(*v);
  });
  d.finish();
  s.links.push_back(l);
}

void parse_streams(Scenario& s, Directive& d) {
  if (d.keyword() != "stream") d.fail("expected 'stream'");
  d.expect_positional(1);
  StreamSpec st;
  st.id = static_cast<StreamId>(parse_int(d.line(), d.positional()[0]));
  st.src = d.require("src");
  st.dst = d.require("dst");
  at_line(d.line(), [&] { st.reserved = parse_bandwidth(d.require("reserved")); });
  st.payload = static_cast<int>(parse_int(d.line(), d.require("payload")));
  d.finish();
  s.streams.push_back(st);
}

void parse_qci(Scenario& s, Directive& d) {
  if (d.keyword() == "gate") {
    d.expect_positional(1);
    GateSpec g;
    g.name = d.positional()[0];
    if (auto v = d.take("state")) g.gate.state = parse_gate_state(d.line(), *v);
    at_line(d.line(), [&] {
      if (auto v = d.take("period")) g.gate.period = parse_duration(*v);
      if (auto v = d.take("schedule")) {
        for (auto item : split_on(*v, ',')) {
          const auto colon = item.find(':');
          if (colon == std::string_view::npos) d.fail("schedule entries look like 100us:closed");
          g.gate.schedule.push_back(
              GateScheduleEntry{parse_duration(item.substr(0, colon)), parse_gate_state(d.line(), item.substr(colon + 1))});
        }
      }
    });
    d.finish();
    s.gates.push_back(std::move(g));
  } else if (d.keyword() == "meter") {
    d.expect_positional(1);
    MeterSpec m;
    m.name = d.positional()[0];
    const auto bmax = d.take("burst_max");
    const auto bout = d.take("burst_out");
    if (bmax && bout) d.fail("meter: give burst_max or burst_out, not both");
    if (!bmax && !bout) d.fail("meter: missing burst_max= or burst_out=");
    if (bmax) m.burst_max = static_cast<int>(parse_int(d.line(), *bmax));
    if (bout) {
      at_line(d.line(), [&] { m.burst_max = compute_burst_max(static_cast<int>(parse_int(d.line(), *bout))); });
    }
    if (auto v = d.take("trace")) m.trace = parse_bool(d.line(), *v);
    d.finish();
    s.meters.push_back(m);
  } else if (d.keyword() == "filter") {
    d.expect_positional(1);
    FilterSpec f;
    f.device = d.positional()[0];
    f.port_peer = d.require("port");
    f.stream = static_cast<StreamId>(parse_int(d.line(), d.require("stream")));
    f.gate = d.require("gate");
    f.meter = d.require("meter");
    d.finish();
    s.filters.push_back(f);
  } else {
    d.fail("expected 'gate', 'meter' or 'filter'");
  }
}

void parse_traffic(Scenario& s, Directive& d) {
  const int line = d.line();
  d.expect_positional(0);
  at_line(line, [&] {
    if (d.keyword() == "talker") {
      TalkerSpec t;
      t.stream = static_cast<StreamId>(parse_int(line, d.require("stream")));
      if (auto v = d.take("rate")) t.rate = parse_bandwidth(*v);
      if (auto v = d.take("offset")) t.offset = parse_duration(*v);
      s.talkers.push_back(t);
    } else if (d.keyword() == "tt") {
      TtFlowSpec t;
      t.src = d.require("src");
      t.dst = d.require("dst");
      t.period = parse_duration(d.require("period"));
      if (auto v = d.take("offset")) t.offset = parse_duration(*v);
      if (auto v = d.take("payload")) t.payload = static_cast<int>(parse_int(line, *v));
      s.tt_flows.push_back(t);
    } else if (d.keyword() == "be_broadcast") {
      if (s.be_broadcast) d.fail("only one be_broadcast generator is supported");
      BeBroadcastSpec b;
      b.src = d.require("src");
      b.period = parse_duration(d.require("period"));
      if (auto v = d.take("offset")) b.offset = parse_duration(*v);
      if (auto v = d.take("payload")) b.payload = static_cast<int>(parse_int(line, *v));
      s.be_broadcast = b;
    } else if (d.keyword() == "be_reply") {
      if (s.be_reply) d.fail("duplicate be_reply");
      BeReplySpec r;
      if (auto v = d.take("jitter")) r.jitter = parse_duration(*v);
      if (auto v = d.take("payload")) r.payload = static_cast<int>(parse_int(line, *v));
      s.be_reply = r;
    } else if (d.keyword() == "attacker") {
      if (s.attacker) d.fail("only one attacker is supported");
      AttackerSpec a;
      a.node = d.require("node");
      a.stream = static_cast<StreamId>(parse_int(line, d.require("stream")));
      if (auto v = d.take("rate")) a.rate = parse_bandwidth(*v);
      if (auto v = d.take("offset")) a.offset = parse_duration(*v);
      s.attacker = a;
    } else {
      d.fail("unknown generator '" + d.keyword() + "'");
    }
  });
  d.finish();
}

void parse_shaping(Scenario& s, Directive& d) {
  if (d.keyword() != "cbs") d.fail("expected 'cbs'");
  d.expect_positional(1);
  CbsSpec c;
  c.device = d.positional()[0];
  c.port_peer = d.require("port");
  if (auto v = d.take("enabled")) c.enabled = parse_bool(d.line(), *v);
  if (auto v = d.take("idleslope")) at_line(d.line(), [&] { c.idleslope = parse_bandwidth(*v); });
  d.finish();
  s.shapers.push_back(c);
}

void apply_defaults(Scenario& s) {
  for (auto& t : s.talkers) {
    if (!t.rate) {
      if (const auto* st = s.find_stream(t.stream)) t.rate = st->reserved;
    }
  }
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string_view line = trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      static const std::set<std::string> known{"run",     "devices", "links", "streams", "qci",
                                                "traffic", "shaping", "tt",    "sweep"};
      if (!known.count(section)) throw ParseError(line_no, "unknown section [" + section + "]");
      continue;
    }
    if (section.empty()) throw ParseError(line_no, "content before the first [section]");

    if (section == "run" || section == "tt" || section == "sweep") {
      std::string key, value;
      parse_key_value(line_no, line, key, value);
      if (section == "run") parse_run(s, line_no, key, value);
      else if (section == "tt") parse_tt(s, line_no, key, value);
      else parse_sweep(s, line_no, key, value);
      continue;
    }

    Directive d(line_no, split_ws(line));
    if (section == "devices") parse_devices(s, d);
    else if (section == "links") parse_links(s, d);
    else if (section == "streams") parse_streams(s, d);
    else if (section == "qci") parse_qci(s, d);
    else if (section == "shaping") parse_shaping(s, d);
    else parse_traffic(s, d);
  }
  apply_defaults(s);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

const char* yes_no(bool b) { return b ? "yes" : "no"; }

}  // namespace

std::string to_text(const Scenario& s) {
  std::ostringstream o;
  o << "[run]\n"
    << "duration = " << format_duration(s.run.duration) << "\n"
    << "seed = " << s.run.seed << "\n"
    << "frame_overhead = " << s.run.frame_overhead << "\n"
    << "hist_bin = " << format_duration(s.run.hist_bin) << "\n"
    << "bw_window = " << format_duration(s.run.bw_window) << "\n"
    << "strict_unmatched = " << yes_no(s.run.strict_unmatched) << "\n"
    << "attack = " << yes_no(s.run.attack) << "\n";

  o << "\n[devices]\n";
  for (const auto& d : s.devices) o << (d.is_switch ? "switch " : "node ") << d.name << "\n";

  o << "\n[links]\n";
  for (const auto& l : s.links) {
    o << "link " << l.a << " " << l.b << " bandwidth=" << format_bandwidth(l.bandwidth)
      << " delay=" << format_duration(l.delay) << "\n";
  }

  o << "\n[streams]\n";
  for (const auto& st : s.streams) {
    o << "stream " << st.id << " src=" << st.src << " dst=" << st.dst << " reserved=" << format_bandwidth(st.reserved)
      << " payload=" << st.payload << "\n";
  }

  o << "\n[qci]\n";
  for (const auto& g : s.gates) {
    o << "gate " << g.name << " state=" << (g.gate.state == GateState::Open ? "open" : "closed");
    if (g.gate.period.ns != 0) o << " period=" << format_duration(g.gate.period);
    if (!g.gate.schedule.empty()) {
      o << " schedule=";
      for (std::size_t i = 0; i < g.gate.schedule.size(); ++i) {
        const auto& e = g.gate.schedule[i];
        o << (i ? "," : "") << format_duration(e.offset) << ":" << (e.state == GateState::Open ? "open" : "closed");
      }
    }
    o << "\n";
  }
  for (const auto& m : s.meters) {
    o << "meter " << m.name << " burst_max=" << m.burst_max << " trace=" << yes_no(m.trace) << "\n";
  }
  for (const auto& f : s.filters) {
    o << "filter " << f.device << " port=" << f.port_peer << " stream=" << f.stream << " gate=" << f.gate
      << " meter=" << f.meter << "\n";
  }

  o << "\n[traffic]\n";
  for (const auto& t : s.talkers) {
    o << "talker stream=" << t.stream;
    if (t.rate) o << " rate=" << format_bandwidth(*t.rate);
    o << " offset=" << format_duration(t.offset) << "\n";
  }
  for (const auto& t : s.tt_flows) {
    o << "tt src=" << t.src << " dst=" << t.dst << " period=" << format_duration(t.period)
      << " offset=" << format_duration(t.offset) << " payload=" << t.payload << "\n";
  }
  if (s.be_broadcast) {
    const auto& b = *s.be_broadcast;
    o << "be_broadcast src=" << b.src << " period=" << format_duration(b.period)
      << " offset=" << format_duration(b.offset) << " payload=" << b.payload << "\n";
  }
  if (s.be_reply) {
    o << "be_reply jitter=" << format_duration(s.be_reply->jitter) << " payload=" << s.be_reply->payload << "\n";
  }
  if (s.attacker) {
    const auto& a = *s.attacker;
    o << "attacker node=" << a.node << " stream=" << a.stream << " rate=" << format_bandwidth(a.rate)
      << " offset=" << format_duration(a.offset) << "\n";
  }

  if (!s.shapers.empty()) {
    o << "\n[shaping]\n";
    for (const auto& c : s.shapers) {
      o << "cbs " << c.device << " port=" << c.port_peer << " enabled=" << yes_no(c.enabled);
      if (c.idleslope) o << " idleslope=" << format_bandwidth(*c.idleslope);
      o << "\n";
    }
  }

  o << "\n[tt]\n"
    << "gap = " << format_duration(s.tt.gap) << "\n"
    << "guard_band = " << yes_no(s.tt.guard_band) << "\n";

  o << "\n[sweep]\n";
  o << "rates = ";
  for (std::size_t i = 0; i < s.sweep.rates.size(); ++i) o << (i ? "," : "") << format_bandwidth(s.sweep.rates[i]);
  o << "\n";
  if (!s.sweep.meter.empty()) o << "meter = " << s.sweep.meter << "\n";
  return o.str();
}

// ---------------------------------------------------------------------------
// Validation

std::optional<MeterBinding> bind_meter(const Scenario& s, const Topology& topo, const MeterSpec& meter,
                                       std::string* error) {
  auto fail = [&](std::string why) -> std::optional<MeterBinding> {
    if (error) *error = std::move(why);
    return std::nullopt;
  };
  MeterBinding b;
  bool bound = false;
  int max_payload = 0;
  Bandwidth reserved;
  for (const auto& f : s.filters) {
    if (f.meter != meter.name) continue;
    const auto dev = topo.find(f.device);
    const auto peer = topo.find(f.port_peer);
    if (!dev || !peer) return fail("meter " + meter.name + " is referenced from an unknown port");
    const auto port = topo.port_toward_neighbour(*dev, *peer);
    if (!port) return fail("meter " + meter.name + ": " + f.device + " has no port to " + f.port_peer);
    if (bound && (b.device != *dev || b.port != *port)) {
      return fail("meter " + meter.name + " is referenced from more than one port");
    }
    b.device = *dev;
    b.port = *port;
    bound = true;
    const auto* st = s.find_stream(f.stream);
    if (!st) return fail("meter " + meter.name + " meters unknown stream " + std::to_string(f.stream));
    if (std::find(b.streams.begin(), b.streams.end(), f.stream) == b.streams.end()) {
      b.streams.push_back(f.stream);
      reserved = reserved + st->reserved;
      max_payload = std::max(max_payload, st->payload);
    }
  }
  if (!bound) return fail("meter " + meter.name + " is not referenced by any filter");
  b.params.reserved_bandwidth = reserved;
  b.params.link_bandwidth = topo.ports(b.device)[b.port].bandwidth;
  b.params.burst_max = meter.burst_max;
  b.params.stream_frame_wire_bits = wire_bits_for(max_payload, s.run.frame_overhead);
  return b;
}

std::vector<TtFlowPlan> build_tt_plans(const Scenario& s, const Topology& topo) {
  std::vector<TtFlowPlan> plans;
  for (const auto& t : s.tt_flows) {
    const auto src = topo.find(t.src);
    const auto dst = topo.find(t.dst);
    if (!src || !dst) continue;
    const auto path = topo.route(*src, *dst);
    if (!path) continue;
    TtFlowPlan plan;
    plan.name = t.src + "->" + t.dst;
    plan.period = t.period;
    Duration at = t.offset;
    const int64_t bits = wire_bits_for(t.payload, s.run.frame_overhead);
    for (const auto& hop : *path) {
      const auto& port = topo.ports(hop.device)[hop.port];
      const Duration len = transmission_duration(bits, port.bandwidth, true);
      plan.hops.push_back(TtHop{topo.port_name(hop.device, hop.port), topo.is_switch(hop.device), at, len});
      at += len + port.delay;  // store-and-forward: next hop starts when this one is fully received
    }
    plans.push_back(std::move(plan));
  }
  return plans;
}

ValidationReport validate_scenario(const Scenario& s) {
  std::vector<std::string> errors;
  ValidationReport report;
  auto err = [&](std::string m) { errors.push_back(std::move(m)); };

  // run
  if (s.run.duration.ns < 0) err("duration must be >= 0");
  if (s.run.hist_bin.ns <= 0) err("hist_bin must be positive");
  if (s.run.bw_window.ns <= 0) err("bw_window must be positive");
  if (s.run.frame_overhead < 0) err("frame_overhead must be >= 0");

  // devices and links
  std::set<std::string> names;
  for (const auto& d : s.devices) {
    if (!names.insert(d.name).second) err("duplicate device " + d.name);
  }
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& l : s.links) {
    if (!s.find_device(l.a)) err("link references unknown device " + l.a);
    if (!s.find_device(l.b)) err("link references unknown device " + l.b);
    if (l.a == l.b) err("link " + l.a + " - " + l.b + " connects a device to itself");
    if (l.bandwidth.bps <= 0) err("link " + l.a + " - " + l.b + " needs a positive bandwidth");
    if (l.delay.ns < 0) err("link " + l.a + " - " + l.b + " has a negative delay");
    auto key = std::minmax(l.a, l.b);
    if (!pairs.insert({key.first, key.second}).second) err("duplicate link " + l.a + " - " + l.b);
  }
  const Topology topo(s);
  if (s.be_broadcast && !topo.loop_free()) err("broadcast traffic needs a loop-free topology");

  auto is_node = [&](const std::string& n) {
    const auto* d = s.find_device(n);
    return d && !d->is_switch;
  };
  auto check_payload = [&](int p, const std::string& what) {
    if (p < kMinPayloadBytes || p > kMaxPayloadBytes) {
      err(what + ": payload " + std::to_string(p) + " outside " + std::to_string(kMinPayloadBytes) + ".." +
          std::to_string(kMaxPayloadBytes));
    }
  };
  auto check_route = [&](const std::string& a, const std::string& b, const std::string& what) {
    const auto x = topo.find(a), y = topo.find(b);
    if (x && y && !topo.route(*x, *y)) err(what + ": no route from " + a + " to " + b);
  };

  // streams
  std::set<StreamId> ids;
  for (const auto& st : s.streams) {
    const std::string what = "stream " + std::to_string(st.id);
    if (!ids.insert(st.id).second) err("duplicate " + what);
    if (!is_node(st.src)) err(what + ": src " + st.src + " is not a node");
    if (!is_node(st.dst)) err(what + ": dst " + st.dst + " is not a node");
    if (st.reserved.bps <= 0) err(what + ": reserved bandwidth must be positive");
    check_payload(st.payload, what);
    check_route(st.src, st.dst, what);
  }

  // qci
  std::set<std::string> gate_names;
  for (const auto& g : s.gates) {
    if (!gate_names.insert(g.name).second) err("duplicate gate " + g.name);
    try {
      g.gate.validate();
    } catch (const ConfigError& e) {
      err("gate " + g.name + ": " + e.what());
    }
  }
  std::set<std::string> meter_names;
  for (const auto& m : s.meters) {
    if (!meter_names.insert(m.name).second) err("duplicate meter " + m.name);
    if (m.burst_max < 1) err("meter " + m.name + ": burst_max must be >= 1");
  }
  std::set<std::tuple<std::string, std::string, StreamId>> filter_keys;
  for (const auto& f : s.filters) {
    const std::string what = "filter " + f.device + "." + f.port_peer + " stream " + std::to_string(f.stream);
    const auto* dev = s.find_device(f.device);
    if (!dev) err(what + ": unknown device " + f.device);
    else if (!dev->is_switch) err(what + ": " + f.device + " is not a switch");
    if (dev && s.find_device(f.port_peer)) {
      const auto d = topo.find(f.device), p = topo.find(f.port_peer);
      if (!topo.port_toward_neighbour(*d, *p)) err(what + ": " + f.device + " has no link to " + f.port_peer);
    } else if (!s.find_device(f.port_peer)) {
      err(what + ": unknown port peer " + f.port_peer);
    }
    if (!s.find_stream(f.stream)) err(what + ": unknown stream");
    if (!s.find_gate(f.gate)) err(what + ": unknown gate " + f.gate);
    if (!s.find_meter(f.meter)) err(what + ": unknown meter " + f.meter);
    if (!filter_keys.insert({f.device, f.port_peer, f.stream}).second) err("duplicate " + what);
  }
  for (const auto& m : s.meters) {
    std::string why;
    const auto b = bind_meter(s, topo, m, &why);
    if (!b) {
      if (why.find("not referenced") != std::string::npos) report.warnings.push_back(why);
      else err(why);
      continue;
    }
    try {
      validate(b->params);
    } catch (const ConfigError& e) {
      for (const auto& v : e.violations()) err("meter " + m.name + ": " + v);
    }
  }

  // traffic
  std::set<StreamId> talked;
  for (const auto& t : s.talkers) {
    const std::string what = "talker for stream " + std::to_string(t.stream);
    const auto* st = s.find_stream(t.stream);
    if (!st) {
      err(what + ": unknown stream");
      continue;
    }
    if (!talked.insert(t.stream).second) err("duplicate " + what);
    if (t.rate && t.rate->bps < 0) err(what + ": negative rate");
    if (t.rate && *t.rate > st->reserved) err(what + ": rate exceeds the stream's reserved bandwidth");
    if (t.offset.ns < 0) err(what + ": negative offset");
  }
  for (const auto& t : s.tt_flows) {
    const std::string what = "tt " + t.src + "->" + t.dst;
    if (!is_node(t.src)) err(what + ": src is not a node");
    if (!is_node(t.dst)) err(what + ": dst is not a node");
    if (t.period.ns <= 0) err(what + ": period must be positive");
    if (t.offset.ns < 0) err(what + ": negative offset");
    check_payload(t.payload, what);
    check_route(t.src, t.dst, what);
  }
  if (s.be_broadcast) {
    if (!is_node(s.be_broadcast->src)) err("be_broadcast: src is not a node");
    if (s.be_broadcast->period.ns <= 0) err("be_broadcast: period must be positive");
    check_payload(s.be_broadcast->payload, "be_broadcast");
  }
  if (s.be_reply) {
    if (s.be_reply->jitter.ns < 0) err("be_reply: negative jitter");
    check_payload(s.be_reply->payload, "be_reply");
  }
  if (s.attacker) {
    const auto& a = *s.attacker;
    if (!is_node(a.node)) err("attacker: " + a.node + " is not a node");
    if (!s.find_stream(a.stream)) err("attacker: unknown stream " + std::to_string(a.stream));
    if (a.rate.bps <= 0) err("attacker: rate must be positive");
    if (a.offset.ns < 0) err("attacker: negative offset");
  }
  if (s.run.attack && !s.attacker) err("attack is enabled but no attacker is configured");

  // shaping
  std::set<std::pair<std::string, std::string>> shaped;
  for (const auto& c : s.shapers) {
    const std::string what = "cbs " + c.device + "." + c.port_peer;
    const auto d = topo.find(c.device), p = topo.find(c.port_peer);
    if (!d || !p) err(what + ": unknown device");
    else if (!topo.port_toward_neighbour(*d, *p)) err(what + ": " + c.device + " has no link to " + c.port_peer);
    else if (c.idleslope) {
      const auto port = topo.port_toward_neighbour(*d, *p);
      const Bandwidth link = topo.ports(*d)[*port].bandwidth;
      if (c.idleslope->bps <= 0 || *c.idleslope >= link) err(what + ": idleslope must lie in (0, link bandwidth)");
    }
    if (!shaped.insert({c.device, c.port_peer}).second) err("duplicate " + what);
  }

  // tt schedule
  if (errors.empty() && !s.tt_flows.empty()) {
    try {
      const TtSchedule sched = tt_schedule(build_tt_plans(s, topo), s.tt.gap);
      // warn where a metered burst behind a TT window cannot drain within the gap
      for (const auto& [port_name, windows] : sched.ports) {
        for (const auto& m : s.meters) {
          const auto b = bind_meter(s, topo, m);
          if (!b) continue;
          const auto& port = topo.ports(b->device)[b->port];
          const std::string upstream = topo.name(port.peer_device) + "." + topo.name(b->device);
          if (upstream != port_name) continue;
          const Duration t = transmission_duration(b->params.stream_frame_wire_bits, b->params.link_bandwidth, true);
          if (windows.max_gap() < t * m.burst_max) {
            report.warnings.push_back("TT gap " + format_duration(windows.max_gap()) + " on " + port_name +
                                      " is shorter than burst_max frame times of meter " + m.name);
          }
        }
      }
    } catch (const ConfigError& e) {
      for (const auto& v : e.violations()) err(v);
    }
  }

  if (!s.sweep.rates.empty()) {
    if (s.sweep.meter.empty()) err("sweep: meter is required when rates are given");
    else if (!s.find_meter(s.sweep.meter)) err("sweep: unknown meter " + s.sweep.meter);
    if (!s.attacker) err("sweep: needs an attacker");
    for (const auto& r : s.sweep.rates) {
      if (r.bps <= 0) err("sweep: rates must be positive");
    }
  }

  if (!errors.empty()) throw ConfigError(std::move(errors));
  return report;
}

}  // namespace tsnsim
