// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "errors.hpp"
#include "fixtures.hpp"
#include "simulation.hpp"
#include "sweep.hpp"

using namespace tsnsim;

namespace {

Scenario small() { return parse_scenario(fixtures::kSmall); }

void check_conservation(const MetricsStore& m) {
  for (const auto& [id, st] : m.streams) {
    CAPTURE(id);
    CHECK(st.generated == st.delivered + st.dropped_meter + st.dropped_gate + st.dropped_no_filter + st.in_flight);
    CHECK(st.latency.total() == st.delivered);
  }
  CHECK(m.tt_generated == m.tt_delivered + m.tt_in_flight);
}

}  // namespace

TEST_CASE("zero duration gives empty metrics") {
  RunOverrides o;
  o.duration = Duration(0);
  const RunResult r = run_once(small(), o);
  CHECK(r.metrics.events == 0);
  for (const auto& [id, st] : r.metrics.streams) CHECK(st.generated == 0);
}

TEST_CASE("valid traffic through a meter: no drops, frames conserved") {
  const MetricsStore m = simulate(small());
  const StreamStats& st = m.streams.at(1);
  CHECK(st.generated > 100);
  CHECK(st.dropped_meter == 0);
  CHECK(st.delivered > 0);
  check_conservation(m);
  // store and forward over two hops at 31.04 us each
  CHECK(*st.latency.min() >= Duration(2 * 31040));
}

TEST_CASE("talker at its reservation sends one frame per 124.16 us") {
  RunOverrides o;
  o.duration = Duration::from_ms(100);
  Scenario s = small();
  s.be_broadcast.reset();
  s.be_reply.reset();
  const MetricsStore m = simulate(apply_overrides(s, o));
  // 3104 line bits at 25 Mbit/s
  CHECK(m.streams.at(1).generated == 806);
  const auto& tx = m.ports.at("Talker.Sw").stream_tx.at(1);
  REQUIRE(tx.size() > 2);
  CHECK(tx[1].start - tx[0].start == Duration(124160));
}

TEST_CASE("talker with rate zero sends nothing") {
  Scenario s = small();
  s.talkers[0].rate = Bandwidth(0);
  const MetricsStore m = simulate(s);
  CHECK((m.streams.count(1) == 0 || m.streams.at(1).generated == 0));
}

TEST_CASE("attacker at link rate sends frames separated by the IFG only") {
  Scenario s = small();
  s.run.attack = true;
  s.attacker->rate = Bandwidth::mbps(100);
  s.be_broadcast.reset();
  s.be_reply.reset();
  RunOverrides o;
  o.duration = Duration::from_ms(2);
  const MetricsStore m = simulate(apply_overrides(s, o));
  const auto& tx = m.ports.at("Talker.Sw").stream_tx.at(1);
  REQUIRE(tx.size() > 10);
  for (std::size_t i = 1; i < tx.size(); ++i) CHECK(tx[i].start - tx[i - 1].start == Duration(31040));
}

TEST_CASE("attack is policed at the switch and frames stay conserved") {
  Scenario s = small();
  s.run.attack = true;
  const MetricsStore m = simulate(s);
  const StreamStats& st = m.streams.at(1);
  CHECK(st.dropped_meter > 0);
  check_conservation(m);
  const MeterStats* meter = m.find_meter("m");
  REQUIRE(meter);
  CHECK(meter->dropped_frames == st.dropped_meter);
  CHECK(meter->accepted_frames + meter->dropped_frames <= st.generated);
  // accepted line bits stay under RB x duration + the ceiling
  const double limit = 25e6 * 0.020 + 4656.0 + 3104.0;
  CHECK(static_cast<double>(meter->accepted_bits) <= limit);
  for (const auto& sample : meter->trace) CHECK(sample.state.credit <= meter->credit_max);
}

TEST_CASE("every node except the broadcaster replies to a broadcast") {
  Scenario s = small();
  s.talkers.clear();
  s.attacker.reset();
  RunOverrides o;
  o.duration = Duration::from_ms(1);  // one broadcast, at 100 us
  const MetricsStore m = simulate(apply_overrides(s, o));
  // one broadcast reaching two nodes, then two replies
  CHECK(m.be_generated == 3);
  CHECK(m.be_delivered == 4);
}

TEST_CASE("same scenario and seed give the same run, other seeds differ") {
  const MetricsStore a = simulate(small());
  const MetricsStore b = simulate(small());
  CHECK(a.trace_hash == b.trace_hash);
  CHECK(a.events == b.events);
  RunOverrides o;
  o.seed = 99;
  const MetricsStore c = simulate(apply_overrides(small(), o));
  CHECK(c.trace_hash != a.trace_hash);
}

TEST_CASE("run_once rejects an invalid scenario") {
  Scenario s = small();
  s.filters[0].meter = "missing";
  CHECK_THROWS_AS(run_once(s), ConfigError);
}

TEST_CASE("report text reloads to the effective scenario") {
  RunOverrides o;
  o.seed = 11;
  o.duration = Duration::from_ms(5);
  const RunResult r = run_once(small(), o);
  const Scenario back = parse_scenario(report_text(r));
  CHECK(back == r.effective);
  CHECK(back.run.seed == 11);
}

TEST_CASE("sweep results do not depend on the worker count") {
  Scenario s = small();
  const std::vector<Bandwidth> rates{Bandwidth::mbps(10), Bandwidth::mbps(25), Bandwidth::mbps(40),
                                     Bandwidth::mbps(60)};
  s.sweep.meter = "m";
  const auto one = run_sweep(s, rates, 1);
  const auto four = run_sweep(s, rates, 4);
  REQUIRE(one.size() == 4);
  REQUIRE(four.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK_FALSE(one[i].error);
    CHECK(one[i].input == rates[i]);
    CHECK(one[i].accepted == four[i].accepted);
    CHECK(one[i].dropped == four[i].dropped);
  }
  CHECK(one[0].dropped == 0);
  CHECK(one[3].dropped > one[2].dropped);
}

TEST_CASE("sweep without a meter name is a configuration error") {
  CHECK_THROWS_AS(run_sweep(small(), {Bandwidth::mbps(10)}, 1), ConfigError);
}

TEST_CASE("write_run_outputs produces the CSV set and a report") {
  const auto dir = std::filesystem::temp_directory_path() / "tsnsim_run_outputs_test";
  std::filesystem::remove_all(dir);
  RunOverrides o;
  o.duration = Duration::from_ms(5);
  write_run_outputs(run_once(small(), o), dir.string());
  CHECK(std::filesystem::exists(dir / "report.txt"));
  CHECK(std::filesystem::exists(dir / "hist_end_to_end_latency_str1.csv"));
  CHECK(std::filesystem::exists(dir / "vec_credit_m.csv"));
  CHECK(std::filesystem::exists(dir / "vec_bandwidth_125us_Talker.Sw_str1.csv"));
  std::filesystem::remove_all(dir);
}
