// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cbm.hpp"
#include "doctest.h"
#include "metrics.hpp"

using namespace tsnsim;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PortTx stream_tx(int64_t start, StreamId s, int64_t line = 31040) {
  return PortTx{SimTime(start), Duration(line), TrafficClass::Stream, s};
}

}  // namespace

TEST_CASE("histogram bins by floor of the bin width") {
  Histogram h(Duration::from_us(10));
  h.add(Duration::from_us(600));
  h.add(Duration(609999));
  h.add(Duration::from_us(610));
  CHECK(h.total() == 3);
  CHECK(h.count_in(60) == 2);
  CHECK(h.count_in(61) == 1);
  CHECK(h.count_in(62) == 0);
  CHECK(*h.min() == Duration::from_us(600));
  CHECK(*h.max() == Duration::from_us(610));
  CHECK_FALSE(Histogram().min());
}

TEST_CASE("two 31 us frames in one 125 us window read as about 50 Mbit/s") {
  const std::vector<FrameStart> frames{{SimTime(0), 3100}, {SimTime(31000), 3100}};
  const auto w = windowed_bandwidth(frames, Duration::from_us(125));
  REQUIRE(w.size() == 1);
  CHECK(w[0].bps == doctest::Approx(49.6e6));
}

TEST_CASE("windowed bandwidth: empty windows and boundaries") {
  CHECK(windowed_bandwidth({}, Duration::from_us(125)).empty());
  const auto padded = windowed_bandwidth({}, Duration::from_us(125), SimTime(250000));
  REQUIRE(padded.size() == 2);
  CHECK(padded[1].bps == 0);
  // a frame starting exactly on a boundary belongs to the later window
  const auto w = windowed_bandwidth({{SimTime(125000), 1000}}, Duration::from_us(125), SimTime(375000));
  REQUIRE(w.size() == 3);
  CHECK(w[0].bps == 0);
  CHECK(w[1].bps == doctest::Approx(8e6));
  CHECK(w[1].window_start == SimTime(125000));
  CHECK(w[2].bps == 0);
}

TEST_CASE("single isolated frame is a burst of one") {
  BurstTracker b;
  b.on_tx(stream_tx(0, 1));
  CHECK(b.max_class_burst() == 1);
  CHECK(b.max_stream_burst(1) == 1);
  CHECK(b.max_stream_burst(2) == 0);
}

TEST_CASE("bursts are runs of back-to-back stream frames") {
  BurstTracker b;
  b.on_tx(stream_tx(0, 1));
  b.on_tx(stream_tx(31040, 2));
  b.on_tx(stream_tx(62080, 1));
  b.on_tx(stream_tx(93121, 1));  // one ns late: new run
  b.on_tx(stream_tx(124161, 1));
  CHECK(b.max_class_burst() == 3);
  CHECK(b.max_stream_burst(1) == 2);
  CHECK(b.max_stream_burst(2) == 1);
}

TEST_CASE("other classes break a stream burst") {
  BurstTracker b;
  b.on_tx(stream_tx(0, 1));
  b.on_tx(PortTx{SimTime(31040), Duration(124000), TrafficClass::BestEffort, std::nullopt});
  b.on_tx(stream_tx(155040, 1));
  CHECK(b.max_stream_burst(1) == 1);
  CHECK(observed_burst_max({stream_tx(0, 4), stream_tx(31040, 4), stream_tx(62080, 4)}, 4) == 3);
}

TEST_CASE("credit replay and polyline") {
  const CbmParams p{Bandwidth::mbps(25), Bandwidth::mbps(100), 3, 3008};
  CbmState s = CbmState::initial(p);
  std::vector<CreditSample> trace;
  // idle 200 us reaches the ceiling (4656 bits after 186.24 us), then one frame
  auto [a, v] = cbm_on_frame_start(s, SimTime(200000), Duration(31040));
  REQUIRE(v == Verdict::Accept);
  trace.push_back({SimTime(200000), a});
  const CbmState b = cbm_on_frame_end(a, SimTime(231040));
  trace.push_back({SimTime(231040), b});

  CHECK(*credit_at(trace, SimTime(200000)) == 4656LL * kNanoBitsPerBit);
  CHECK(*credit_at(trace, SimTime(215520)) == 4656LL * kNanoBitsPerBit - 75000000LL * 15520);
  CHECK(*credit_at(trace, SimTime(231040)) == 2328LL * kNanoBitsPerBit);
  CHECK_FALSE(credit_at(trace, SimTime(100)));

  const auto line = credit_polyline(trace, SimTime(400000));
  REQUIRE(line.size() >= 4);
  CHECK(line.front().at == SimTime(200000));
  CHECK(line[1].at == SimTime(231040));
  // kink where the credit reaches the ceiling again, 93.12 us later
  CHECK(line[2].at == SimTime(231040 + 93120));
  CHECK(line[2].credit == 4656LL * kNanoBitsPerBit);
  CHECK(line.back().at == SimTime(400000));
  for (const auto& pt : line) CHECK(pt.credit <= 4656LL * kNanoBitsPerBit);
}

TEST_CASE("CSV export writes x,y files with exact decimals") {
  MetricsStore m;
  m.duration = Duration::from_us(500);
  StreamStats& st = m.stream(2, Duration::from_us(10));
  st.latency.add(Duration::from_us(350));
  st.latency.add(Duration::from_us(370));
  m.ports["Sw.Listener"].stream_tx[2] = {{SimTime(0), 3104}};
  const auto dir = std::filesystem::temp_directory_path() / "tsnsim_metrics_test";
  std::filesystem::remove_all(dir);
  export_csv(m, dir.string());
  CHECK(slurp(dir / "hist_end_to_end_latency_str2.csv") ==
        "x,y\n0.000350000,1\n0.000360000,0\n0.000370000,1\n");
  const std::string bw = slurp(dir / "vec_bandwidth_125us_Sw.Listener_str2.csv");
  CHECK(bw.rfind("x,y\n0.000000000,24832000\n", 0) == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("sweep CSVs list input in bit/s") {
  std::vector<SweepPoint> pts{{Bandwidth::mbps(5), 5e6, 0, 0, 10, std::nullopt},
                              {Bandwidth::mbps(50), 25e6, 8054.5, 80545, 80541, std::nullopt}};
  const auto dir = std::filesystem::temp_directory_path() / "tsnsim_sweep_csv_test";
  std::filesystem::remove_all(dir);
  export_sweep_csv(pts, dir.string());
  CHECK(slurp(dir / "spam_sweep_bandwidth.csv") == "x,y\n5000000,5000000\n50000000,25000000\n");
  CHECK(slurp(dir / "spam_sweep_dropped.csv") == "x,y\n5000000,0\n50000000,8054.5\n");
  std::filesystem::remove_all(dir);
}

TEST_CASE("summary lines all start with a hash") {
  MetricsStore m;
  m.duration = Duration::from_s(1);
  m.stream(1, Duration::from_us(10)).generated = 3;
  std::istringstream in(summary_text(m));
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    CHECK(line.rfind("# ", 0) == 0);
    ++n;
  }
  CHECK(n > 0);
}
