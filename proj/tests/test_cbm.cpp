// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include "cbm.hpp"
#include "doctest.h"
#include "errors.hpp"
#include "frame.hpp"
#include "oracles.hpp"

using namespace tsnsim;

namespace {

constexpr NanoBits bits(int64_t b) { return b * kNanoBitsPerBit; }

CbmState meter(NanoBits credit, NanoBits credit_max, CbmMode mode = CbmMode::RunningReceivingAllowed) {
  CbmState s;
  s.idleslope = 25000000;
  s.sendslope = -75000000;
  s.credit = credit;
  s.credit_max = credit_max;
  s.mode = mode;
  return s;
}

// Back-to-back frames from full credit on the real meter; returns how many
// were accepted before the first drop (or `limit`).
int accepted_burst(int burst_max, Duration line, int limit) {
  CbmState s;
  s.idleslope = 25000000;
  s.sendslope = -75000000;
  s.credit_max = credit_max_for(s.sendslope, line, burst_max);
  s.credit = s.credit_max;
  int n = 0;
  for (int k = 0; k < limit; ++k) {
    const SimTime t(k * line.ns);
    auto [next, v] = cbm_on_frame_start(s, t, line);
    s = next;
    if (v == Verdict::Drop) break;
    ++n;
    s = cbm_on_frame_end(s, t + line);
  }
  return n;
}

int oracle_burst(int burst_max, Duration line, int limit) {
  const int64_t cmax = 75000000 * line.ns * (burst_max - 1);
  oracle::BruteForceMeter m(25000000, -75000000, cmax, cmax);
  int n = 0;
  for (int k = 0; k < limit; ++k) {
    if (!m.frame(k * line.ns, line.ns)) break;
    ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("slopes from reserved and link bandwidth") {
  CHECK(compute_slopes(Bandwidth::mbps(25), Bandwidth::mbps(100)) == Slopes{25000000, -75000000});
  CHECK(compute_slopes(Bandwidth(1), Bandwidth(100)) == Slopes{1, -99});
  CHECK(compute_slopes(Bandwidth::mbps(50), Bandwidth::mbps(100)) == Slopes{50000000, -50000000});
  CHECK_THROWS_WITH_AS(compute_slopes(Bandwidth::mbps(100), Bandwidth::mbps(100)),
                       doctest::Contains("meter oversubscribed"), ConfigError);
}

TEST_CASE("credit ceiling") {
  CHECK(credit_max_for(-75000000, Duration(31000), 3) == bits(4650));
  CHECK(credit_max_for(-75000000, Duration(31000), 1) == 0);
  CHECK(credit_max_for(-75000000, Duration(124000), 5) == bits(37200));
  const CbmParams p{Bandwidth::mbps(25), Bandwidth::mbps(100), 3, wire_bits_for(356, 20)};
  CHECK(compute_credit_max(p) == bits(4656));
}

TEST_CASE("burst_max is the observed burst plus one") {
  CHECK(compute_burst_max(2) == 3);
  CHECK(compute_burst_max(4) == 5);
  CHECK(compute_burst_max(1) == 2);
  CHECK_THROWS_AS(compute_burst_max(0), ConfigError);
}

TEST_CASE("parameter validation lists every problem") {
  try {
    validate(CbmParams{Bandwidth(0), Bandwidth(0), 0, 0});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.violations().size() == 5);
  }
  CHECK_NOTHROW(validate(CbmParams{Bandwidth::mbps(25), Bandwidth::mbps(100), 3, 3008}));
}

TEST_CASE("initial meter is allowed with zero credit") {
  const CbmState s = CbmState::initial({Bandwidth::mbps(25), Bandwidth::mbps(100), 3, 3008}, SimTime(5));
  CHECK(s.mode == CbmMode::RunningReceivingAllowed);
  CHECK(s.credit == 0);
  CHECK(s.last_update == SimTime(5));
  CHECK(s.credit_max == bits(4656));
}

TEST_CASE("idle credit rises at idleslope and stops at the ceiling") {
  CHECK(cbm_advance(meter(0, bits(4650)), SimTime(100000)).credit == bits(2500));
  CHECK(cbm_advance(meter(bits(4650), bits(4650)), SimTime(1)).credit == bits(4650));
  CHECK(cbm_advance(meter(bits(4650), bits(4650)), SimTime(999999999)).credit == bits(4650));
}

TEST_CASE("forbidden meter becomes allowed when credit reaches zero") {
  const CbmState s = meter(-bits(2325), bits(4650), CbmMode::RunningReceivingForbidden);
  const CbmState before = cbm_advance(s, SimTime(92999));
  CHECK(before.mode == CbmMode::RunningReceivingForbidden);
  const CbmState at = cbm_advance(s, SimTime(93000));
  CHECK(at.credit == 0);
  CHECK(at.mode == CbmMode::RunningReceivingAllowed);
}

TEST_CASE("time regression is an internal error") {
  CbmState s = meter(0, bits(4650));
  s.last_update = SimTime(10);
  CHECK_THROWS_AS(cbm_advance(s, SimTime(9)), InternalError);
}

TEST_CASE("three back-to-back frames from full credit, fourth dropped") {
  const Duration line(31000);
  CbmState s = meter(bits(4650), bits(4650));
  const NanoBits expected[] = {bits(4650), bits(2325), 0};
  for (int k = 0; k < 3; ++k) {
    const SimTime t(k * line.ns);
    s = cbm_advance(s, t);
    CHECK(s.credit == expected[k]);
    auto [next, v] = cbm_on_frame_start(s, t, line);
    CHECK(v == Verdict::Accept);
    s = cbm_on_frame_end(next, t + line);
  }
  CHECK(s.credit == -bits(2325));
  CHECK(s.mode == CbmMode::RunningReceivingForbidden);
  auto [after, v] = cbm_on_frame_start(s, SimTime(3 * line.ns), line);
  CHECK(v == Verdict::Drop);
  CHECK(after.credit == -bits(2325));  // a dropped frame does not cost credit
}

TEST_CASE("a single frame is allowed at zero credit") {
  auto [s, v] = cbm_on_frame_start(meter(0, bits(4650)), SimTime(0), Duration(31000));
  CHECK(v == Verdict::Accept);
  CHECK(s.receiving());
}

TEST_CASE("frame end sets the mode from the sign of the credit") {
  auto [a, va] = cbm_on_frame_start(meter(bits(2500), bits(4650)), SimTime(0), Duration(31000));
  REQUIRE(va == Verdict::Accept);
  a = cbm_on_frame_end(a, SimTime(31000));
  CHECK(a.credit == bits(175));
  CHECK(a.mode == CbmMode::RunningReceivingAllowed);

  auto [b, vb] = cbm_on_frame_start(meter(bits(2325), bits(4650)), SimTime(0), Duration(31000));
  REQUIRE(vb == Verdict::Accept);
  b = cbm_on_frame_end(b, SimTime(31000));
  CHECK(b.credit == 0);
  CHECK(b.mode == CbmMode::RunningReceivingAllowed);
  CHECK_FALSE(b.receiving());
}

TEST_CASE("reception errors are internal errors") {
  auto [s, v] = cbm_on_frame_start(meter(0, bits(4650)), SimTime(0), Duration(31000));
  REQUIRE(v == Verdict::Accept);
  CHECK_THROWS_AS(cbm_on_frame_start(s, SimTime(1000), Duration(31000)), InternalError);
  CHECK_THROWS_AS(cbm_on_frame_end(s, SimTime(30000)), InternalError);
  CHECK_THROWS_AS(cbm_on_frame_end(meter(0, bits(4650)), SimTime(0)), InternalError);
}

TEST_CASE("burst law matches the 1 ns oracle for burst_max 1 to 8") {
  for (const Duration line : {Duration(31000), Duration(31040), Duration(124000)}) {
    for (int bm = 1; bm <= 8; ++bm) {
      CAPTURE(bm);
      CAPTURE(line.ns);
      CHECK(accepted_burst(bm, line, 20) == bm);
      CHECK(oracle_burst(bm, line, 20) == bm);
    }
  }
}

TEST_CASE("random traffic: meter agrees with the 1 ns oracle frame by frame") {
  std::mt19937_64 rng(20260101);
  const Duration line(31040);
  for (int bm : {1, 3, 5}) {
    CAPTURE(bm);
    const NanoBits cmax = credit_max_for(-75000000, line, bm);
    CbmState s = meter(0, cmax);
    oracle::BruteForceMeter o(25000000, -75000000, cmax);
    int64_t t = 0;
    int mismatches = 0;
    int accepted = 0;
    for (int k = 0; k < 10000; ++k) {
      // mostly back-to-back with occasional idle gaps
      const int64_t gap = rng() % 3 == 0 ? static_cast<int64_t>(rng() % 150000) : 0;
      t += gap;
      s = cbm_advance(s, SimTime(t));
      auto [next, v] = cbm_on_frame_start(s, SimTime(t), line);
      const bool ok = o.frame(t, line.ns);
      if ((v == Verdict::Accept) != ok || next.credit != o.credit()) ++mismatches;
      s = next;
      if (v == Verdict::Accept) {
        ++accepted;
        s = cbm_on_frame_end(s, SimTime(t + line.ns));
      }
      CHECK(s.credit <= cmax);
      t += line.ns;
    }
    CHECK(mismatches == 0);
    CHECK(accepted > 0);
    // lazy and stepped credits agree at the end too
    o.run_to(t);
    CHECK(cbm_advance(s, SimTime(t)).credit == o.credit());
  }
}

TEST_CASE("accepted bits never exceed reservation times time plus the ceiling") {
  std::mt19937_64 rng(99);
  const Duration line(31040);
  const NanoBits cmax = credit_max_for(-75000000, line, 3);
  CbmState s = meter(cmax, cmax);
  int64_t t = 0;
  int64_t accepted_bits = 0;
  for (int k = 0; k < 20000; ++k) {
    t += static_cast<int64_t>(rng() % 20000);
    auto [next, v] = cbm_on_frame_start(cbm_advance(s, SimTime(t)), SimTime(t), line);
    s = next;
    if (v == Verdict::Accept) {
      accepted_bits += 3104;
      s = cbm_on_frame_end(s, SimTime(t + line.ns));
    }
    t += line.ns;
    // credit bound: accepted <= RB * elapsed + initial credit, in line bits
    CHECK(static_cast<__int128>(accepted_bits) * kNanoBitsPerBit <=
          static_cast<__int128>(25000000) * t + cmax + static_cast<__int128>(3104) * kNanoBitsPerBit);
  }
}
