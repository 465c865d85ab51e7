// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

// Exact integer time, bandwidth and credit units shared by every module.
//
// Time is counted in nanoseconds. Credit is counted in nano-bits so that a
// slope in bit/s multiplied by an interval in ns is an exact integer.

#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace tsnsim {

/// Signed interval in nanoseconds.
struct Duration {
  int64_t ns = 0;

  constexpr Duration() = default;
  constexpr explicit Duration(int64_t v) : ns(v) {}

  static constexpr Duration from_us(int64_t us) { return Duration(us * 1000); }
  static constexpr Duration from_ms(int64_t ms) { return Duration(ms * 1000000); }
  static constexpr Duration from_s(int64_t s) { return Duration(s * 1000000000); }

  constexpr auto operator<=>(const Duration&) const = default;
  constexpr Duration operator+(Duration o) const { return Duration(ns + o.ns); }
  constexpr Duration operator-(Duration o) const { return Duration(ns - o.ns); }
  constexpr Duration operator*(int64_t k) const { return Duration(ns * k); }
  constexpr Duration& operator+=(Duration o) { ns += o.ns; return *this; }
};

/// Instant on the global simulation clock, nanoseconds since start.
struct SimTime {
  int64_t ns = 0;

  constexpr SimTime() = default;
  constexpr explicit SimTime(int64_t v) : ns(v) {}

  constexpr auto operator<=>(const SimTime&) const = default;
  constexpr SimTime operator+(Duration d) const { return SimTime(ns + d.ns); }
  constexpr SimTime operator-(Duration d) const { return SimTime(ns - d.ns); }
  constexpr Duration operator-(SimTime o) const { return Duration(ns - o.ns); }
  constexpr SimTime& operator+=(Duration d) { ns += d.ns; return *this; }
};

/// Data rate in bit/s.
struct Bandwidth {
  int64_t bps = 0;

  constexpr Bandwidth() = default;
  constexpr explicit Bandwidth(int64_t v) : bps(v) {}

  static constexpr Bandwidth mbps(int64_t m) { return Bandwidth(m * 1000000); }

  constexpr auto operator<=>(const Bandwidth&) const = default;
  constexpr Bandwidth operator+(Bandwidth o) const { return Bandwidth(bps + o.bps); }
};

/// Credit in units of 1e-9 bit. bit/s x ns == nano-bit.
using NanoBits = int64_t;

inline constexpr NanoBits kNanoBitsPerBit = 1000000000;
inline constexpr int64_t kIfgBits = 96;

/// Slope (bit/s) times interval, saturating at the int64 range.
NanoBits slope_times(int64_t slope_bps, Duration dt);

/// Wire bits to time at `bandwidth`, rounded half up to whole ns. This is the
/// only place in the code base where bit counts are converted to time.
Duration bits_to_duration(int64_t bits, Bandwidth bandwidth);

/// Duration of the mandatory 96 bit-time inter-frame gap.
Duration ifg_duration(Bandwidth bandwidth);

/// Time a frame of `wire_bits` occupies a link, optionally followed by the IFG.
Duration transmission_duration(int64_t wire_bits, Bandwidth bandwidth, bool include_ifg);

// Text forms used by the scenario format: "123us", "1.5ms", "25M", "100000000".
Duration parse_duration(std::string_view text);
Bandwidth parse_bandwidth(std::string_view text);
std::string format_duration(Duration d);
std::string format_bandwidth(Bandwidth b);

/// Exact decimal seconds with nine fractional digits, e.g. "0.000350000".
std::string format_seconds(int64_t ns);
/// Exact decimal bits for a nano-bit credit, e.g. "-2328.000000000".
std::string format_nanobits(NanoBits v);
/// Shortest round-trip plain decimal (no exponent) for a double.
std::string format_double(double v);

}  // namespace tsnsim
