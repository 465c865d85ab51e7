// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "units.hpp"

#include <charconv>
#include <cstdio>
#include <limits>

#include "errors.hpp"

namespace tsnsim {

NanoBits slope_times(int64_t slope_bps, Duration dt) {
  const __int128 p = static_cast<__int128>(slope_bps) * dt.ns;
  constexpr __int128 hi = std::numeric_limits<int64_t>::max();
  constexpr __int128 lo = std::numeric_limits<int64_t>::min();
  if (p > hi) return std::numeric_limits<int64_t>::max();
  if (p < lo) return std::numeric_limits<int64_t>::min();
  return static_cast<NanoBits>(p);
}

Duration bits_to_duration(int64_t bits, Bandwidth bandwidth) {
  // round(bits * 1e9 / bps), ties upward
  const __int128 num = static_cast<__int128>(bits) * 1000000000 * 2 + bandwidth.bps;
  const __int128 den = static_cast<__int128>(bandwidth.bps) * 2;
  return Duration(static_cast<int64_t>(num / den));
}

Duration ifg_duration(Bandwidth bandwidth) { return bits_to_duration(kIfgBits, bandwidth); }

Duration transmission_duration(int64_t wire_bits, Bandwidth bandwidth, bool include_ifg) {
  Duration d = bits_to_duration(wire_bits, bandwidth);
  if (include_ifg) d += ifg_duration(bandwidth);
  return d;
}

namespace {

// Parses "12", "12.5" scaled by `scale` into an exact integer.
bool parse_scaled(std::string_view num, int64_t scale, int64_t& out) {
  if (num.empty()) return false;
  bool neg = false;
  if (num.front() == '-') {
    neg = true;
    num.remove_prefix(1);
  }
  const auto dot = num.find('.');
  std::string_view ip = num.substr(0, dot);
  std::string_view fp = dot == std::string_view::npos ? std::string_view{} : num.substr(dot + 1);
  if (ip.empty() && fp.empty()) return false;
  __int128 value = 0;
  for (char c : ip) {
    if (c < '0' || c > '9') return false;
    value = value * 10 + (c - '0');
    if (value > std::numeric_limits<int64_t>::max()) return false;
  }
  value *= scale;
  int64_t frac_scale = scale;
  for (char c : fp) {
    if (c < '0' || c > '9') return false;
    if (frac_scale % 10 != 0) {
      if (c != '0') return false;  // finer than the base unit
      continue;
    }
    frac_scale /= 10;
    value += static_cast<__int128>(c - '0') * frac_scale;
  }
  if (value > std::numeric_limits<int64_t>::max()) return false;
  out = neg ? -static_cast<int64_t>(value) : static_cast<int64_t>(value);
  return true;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

Duration parse_duration(std::string_view text) {
  struct Unit {
    std::string_view suffix;
    int64_t scale;
  };
  static constexpr Unit units[] = {{"ns", 1}, {"us", 1000}, {"ms", 1000000}, {"s", 1000000000}};
  for (const auto& u : units) {
    if (ends_with(text, u.suffix)) {
      int64_t v = 0;
      if (parse_scaled(text.substr(0, text.size() - u.suffix.size()), u.scale, v)) return Duration(v);
      throw ConfigError("invalid duration '" + std::string(text) + "'");
    }
  }
  int64_t v = 0;
  if (parse_scaled(text, 1, v)) return Duration(v);
  throw ConfigError("invalid duration '" + std::string(text) + "' (expected e.g. 125us)");
}

Bandwidth parse_bandwidth(std::string_view text) {
  int64_t scale = 1;
  if (ends_with(text, "bps")) text.remove_suffix(3);
  if (!text.empty()) {
    switch (text.back()) {
      case 'K': case 'k': scale = 1000; break;
      case 'M': scale = 1000000; break;
      case 'G': scale = 1000000000; break;
      default: break;
    }
    if (scale != 1) text.remove_suffix(1);
  }
  int64_t v = 0;
  if (!parse_scaled(text, scale, v)) throw ConfigError("invalid bandwidth '" + std::string(text) + "'");
  return Bandwidth(v);
}

std::string format_duration(Duration d) {
  const int64_t v = d.ns;
  if (v == 0) return "0ns";
  if (v % 1000000000 == 0) return std::to_string(v / 1000000000) + "s";
  if (v % 1000000 == 0) return std::to_string(v / 1000000) + "ms";
  if (v % 1000 == 0) return std::to_string(v / 1000) + "us";
  return std::to_string(v) + "ns";
}

std::string format_bandwidth(Bandwidth b) {
  const int64_t v = b.bps;
  if (v != 0 && v % 1000000000 == 0) return std::to_string(v / 1000000000) + "G";
  if (v != 0 && v % 1000000 == 0) return std::to_string(v / 1000000) + "M";
  if (v != 0 && v % 1000 == 0) return std::to_string(v / 1000) + "K";
  return std::to_string(v);
}

namespace {

std::string format_fixed9(int64_t v) {
  const bool neg = v < 0;
  const unsigned __int128 mag = neg ? -static_cast<__int128>(v) : static_cast<__int128>(v);
  const auto ip = static_cast<uint64_t>(mag / 1000000000);
  const auto fp = static_cast<uint64_t>(mag % 1000000000);
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%llu.%09llu", neg ? "-" : "", static_cast<unsigned long long>(ip),
                static_cast<unsigned long long>(fp));
  return buf;
}

}  // namespace

std::string format_seconds(int64_t ns) { return format_fixed9(ns); }
std::string format_nanobits(NanoBits v) { return format_fixed9(v); }

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

}  // namespace tsnsim
