// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "cbm.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "errors.hpp"

namespace tsnsim {

Slopes compute_slopes(Bandwidth reserved, Bandwidth link) {
  if (reserved >= link) {
    throw ConfigError("meter oversubscribed: reserved " + format_bandwidth(reserved) + " >= link " +
                      format_bandwidth(link));
  }
  return Slopes{reserved.bps, reserved.bps - link.bps};
}

NanoBits credit_max_for(int64_t sendslope, Duration t_duration, int burst_max) {
  const int64_t magnitude = sendslope < 0 ? -sendslope : sendslope;
  return slope_times(magnitude, t_duration) * (burst_max - 1);
}

NanoBits compute_credit_max(const CbmParams& params) {
  const Slopes s = compute_slopes(params.reserved_bandwidth, params.link_bandwidth);
  const Duration t = transmission_duration(params.stream_frame_wire_bits, params.link_bandwidth, true);
  return credit_max_for(s.sendslope, t, params.burst_max);
}

int compute_burst_max(int burst_out) {
  if (burst_out < 1) throw ConfigError("burst_out must be >= 1, got " + std::to_string(burst_out));
  return burst_out + 1;
}

void validate(const CbmParams& params) {
  std::vector<std::string> errors;
  if (params.link_bandwidth.bps <= 0) errors.push_back("meter link bandwidth must be positive");
  if (params.reserved_bandwidth.bps <= 0) errors.push_back("meter reserved bandwidth must be positive");
  if (params.reserved_bandwidth >= params.link_bandwidth) {
    errors.push_back("meter oversubscribed: reserved " + format_bandwidth(params.reserved_bandwidth) +
                     " >= link " + format_bandwidth(params.link_bandwidth));
  }
  if (params.burst_max < 1) errors.push_back("burst_max must be >= 1, got " + std::to_string(params.burst_max));
  if (params.stream_frame_wire_bits <= 0) errors.push_back("meter stream frame size must be positive");
  if (!errors.empty()) throw ConfigError(std::move(errors));
}

CbmState CbmState::initial(const CbmParams& params, SimTime start) {
  validate(params);
  const Slopes s = compute_slopes(params.reserved_bandwidth, params.link_bandwidth);
  CbmState st;
  st.idleslope = s.idleslope;
  st.sendslope = s.sendslope;
  st.credit_max = compute_credit_max(params);
  st.last_update = start;
  return st;
}

namespace {

// Idle segment: rise at idleslope, clamp at the ceiling, leave R-RF at 0.
void rise(CbmState& s, Duration dt) {
  if (dt.ns <= 0) return;
  const NanoBits headroom = s.credit_max - s.credit;
  const NanoBits gain = slope_times(s.idleslope, dt);
  s.credit = gain >= headroom ? s.credit_max : s.credit + gain;
  if (s.mode == CbmMode::RunningReceivingForbidden && s.credit >= 0) {
    s.mode = CbmMode::RunningReceivingAllowed;
  }
}

}  // namespace

CbmState cbm_advance(CbmState state, SimTime now) {
  if (now < state.last_update) {
    throw InternalError("meter time regression: " + std::to_string(now.ns) + " < " +
                        std::to_string(state.last_update.ns));
  }
  SimTime t = state.last_update;
  if (state.receiving_until) {
    const SimTime end = std::min(now, *state.receiving_until);
    state.credit += slope_times(state.sendslope, end - t);
    t = end;
    if (*state.receiving_until <= now) {
      state.receiving_until.reset();
      if (state.credit < 0) state.mode = CbmMode::RunningReceivingForbidden;
    }
  }
  if (!state.receiving_until) rise(state, now - t);
  state.last_update = now;
  return state;
}

std::pair<CbmState, Verdict> cbm_on_frame_start(CbmState state, SimTime now, Duration frame_duration) {
  if (state.receiving_until && *state.receiving_until > now) {
    throw InternalError("overlapping reception on metered port at t=" + std::to_string(now.ns));
  }
  state = cbm_advance(state, now);
  if (state.mode == CbmMode::RunningReceivingAllowed && state.credit >= 0) {
    state.receiving_until = now + frame_duration;
    return {state, Verdict::Accept};
  }
  if (state.credit < 0) state.mode = CbmMode::RunningReceivingForbidden;
  return {state, Verdict::Drop};
}

CbmState cbm_on_frame_end(CbmState state, SimTime now) {
  if (!state.receiving_until || *state.receiving_until != now) {
    throw InternalError("frame end at t=" + std::to_string(now.ns) + " without a matching reception");
  }
  return cbm_advance(state, now);
}

}  // namespace tsnsim
