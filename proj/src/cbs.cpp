// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "cbs.hpp"

#include "cbm.hpp"
#include "errors.hpp"

namespace tsnsim {

CbsState CbsState::make(Bandwidth reserved, Bandwidth link) {
  const Slopes s = compute_slopes(reserved, link);
  CbsState st;
  st.idleslope = s.idleslope;
  st.sendslope = s.sendslope;
  return st;
}

CbsState cbs_advance(CbsState state, SimTime now) {
  if (now < state.last_update) throw InternalError("shaper time regression");
  const Duration dt = now - state.last_update;
  if (state.transmitting) {
    state.credit += slope_times(state.sendslope, dt);
  } else if (state.backlogged) {
    state.credit += slope_times(state.idleslope, dt);
  } else if (state.credit < 0) {
    // recovering with nothing queued stops at zero
    const NanoBits gain = slope_times(state.idleslope, dt);
    state.credit = gain >= -state.credit ? 0 : state.credit + gain;
  } else {
    state.credit = 0;
  }
  state.last_update = now;
  return state;
}

CbsState cbs_update(CbsState state, SimTime now, CbsEvent event) {
  state = cbs_advance(state, now);
  switch (event) {
    case CbsEvent::FrameQueued: state.backlogged = true; break;
    case CbsEvent::TxStart: state.transmitting = true; break;
    case CbsEvent::TxEnd: state.transmitting = false; break;
    case CbsEvent::QueueEmpty:
      state.backlogged = false;
      if (state.credit > 0) state.credit = 0;
      break;
  }
  return state;
}

std::optional<SimTime> cbs_eligible_at(const CbsState& state) {
  if (state.credit >= 0) return std::nullopt;
  const NanoBits deficit = -state.credit;
  const int64_t wait = (deficit + state.idleslope - 1) / state.idleslope;  // ceil
  return state.last_update + Duration(wait);
}

}  // namespace tsnsim
