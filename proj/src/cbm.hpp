// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

// Credit Based Meter: the flow-meter stage of the 802.1Qci ingress pipeline.
//
// The meter keeps a credit that rises at idleslope (= reserved bandwidth RB)
// and falls at sendslope (= RB - B) for the whole reception window of every
// accepted frame. A frame is accepted iff, at its first bit, the meter is in
// RUNNING-RECEIVING-ALLOWED with credit >= 0. Credit never exceeds
//
//     credit_max = |sendslope| * T_duration * (burst_max - 1)
//
// where T_duration is the line time of one stream frame including the IFG.
// A negative credit at the end of a reception moves the meter to
// RUNNING-RECEIVING-FORBIDDEN, where every frame is dropped without touching
// the credit; the meter returns to ALLOWED at the instant credit reaches 0.
//
// The dynamics are evaluated lazily: state is advanced to the time of each
// event by piecewise-linear integration, which is exact in nano-bits.

#pragma once

#include <optional>
#include <utility>

#include "units.hpp"

namespace tsnsim {

struct CbmParams {
  Bandwidth reserved_bandwidth;  // RB, summed over the streams sharing the meter
  Bandwidth link_bandwidth;      // B of the ingress port
  int burst_max = 1;
  int64_t stream_frame_wire_bits = 0;  // FS_stream

  friend bool operator==(const CbmParams&, const CbmParams&) = default;
};

struct Slopes {
  int64_t idleslope = 0;  // bit/s
  int64_t sendslope = 0;  // bit/s, negative
  friend bool operator==(const Slopes&, const Slopes&) = default;
};

/// idleslope = RB, sendslope = RB - B. Throws ConfigError "meter oversubscribed" if RB >= B.
Slopes compute_slopes(Bandwidth reserved, Bandwidth link);

/// |sendslope| * t_duration * (burst_max - 1), exact.
NanoBits credit_max_for(int64_t sendslope, Duration t_duration, int burst_max);

/// Credit ceiling for validated meter parameters.
NanoBits compute_credit_max(const CbmParams& params);

/// Burst_max = Burst_out + 1, allowing one closeup frame behind a worst-case burst.
int compute_burst_max(int burst_out);

/// Throws ConfigError listing what is wrong with `params`.
void validate(const CbmParams& params);

enum class CbmMode { RunningReceivingAllowed, RunningReceivingForbidden };

enum class Verdict { Accept, Drop };

struct CbmState {
  CbmMode mode = CbmMode::RunningReceivingAllowed;
  NanoBits credit = 0;
  int64_t idleslope = 0;
  int64_t sendslope = 0;
  NanoBits credit_max = 0;
  SimTime last_update;
  std::optional<SimTime> receiving_until;

  /// Freshly started meter: R-RA, credit 0.
  static CbmState initial(const CbmParams& params, SimTime start = SimTime{});

  bool receiving() const { return receiving_until.has_value(); }

  friend bool operator==(const CbmState&, const CbmState&) = default;
};

/// Integrates the credit up to `now`. A reception window that ends at or
/// before `now` is closed on the way (mode set from the sign of the credit).
/// Throws InternalError if `now` precedes the last update.
CbmState cbm_advance(CbmState state, SimTime now);

/// First bit of a frame at `now`; `frame_duration` is its line time including IFG.
/// Throws InternalError if a previous accepted reception is still in progress.
std::pair<CbmState, Verdict> cbm_on_frame_start(CbmState state, SimTime now, Duration frame_duration);

/// End of the accepted reception that finishes exactly at `now`. After this the
/// frame is handed to the egress queue. Throws InternalError if no reception
/// ends at `now`.
CbmState cbm_on_frame_end(CbmState state, SimTime now);

}  // namespace tsnsim
