// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

// Credit Based Shaper for the Stream egress queue (802.1Qav semantics).
//
// Credit drains at sendslope while the queue transmits, grows at idleslope
// while frames wait or while the credit is negative, and a positive credit is
// discarded when the queue runs empty. A frame may start only with credit >= 0.

#pragma once

#include <optional>

#include "units.hpp"

namespace tsnsim {

enum class CbsEvent { FrameQueued, TxStart, TxEnd, QueueEmpty };

struct CbsState {
  NanoBits credit = 0;
  int64_t idleslope = 0;
  int64_t sendslope = 0;
  SimTime last_update;
  bool transmitting = false;
  bool backlogged = false;

  static CbsState make(Bandwidth reserved, Bandwidth link);

  friend bool operator==(const CbsState&, const CbsState&) = default;
};

/// Integrates the credit to `now` under the current activity, without an event.
CbsState cbs_advance(CbsState state, SimTime now);

/// Integrates to `now`, then applies `event`.
CbsState cbs_update(CbsState state, SimTime now, CbsEvent event);

/// Earliest instant >= state.last_update at which the credit reaches 0 while
/// waiting, or nullopt if it already is >= 0.
std::optional<SimTime> cbs_eligible_at(const CbsState& state);

}  // namespace tsnsim
