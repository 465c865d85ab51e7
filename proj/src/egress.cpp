// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "egress.hpp"

#include <algorithm>

#include "errors.hpp"

namespace tsnsim {

void EgressPort::enable_cbs(Bandwidth reserved) { cbs_ = CbsState::make(reserved, link_); }

void EgressPort::set_tt_windows(TtWindowSet windows, bool guard_band) {
  windows_ = std::move(windows);
  guard_band_ = guard_band;
}

void EgressPort::enqueue(const Frame& frame, SimTime now) {
  queues_[static_cast<int>(frame.traffic_class)].push_back(frame);
  if (frame.traffic_class == TrafficClass::Stream && cbs_) *cbs_ = cbs_update(*cbs_, now, CbsEvent::FrameQueued);
}

EgressPort::Selection EgressPort::select(SimTime now) {
  if (in_flight_) throw InternalError("egress select on a busy port");
  Selection out;
  auto start = [&](TrafficClass c) {
    auto& q = queues_[static_cast<int>(c)];
    out.frame = q.front();
    q.pop_front();
    out.duration = line_duration(*out.frame);
    in_flight_ = true;
    in_flight_class_ = c;
    busy_until_ = now + out.duration;
    if (c == TrafficClass::Stream && cbs_) *cbs_ = cbs_update(*cbs_, now, CbsEvent::TxStart);
    return out;
  };
  auto note_retry = [&](SimTime t) {
    if (!out.retry_at || t < *out.retry_at) out.retry_at = t;
  };
  // earliest start that keeps a lower-class frame out of the TT windows
  auto permitted = [&](const Frame& f) {
    if (!guard_band_ || windows_.empty()) return now;
    return windows_.next_permitted_start(now, line_duration(f));
  };

  if (!queues_[0].empty()) return start(TrafficClass::TimeTriggered);

  auto& streams = queues_[static_cast<int>(TrafficClass::Stream)];
  if (!streams.empty()) {
    bool credit_ok = true;
    if (cbs_) {
      *cbs_ = cbs_advance(*cbs_, now);
      if (auto t = cbs_eligible_at(*cbs_)) {
        credit_ok = false;
        note_retry(*t);
      }
    }
    const SimTime allowed = permitted(streams.front());
    if (credit_ok && allowed == now) return start(TrafficClass::Stream);
    if (allowed > now) note_retry(allowed);
  }

  auto& best_effort = queues_[static_cast<int>(TrafficClass::BestEffort)];
  if (!best_effort.empty()) {
    const SimTime allowed = permitted(best_effort.front());
    if (allowed == now) return start(TrafficClass::BestEffort);
    note_retry(allowed);
  }
  return out;
}

void EgressPort::on_tx_complete(SimTime now) {
  if (!in_flight_) throw InternalError("tx complete on an idle port");
  in_flight_ = false;
  if (in_flight_class_ == TrafficClass::Stream && cbs_) {
    *cbs_ = cbs_update(*cbs_, now, CbsEvent::TxEnd);
    if (queues_[static_cast<int>(TrafficClass::Stream)].empty()) {
      *cbs_ = cbs_update(*cbs_, now, CbsEvent::QueueEmpty);
    }
  }
}

}  // namespace tsnsim
