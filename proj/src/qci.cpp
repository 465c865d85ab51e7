// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qci.hpp"

#include "errors.hpp"

namespace tsnsim {

GateState StreamGate::state_at(SimTime t) const {
  if (schedule.empty() || period.ns <= 0) return state;
  const int64_t phase = ((t.ns % period.ns) + period.ns) % period.ns;
  GateState current = schedule.back().state;  // wraps from the previous cycle
  for (const auto& e : schedule) {
    if (e.offset.ns > phase) break;
    current = e.state;
  }
  return current;
}

void StreamGate::validate() const {
  if (schedule.empty()) return;
  if (period.ns <= 0) throw ConfigError("gate schedule needs a positive period");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i].offset.ns < 0 || schedule[i].offset >= period) {
      throw ConfigError("gate schedule offset " + format_duration(schedule[i].offset) + " outside period " +
                        format_duration(period));
    }
    if (i > 0 && schedule[i].offset <= schedule[i - 1].offset) {
      throw ConfigError("gate schedule offsets must be strictly increasing");
    }
  }
}

const char* to_string(DropReason r) {
  switch (r) {
    case DropReason::GateClosed: return "gate_closed";
    case DropReason::MeterExceeded: return "meter";
    case DropReason::NoFilter: return "no_filter";
  }
  return "?";
}

GateIndex IngressPolicer::add_gate(StreamGate gate) {
  gate.validate();
  gates_.push_back(std::move(gate));
  return gates_.size() - 1;
}

MeterIndex IngressPolicer::add_meter(const CbmParams& params) {
  meters_.push_back(CbmState::initial(params));
  return meters_.size() - 1;
}

void IngressPolicer::add_filter(std::size_t port, StreamFilter filter) {
  if (filter.gate >= gates_.size()) throw ConfigError("stream filter references unknown gate");
  if (filter.meter >= meters_.size()) throw ConfigError("stream filter references unknown meter");
  const auto [it, inserted] = filters_.emplace(std::pair{port, filter.stream}, filter);
  if (!inserted) {
    throw ConfigError("duplicate stream filter for stream " + std::to_string(filter.stream) + " on one port");
  }
}

const StreamFilter* IngressPolicer::find_filter(std::size_t port, StreamId stream) const {
  const auto it = filters_.find({port, stream});
  return it == filters_.end() ? nullptr : &it->second;
}

IngressDecision IngressPolicer::on_frame_start(std::size_t port, const Frame& frame, SimTime now,
                                               Duration line_duration) {
  const StreamFilter* filter = frame.stream ? find_filter(port, *frame.stream) : nullptr;
  if (filter == nullptr) {
    if (strict_unmatched_ && frame.traffic_class == TrafficClass::Stream) {
      return IngressDecision{false, DropReason::NoFilter, std::nullopt};
    }
    return IngressDecision{};
  }
  if (gates_[filter->gate].state_at(now) == GateState::Closed) {
    return IngressDecision{false, DropReason::GateClosed, std::nullopt};
  }
  auto [state, verdict] = cbm_on_frame_start(meters_[filter->meter], now, line_duration);
  meters_[filter->meter] = state;
  if (observer_) observer_(filter->meter, now, state);
  if (verdict == Verdict::Drop) return IngressDecision{false, DropReason::MeterExceeded, std::nullopt};
  return IngressDecision{true, DropReason::NoFilter, filter->meter};
}

void IngressPolicer::on_frame_end(MeterIndex meter, SimTime now) {
  meters_.at(meter) = cbm_on_frame_end(meters_.at(meter), now);
  if (observer_) observer_(meter, now, meters_[meter]);
}

}  // namespace tsnsim
