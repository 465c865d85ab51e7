// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "event_queue.hpp"

#include <algorithm>
#include <string>

#include "errors.hpp"

namespace tsnsim {

namespace {

// Min-heap on (at, seq).
bool later(const Event& a, const Event& b) {
  if (a.at != b.at) return a.at > b.at;
  return a.seq > b.seq;
}

}  // namespace

EventToken EventQueue::schedule(SimTime at, EventKind kind, uint32_t target, uint32_t port, Frame frame) {
  if (at < now_) {
    throw InternalError("event scheduled in the past: " + std::to_string(at.ns) + " < " + std::to_string(now_.ns));
  }
  const uint64_t seq = next_seq_++;
  heap_.push_back(Event{at, seq, kind, target, port, std::move(frame)});
  std::push_heap(heap_.begin(), heap_.end(), later);
  return EventToken{seq};
}

void EventQueue::cancel(EventToken token) {
  if (!token.valid() || token.seq >= next_seq_) return;
  if (cancelled_.size() <= token.seq) cancelled_.resize(token.seq + 1, false);
  cancelled_[token.seq] = true;
}

void EventQueue::drop_cancelled_top() {
  while (!heap_.empty() && is_cancelled(heap_.front().seq)) {
    std::pop_heap(heap_.begin(), heap_.end(), later);
    heap_.pop_back();
  }
}

std::optional<Event> EventQueue::pop() {
  drop_cancelled_top();
  if (heap_.empty()) return std::nullopt;
  std::pop_heap(heap_.begin(), heap_.end(), later);
  Event ev = std::move(heap_.back());
  heap_.pop_back();
  if (ev.at < now_) throw InternalError("event time regression");
  now_ = ev.at;
  return ev;
}

std::optional<SimTime> EventQueue::peek_time() {
  drop_cancelled_top();
  if (heap_.empty()) return std::nullopt;
  return heap_.front().at;
}

bool EventQueue::empty() {
  drop_cancelled_top();
  return heap_.empty();
}

void EventQueue::for_each_pending(const std::function<void(const Event&)>& fn) const {
  for (const auto& ev : heap_) {
    if (!is_cancelled(ev.seq)) fn(ev);
  }
}

void Engine::run_until(SimTime end, const Handler& handler) {
  for (;;) {
    const auto next = queue_.peek_time();
    if (!next || *next >= end) break;
    const Event ev = *queue_.pop();
    // FNV-1a over (at, kind, target, port)
    auto mix = [this](uint64_t v) {
      for (int i = 0; i < 8; ++i) {
        trace_hash_ ^= (v >> (8 * i)) & 0xff;
        trace_hash_ *= 1099511628211ull;
      }
    };
    mix(static_cast<uint64_t>(ev.at.ns));
    mix(static_cast<uint64_t>(ev.kind) | (static_cast<uint64_t>(ev.target) << 8) |
        (static_cast<uint64_t>(ev.port) << 40));
    ++processed_;
    handler(ev);
  }
}

}  // namespace tsnsim
