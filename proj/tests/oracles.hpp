// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

// Independent reference models for the tests. They step time one nanosecond
// at a time and share no code with the simulator beyond plain integers.

#pragma once

#include <cstdint>
#include <deque>
#include <vector>

namespace oracle {

// Credit based meter integrated in 1 ns steps. Credit is in nano-bits, so a
// slope in bit/s adds exactly `slope` per step.
class BruteForceMeter {
 public:
  BruteForceMeter(int64_t idleslope, int64_t sendslope, int64_t credit_max, int64_t initial_credit = 0)
      : idle_(idleslope), send_(sendslope), max_(credit_max), credit_(initial_credit) {}

  // Steps the clock to `t`.
  void run_to(int64_t t) {
    while (now_ < t) {
      if (now_ < recv_end_) {
        credit_ += send_;
      } else {
        credit_ += idle_;
        if (credit_ > max_) credit_ = max_;
        if (forbidden_ && credit_ >= 0) forbidden_ = false;
      }
      ++now_;
      if (now_ == recv_end_ && credit_ < 0) forbidden_ = true;
    }
  }

  // First bit of a frame occupying the link for `line_ns`. Returns true if accepted.
  bool frame(int64_t t, int64_t line_ns) {
    run_to(t);
    if (!forbidden_ && credit_ >= 0) {
      recv_end_ = t + line_ns;
      return true;
    }
    if (credit_ < 0) forbidden_ = true;
    return false;
  }

  int64_t credit() const { return credit_; }
  bool forbidden() const { return forbidden_; }

 private:
  int64_t idle_, send_, max_;
  int64_t credit_;
  int64_t now_ = 0;
  int64_t recv_end_ = -1;
  bool forbidden_ = false;
};

// One egress port with a shaped Stream queue above an unshaped best-effort
// queue, stepped in 1 ns. Returns (start time, is_stream) per transmission.
struct OracleFrame {
  int64_t arrival;
  int64_t line_ns;
  bool stream;
};

struct OracleTx {
  int64_t start;
  bool stream;
  friend bool operator==(const OracleTx&, const OracleTx&) = default;
};

inline std::vector<OracleTx> brute_force_cbs(const std::vector<OracleFrame>& frames, int64_t idleslope,
                                             int64_t sendslope, int64_t horizon) {
  std::vector<OracleTx> out;
  std::deque<OracleFrame> sq, bq;
  std::size_t next = 0;
  int64_t credit = 0;
  int64_t busy_until = 0;
  bool sending_stream = false;
  for (int64_t t = 0; t <= horizon; ++t) {
    if (t > 0) {
      // the step [t-1, t)
      if (sending_stream && t <= busy_until) {
        credit += sendslope;
      } else if (!sq.empty()) {
        credit += idleslope;
      } else if (credit < 0) {
        credit = credit + idleslope > 0 ? 0 : credit + idleslope;
      } else {
        credit = 0;
      }
    }
    if (t == busy_until && sending_stream) {
      sending_stream = false;
      if (sq.empty() && credit > 0) credit = 0;
    }
    while (next < frames.size() && frames[next].arrival == t) {
      (frames[next].stream ? sq : bq).push_back(frames[next]);
      ++next;
    }
    if (t < busy_until) continue;
    if (!sq.empty() && credit >= 0) {
      out.push_back({t, true});
      busy_until = t + sq.front().line_ns;
      sending_stream = true;
      sq.pop_front();
    } else if (!bq.empty()) {
      out.push_back({t, false});
      busy_until = t + bq.front().line_ns;
      bq.pop_front();
    }
  }
  return out;
}

}  // namespace oracle
