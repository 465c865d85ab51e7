// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#ifndef TSNSIM_SOURCE_DIR
#define TSNSIM_SOURCE_DIR "."
#endif

namespace fixtures {

inline std::string scenario_path(const std::string& name) {
  return std::string(TSNSIM_SOURCE_DIR) + "/scenarios/" + name;
}

// Talker -> switch -> listener with a metered stream and best-effort chatter.
inline const char* kSmall = R"(
[run]
duration = 20ms
seed = 3

[devices]
node Talker Listener Chatter
switch Sw

[links]
link Talker Sw bandwidth=100M
link Chatter Sw bandwidth=100M
link Sw Listener bandwidth=100M

[streams]
stream 1 src=Talker dst=Listener reserved=25M payload=356

[qci]
gate g state=open
meter m burst_max=3 trace=yes
filter Sw port=Talker stream=1 gate=g meter=m

[traffic]
talker stream=1
be_broadcast src=Chatter period=1ms offset=100us
be_reply jitter=200us
attacker node=Talker stream=1 rate=60M
)";

}  // namespace fixtures
