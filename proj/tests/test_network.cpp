// Copyright 2026 The tsnsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <vector>

#include "doctest.h"
#include "errors.hpp"
#include "event_queue.hpp"
#include "fixtures.hpp"
#include "scenario.hpp"
#include "topology.hpp"
#include "tt_schedule.hpp"

using namespace tsnsim;

TEST_CASE("TT windows: wrap, overlap and gaps") {
  const TtWindowSet w(Duration::from_us(1000), {{Duration::from_us(950), Duration::from_us(100)}});
  REQUIRE(w.windows().size() == 2);
  CHECK(w.windows()[0] == TtWindow{Duration(0), Duration::from_us(50)});
  CHECK(w.max_gap() == Duration::from_us(900));
  CHECK_THROWS_AS(TtWindowSet(Duration::from_us(1000), {{Duration(0), Duration::from_us(100)},
                                                         {Duration::from_us(50), Duration::from_us(10)}}),
                  ConfigError);
  // a window may end exactly where the next starts
  CHECK_NOTHROW(TtWindowSet(Duration::from_us(1000), {{Duration(0), Duration::from_us(100)},
                                                      {Duration::from_us(100), Duration::from_us(10)}}));
}

TEST_CASE("next permitted start skips windows the frame would touch") {
  const TtWindowSet w(Duration::from_us(1000), {{Duration::from_us(100), Duration::from_us(50)}});
  CHECK(w.next_permitted_start(SimTime(0), Duration::from_us(100)) == SimTime(0));
  CHECK(w.next_permitted_start(SimTime(1), Duration::from_us(100)) == SimTime(150000));
  CHECK(w.next_permitted_start(SimTime(120000), Duration::from_us(10)) == SimTime(150000));
  CHECK(w.next_permitted_start(SimTime(1990000), Duration::from_us(200)) == SimTime(2150000));
  CHECK(w.next_permitted_start(SimTime(0), Duration::from_us(951)).ns == INT64_MAX);
  CHECK(TtWindowSet().next_permitted_start(SimTime(7), Duration::from_us(1)) == SimTime(7));
}

TEST_CASE("TT schedule: full-size frames every 500 us leave the 123 us gap") {
  TtFlowPlan a{"a", Duration::from_us(500), {{"S.x", true, Duration(0), Duration(124000)}}};
  TtFlowPlan b{"b", Duration::from_us(500), {{"S.x", true, Duration::from_us(250), Duration(124000)}}};
  const TtSchedule s = tt_schedule({a, b}, Duration::from_us(123));
  CHECK(s.cycle == Duration::from_us(500));
  CHECK(s.ports.at("S.x").max_gap() == Duration(126000));
}

TEST_CASE("TT schedule errors") {
  TtFlowPlan a{"a", Duration::from_us(500), {{"S.x", true, Duration(0), Duration(124000)}}};
  TtFlowPlan b{"b", Duration::from_us(500), {{"S.x", true, Duration::from_us(100), Duration(124000)}}};
  CHECK_THROWS_WITH_AS(tt_schedule({a, b}, Duration::from_us(123)), doctest::Contains("overlapping"), ConfigError);
  TtFlowPlan tight_a{"ta", Duration::from_us(300), {{"S.x", true, Duration(0), Duration(124000)}}};
  TtFlowPlan tight_b{"tb", Duration::from_us(300), {{"S.x", true, Duration::from_us(150), Duration(124000)}}};
  CHECK_THROWS_WITH_AS(tt_schedule({tight_a, tight_b}, Duration::from_us(123)), doctest::Contains("gap"),
                       ConfigError);
  // node outputs are not held to the gap
  TtFlowPlan d{"d", Duration::from_us(300), {{"N.x", false, Duration(0), Duration(124000)}}};
  TtFlowPlan e{"e", Duration::from_us(300), {{"N.x", false, Duration::from_us(150), Duration(124000)}}};
  CHECK_NOTHROW(tt_schedule({d, e}, Duration::from_us(123)));
  CHECK(tt_schedule({}, Duration::from_us(123)).ports.empty());
}

TEST_CASE("TT hyperperiod is the lcm of the periods") {
  TtFlowPlan a{"a", Duration::from_us(300), {{"p", true, Duration(0), Duration(10000)}}};
  TtFlowPlan b{"b", Duration::from_us(200), {{"p", true, Duration::from_us(50), Duration(10000)}}};
  const TtSchedule s = tt_schedule({a, b}, Duration::from_us(10));
  CHECK(s.cycle == Duration::from_us(600));
  CHECK(s.ports.at("p").windows().size() == 5);
}

TEST_CASE("events fire in time order, ties in insertion order") {
  EventQueue q;
  q.schedule(SimTime(20), EventKind::GeneratorFire, 1);
  q.schedule(SimTime(10), EventKind::GeneratorFire, 2);
  q.schedule(SimTime(20), EventKind::GeneratorFire, 3);
  q.schedule(SimTime(10), EventKind::GeneratorFire, 4);
  std::vector<uint32_t> order;
  while (auto ev = q.pop()) order.push_back(ev->target);
  CHECK(order == std::vector<uint32_t>{2, 4, 1, 3});
  CHECK(q.now() == SimTime(20));
  CHECK_THROWS_AS(q.schedule(SimTime(19), EventKind::GeneratorFire, 0), InternalError);
}

TEST_CASE("an event scheduled at the current time runs after the current one") {
  Engine e;
  e.queue().schedule(SimTime(5), EventKind::GeneratorFire, 1);
  std::vector<uint32_t> order;
  e.run_until(SimTime(100), [&](const Event& ev) {
    order.push_back(ev.target);
    if (ev.target == 1) e.queue().schedule(e.now(), EventKind::GeneratorFire, 2);
  });
  CHECK(order == std::vector<uint32_t>{1, 2});
  CHECK(e.events_processed() == 2);
}

TEST_CASE("cancelled events are not delivered") {
  Engine e;
  const EventToken t = e.queue().schedule(SimTime(5), EventKind::TxComplete, 1);
  e.queue().schedule(SimTime(6), EventKind::TxComplete, 2);
  e.queue().cancel(t);
  e.queue().cancel(EventToken{});  // invalid token is ignored
  std::vector<uint32_t> seen;
  e.run_until(SimTime(100), [&](const Event& ev) { seen.push_back(ev.target); });
  CHECK(seen == std::vector<uint32_t>{2});
}

TEST_CASE("run_until stops before the end time and keeps later events") {
  Engine e;
  e.queue().schedule(SimTime(10), EventKind::GeneratorFire, 1);
  e.queue().schedule(SimTime(100), EventKind::GeneratorFire, 2);
  int n = 0;
  e.run_until(SimTime(100), [&](const Event&) { ++n; });
  CHECK(n == 1);
  int pending = 0;
  e.queue().for_each_pending([&](const Event&) { ++pending; });
  CHECK(pending == 1);
}

TEST_CASE("trace hash depends on the event sequence") {
  auto hash_of = [](std::vector<int64_t> times) {
    Engine e;
    for (auto t : times) e.queue().schedule(SimTime(t), EventKind::GeneratorFire, 0);
    e.run_until(SimTime(1000), [](const Event&) {});
    return e.trace_hash();
  };
  CHECK(hash_of({1, 2, 3}) == hash_of({3, 2, 1}));
  CHECK(hash_of({1, 2, 3}) != hash_of({1, 2, 4}));
}

TEST_CASE("topology: ports, names and shortest routes") {
  const Scenario s = parse_scenario(fixtures::kSmall);
  const Topology t(s);
  CHECK(t.device_count() == 4);
  const auto talker = *t.find("Talker");
  const auto sw = *t.find("Sw");
  const auto listener = *t.find("Listener");
  CHECK(t.is_switch(sw));
  CHECK_FALSE(t.is_switch(talker));
  CHECK_FALSE(t.find("Nobody"));
  CHECK(t.ports(sw).size() == 3);
  const auto route = t.route(talker, listener);
  REQUIRE(route);
  REQUIRE(route->size() == 2);
  CHECK(t.port_name((*route)[0].device, (*route)[0].port) == "Talker.Sw");
  CHECK(t.port_name((*route)[1].device, (*route)[1].port) == "Sw.Listener");
  CHECK(t.loop_free());
  CHECK(t.port_toward_neighbour(sw, listener));
  CHECK_FALSE(t.port_toward_neighbour(talker, listener));
}

TEST_CASE("topology: disconnected and looped graphs") {
  Scenario s;
  for (const char* n : {"A", "B", "C"}) s.devices.push_back({n, false});
  s.devices.push_back({"X", true});
  s.devices.push_back({"Y", true});
  s.links = {{"A", "X"}, {"X", "Y"}, {"Y", "B"}};
  Topology open(s);
  CHECK(open.loop_free());
  CHECK_FALSE(open.route(*open.find("A"), *open.find("C")));
  CHECK(open.route(*open.find("A"), *open.find("B"))->size() == 3);
  s.links.push_back({"A", "Y"});
  Topology looped(s);
  CHECK_FALSE(looped.loop_free());
  CHECK(looped.route(*looped.find("A"), *looped.find("B"))->size() == 2);
}
