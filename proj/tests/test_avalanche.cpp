#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "cachecast/avalanche.hpp"
#include "cachecast/example_instance.hpp"
#include "fixture.hpp"

using namespace cachecast;

namespace {

AvalancheResult fixture_run() {
  return avalanche_run(fixture::collision_graph(), example_assignment(), example_scheme(), 1.0,
                       1.0, 1.0);
}

CollisionGraph lone_cell(int users) {
  CollisionGraph g;
  g.solid_of_helper.assign(1, {});
  for (int k = 0; k < users; ++k) {
    g.solid_of_helper[0].push_back(k);
    g.solid_of_user.push_back({0});
    g.reach_of_user.push_back({0});
  }
  return g;
}

CacheAssignment same_group_pair() {
  CacheAssignment a;
  a.users = 2;
  a.configs = 3;
  a.group_of = {0, 0};
  a.members = {{0, 1}, {}, {}};
  return a;
}

}  // namespace

TEST_CASE("the fixture run reproduces the frozen schedule") {
  const AvalancheResult r = fixture_run();
  CHECK(r.slots == fixture::kAvalancheSlots);
  CHECK(r.t_slot == Catch::Approx(1.0 / 3.0));
  CHECK(r.t_total == Catch::Approx(3.0));
  CHECK(r.server_of == fixture::avalanche_server_of());
  CHECK(r.fallback_activations == 0);

  const std::vector<fixture::Event> want = fixture::avalanche_events();
  REQUIRE(r.trace.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    CAPTURE(i);
    CHECK(r.trace[i].t_slots == want[i].t);
    CHECK(r.trace[i].event == want[i].kind);
    CHECK(r.trace[i].helper == want[i].helper);
    CHECK(r.trace[i].users == want[i].users);
  }
}

TEST_CASE("the fixture trace verifies cleanly") {
  const AvalancheResult r = fixture_run();
  const VerifyResult v =
      verify_trace(fixture::collision_graph(), example_assignment(), example_scheme(), r.trace);
  CHECK(v.ok);
  CHECK(v.error.empty());
  CHECK(v.intervals == 5);
}

TEST_CASE("same-group users drain back to back on one helper") {
  const CollisionGraph cg = lone_cell(2);
  const CacheAssignment assignment = same_group_pair();
  const AvalancheResult r = avalanche_run(cg, assignment, example_scheme(), 2.0, 4.0, 6.0);
  CHECK(r.slots == 4);  // two one-user columns of two slots each
  CHECK(r.t_slot == Catch::Approx(1.0));  // 6 / (3 * min(2, 4))
  CHECK(r.t_total == Catch::Approx(4.0));
  REQUIRE(r.trace.size() == 6);
  CHECK(r.trace[0].event == "activate");
  CHECK(r.trace[0].users == std::vector<int>{0, 1});
  CHECK(r.trace[1].t_slots == 2);
  CHECK(r.trace[3].t_slots == 4);
  CHECK(r.trace[5].event == "stop");

  const VerifyResult v = verify_trace(cg, assignment, example_scheme(), r.trace);
  CHECK(v.ok);
  CHECK(v.intervals == 2);
}

TEST_CASE("a dropped column leaves a user unserved in verification") {
  const AvalancheResult r = fixture_run();
  ScheduleTrace cut;
  for (const TraceEvent& e : r.trace) {
    if (e.t_slots == 9 && e.event == "columnDone") continue;
    cut.push_back(e);
  }
  const VerifyResult v =
      verify_trace(fixture::collision_graph(), example_assignment(), example_scheme(), cut);
  CHECK_FALSE(v.ok);
  CHECK(v.error.find("served 0 times") != std::string::npos);
}

TEST_CASE("a stretched column is caught by the slot-cost table") {
  const AvalancheResult r = fixture_run();
  ScheduleTrace warped = r.trace;
  warped[1].t_slots = 3;  // first columnDone pushed late
  const VerifyResult v =
      verify_trace(fixture::collision_graph(), example_assignment(), example_scheme(), warped);
  CHECK_FALSE(v.ok);
  CHECK(v.error.find("took 3 slots") != std::string::npos);
}

TEST_CASE("a forged overlap with a reaching helper is a collision") {
  ScheduleTrace forged;
  forged.push_back({0, "activate", 0, {0}});
  forged.push_back({0, "activate", 1, {1}});
  forged.push_back({2, "columnDone", 0, {0}});
  forged.push_back({2, "stop", 0, {}});
  forged.push_back({2, "columnDone", 1, {1}});
  forged.push_back({2, "stop", 1, {}});
  const VerifyResult v =
      verify_trace(fixture::collision_graph(), example_assignment(), example_scheme(), forged);
  CHECK_FALSE(v.ok);
  CHECK(v.error.find("hears helper 0") != std::string::npos);
}

TEST_CASE("double service is rejected") {
  const AvalancheResult r = fixture_run();
  ScheduleTrace twice = r.trace;
  twice.push_back({9, "activate", 1, {2}});
  twice.push_back({11, "columnDone", 1, {2}});
  twice.push_back({11, "stop", 1, {}});
  const VerifyResult v =
      verify_trace(fixture::collision_graph(), example_assignment(), example_scheme(), twice);
  CHECK_FALSE(v.ok);
  CHECK(v.error.find("served 2 times") != std::string::npos);
}

TEST_CASE("malformed traces are rejected") {
  const CollisionGraph cg = fixture::collision_graph();

  ScheduleTrace reopened;
  reopened.push_back({0, "activate", 0, {0}});
  reopened.push_back({1, "activate", 0, {0}});
  VerifyResult v = verify_trace(cg, example_assignment(), example_scheme(), reopened);
  CHECK_FALSE(v.ok);
  CHECK(v.error.find("activated while transmitting") != std::string::npos);

  ScheduleTrace headless;
  headless.push_back({2, "columnDone", 0, {0}});
  v = verify_trace(cg, example_assignment(), example_scheme(), headless);
  CHECK_FALSE(v.ok);
  CHECK(v.error.find("without activating") != std::string::npos);

  ScheduleTrace doubled_group;
  doubled_group.push_back({0, "activate", 2, {1, 4}});
  doubled_group.push_back({3, "columnDone", 2, {1, 4}});
  v = verify_trace(cg, example_assignment(), example_scheme(), doubled_group);
  CHECK_FALSE(v.ok);
  CHECK(v.error.find("repeats a caching group") != std::string::npos);

  ScheduleTrace stray;
  stray.push_back({0, "activate", 0, {1}});
  stray.push_back({2, "columnDone", 0, {1}});
  v = verify_trace(cg, example_assignment(), example_scheme(), stray);
  CHECK_FALSE(v.ok);
  CHECK(v.error.find("out-of-cell") != std::string::npos);

  ScheduleTrace unknown;
  unknown.push_back({0, "pause", 0, {}});
  v = verify_trace(cg, example_assignment(), example_scheme(), unknown);
  CHECK_FALSE(v.ok);
  CHECK(v.error.find("unknown event kind") != std::string::npos);
}

TEST_CASE("run-time validation") {
  CacheAssignment three;
  three.users = 3;
  three.configs = 3;
  three.group_of = {0, 0, 1};
  three.members = {{0, 1}, {2}, {}};
  CHECK_THROWS_AS(avalanche_run(lone_cell(2), three, example_scheme(), 1.0, 1.0, 1.0),
                  std::invalid_argument);

  CollisionGraph orphan = lone_cell(1);
  orphan.solid_of_user.push_back({});
  orphan.reach_of_user.push_back({});
  CHECK_THROWS_AS(avalanche_run(orphan, same_group_pair(), example_scheme(), 1.0, 1.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("traces serialize to one JSON object per line") {
  const AvalancheResult r = fixture_run();
  const std::string text = trace_to_json_lines(r.trace);
  std::size_t lines = 0;
  for (char c : text) lines += c == '\n' ? 1 : 0;
  CHECK(lines == r.trace.size());
  CHECK(text.find("{\"t_slots\": 0, \"event\": \"activate\", \"helper\": 0, \"users\": [0]}\n") == 0);
  CHECK(text.find("\"users\": [3, 5]") != std::string::npos);
}
