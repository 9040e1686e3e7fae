#pragma once

// Shared expectations for the hand-placed 4-helper 6-user instance.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cachecast/example_instance.hpp"
#include "cachecast/graphs.hpp"

namespace fixture {

inline cachecast::CollisionGraph collision_graph() {
  return cachecast::build_collision_graph(cachecast::example_layout());
}

// user -> helpers within the association radius
inline std::vector<std::vector<int>> solid_sets() {
  return {{0}, {1}, {1, 2}, {2, 3}, {2}, {1, 3}};
}

// user -> helpers within the interference radius
inline std::vector<std::vector<int>> reach_sets() {
  return {{0}, {0, 1}, {1, 2, 3}, {2, 3}, {0, 2}, {1, 3}};
}

// helper pairs sharing an interfered user
inline std::vector<std::pair<int, int>> conflict_edges() {
  return {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}};
}

inline std::vector<int> greedy_helper_of() { return {0, 1, 1, 3, 2, 3}; }

constexpr int kChromatic = 3;
constexpr std::uint64_t kGreedyMaxSlots = 3;
constexpr std::uint64_t kAvalancheSlots = 9;

struct Event {
  std::uint64_t t;
  std::string kind;
  int helper;
  std::vector<int> users;
};

// Full schedule of the collision-resolving run, in emission order.
inline std::vector<Event> avalanche_events() {
  return {
      {0, "activate", 0, {0}},
      {2, "columnDone", 0, {0}},
      {2, "serve", 0, {0}},
      {2, "stop", 0, {}},
      {2, "activate", 1, {1}},
      {2, "activate", 2, {4}},
      {4, "columnDone", 1, {1}},
      {4, "serve", 1, {1}},
      {4, "columnDone", 2, {4}},
      {4, "serve", 2, {4}},
      {4, "stop", 1, {}},
      {4, "stop", 2, {}},
      {4, "activate", 3, {3, 5}},
      {7, "columnDone", 3, {3, 5}},
      {7, "serve", 3, {3, 5}},
      {7, "stop", 3, {}},
      {7, "activate", 1, {2}},
      {9, "columnDone", 1, {2}},
      {9, "serve", 1, {2}},
      {9, "stop", 1, {}},
  };
}

inline std::vector<int> avalanche_server_of() { return {0, 1, 1, 3, 2, 3}; }

}  // namespace fixture
