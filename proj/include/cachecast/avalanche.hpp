#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cachecast/graphs.hpp"
#include "cachecast/library.hpp"
#include "cachecast/multiround.hpp"

namespace cachecast {

struct TraceEvent {
  std::uint64_t t_slots = 0;
  std::string event;  // activate | columnDone | stop | serve
  int helper = -1;
  std::vector<int> users;
};

using ScheduleTrace = std::vector<TraceEvent>;

struct AvalancheResult {
  std::uint64_t slots = 0;
  double t_slot = 0.0;
  double t_total = 0.0;
  ScheduleTrace trace;
  std::vector<int> server_of;  // user -> helper that delivered it
  int fallback_activations = 0;
  int epochs = 0;
};

// Helpers drain their delivery arrays column by column and go quiet; a user
// joins a helper only once every other helper it can hear has already run
// dry, so each stop wave frees the next set of users.
inline AvalancheResult avalanche_run(const CollisionGraph& cg, const CacheAssignment& assignment,
                                     const CacheScheme& scheme, double c_front, double c_access,
                                     double F) {
  const int K = cg.user_count();
  const int H = cg.helper_count();
  const int L = scheme.configs;
  const int t_prime = scheme.replication;
  if (assignment.users != K) {
    throw std::invalid_argument("avalanche_run: assignment and graph disagree on user count");
  }
  for (int k = 0; k < K; ++k) {
    if (cg.solid_of_user[k].empty()) {
      throw std::invalid_argument("avalanche_run: user without any in-cell helper");
    }
  }

  enum class State { Idle, Active, Stopped };
  std::vector<State> state(H, State::Idle);
  std::vector<DeliveryArray> array;
  array.reserve(H);
  for (int h = 0; h < H; ++h) array.push_back(build_delivery_array(std::vector<std::vector<int>>(L)));
  std::vector<int> cur_col(H, 0);
  std::vector<bool> started(H, false);
  std::vector<std::uint64_t> finish(H, 0);
  std::vector<int> pending(H, 0);
  std::vector<int> assigned_to(K, -1);
  std::vector<bool> served(K, false);
  int unserved = K;

  AvalancheResult out;
  out.server_of.assign(K, -1);
  std::uint64_t D = 0;

  auto servable = [&](int user, int helper) {
    for (int other : cg.reach_of_user[user]) {
      if (other != helper && state[other] != State::Stopped) return false;
    }
    return true;
  };
  auto guard_ok = [&](int helper) {
    for (int u = 0; u < K; ++u) {
      if (served[u] || assigned_to[u] < 0 || assigned_to[u] == helper) continue;
      if (state[assigned_to[u]] == State::Active && cg.reaches(helper, u)) return false;
    }
    return true;
  };
  auto place = [&](int user, int helper) {
    const int min_col = started[helper] ? cur_col[helper] + 1 : cur_col[helper];
    array[helper].append_user(user, assignment.group_of[user], min_col);
    assigned_to[user] = helper;
    pending[helper] += 1;
  };

  auto replenish = [&]() {
    std::map<int, std::vector<int>> activated;  // helper -> batch this epoch
    for (int k = 0; k < K; ++k) {
      if (served[k] || assigned_to[k] >= 0) continue;
      for (int h : cg.solid_of_user[k]) {
        if (!servable(k, h)) continue;
        if (state[h] == State::Active) {
          place(k, h);
          auto it = activated.find(h);
          if (it != activated.end()) it->second.push_back(k);
          break;
        }
        if (guard_ok(h)) {
          state[h] = State::Active;
          place(k, h);
          activated[h].push_back(k);
          break;
        }
      }
    }
    bool any_active = false;
    for (int h = 0; h < H; ++h) any_active |= state[h] == State::Active;
    if (!any_active && unserved > 0) {
      int pick = -1;
      for (int h = 0; h < H && pick < 0; ++h) {
        for (int u : cg.solid_of_helper[h]) {
          if (!served[u] && assigned_to[u] < 0) {
            pick = h;
            break;
          }
        }
      }
      if (pick < 0) throw std::logic_error("avalanche_run: unserved user with no idle helper");
      state[pick] = State::Active;
      for (int u : cg.solid_of_helper[pick]) {
        if (!served[u] && assigned_to[u] < 0) {
          place(u, pick);
          activated[pick].push_back(u);
        }
      }
      out.fallback_activations += 1;
    }
    for (auto& [h, batch] : activated) {
      std::sort(batch.begin(), batch.end());
      out.trace.push_back({D, "activate", h, batch});
    }
    for (int h = 0; h < H; ++h) {
      if (state[h] != State::Active || started[h]) continue;
      const int present = array[h].present_count(cur_col[h]);
      if (present <= 0) throw std::logic_error("avalanche_run: active helper with empty column");
      finish[h] = D + round_xor_count(present, L, t_prime);
      started[h] = true;
    }
  };

  replenish();
  const long safety_budget =
      1000 + 10L * (K + H + static_cast<long>(L) * std::max(H, 1));
  while (unserved > 0) {
    out.epochs += 1;
    if (out.epochs > safety_budget) {
      std::ostringstream dump;
      dump << "avalanche_run: no progress after " << out.epochs << " epochs; unserved:";
      for (int k = 0; k < K; ++k) {
        if (!served[k]) dump << ' ' << k;
      }
      throw std::runtime_error(dump.str());
    }
    bool any_active = false;
    std::uint64_t next = 0;
    for (int h = 0; h < H; ++h) {
      if (state[h] != State::Active) continue;
      next = any_active ? std::min(next, finish[h]) : finish[h];
      any_active = true;
    }
    if (!any_active) {
      replenish();
      continue;
    }
    D = next;
    std::vector<int> done;
    for (int h = 0; h < H; ++h) {
      if (state[h] == State::Active && finish[h] == D) done.push_back(h);
    }
    for (int h : done) {
      auto column = array[h].column_users(cur_col[h]);
      std::vector<int> users;
      for (const auto& [group, user] : column) users.push_back(user);
      std::sort(users.begin(), users.end());
      for (int u : users) {
        served[u] = true;
        out.server_of[u] = h;
        pending[h] -= 1;
        unserved -= 1;
      }
      cur_col[h] += 1;
      started[h] = false;
      out.trace.push_back({D, "columnDone", h, users});
      out.trace.push_back({D, "serve", h, users});
    }
    for (int h : done) {
      if (pending[h] == 0) {
        state[h] = State::Stopped;
        out.trace.push_back({D, "stop", h, {}});
      }
    }
    replenish();
  }

  out.slots = D;
  const double denom = static_cast<double>(binomial(L, t_prime));
  out.t_slot = F / (denom * std::min(c_front, c_access));
  out.t_total = static_cast<double>(out.slots) * out.t_slot;
  return out;
}

inline std::string trace_to_json_lines(const ScheduleTrace& trace) {
  std::ostringstream os;
  for (const TraceEvent& e : trace) {
    os << "{\"t_slots\": " << e.t_slots << ", \"event\": \"" << e.event
       << "\", \"helper\": " << e.helper << ", \"users\": [";
    for (std::size_t i = 0; i < e.users.size(); ++i) {
      os << (i > 0 ? ", " : "") << e.users[i];
    }
    os << "]}\n";
  }
  return os.str();
}

struct VerifyResult {
  bool ok = true;
  std::string error;
  int intervals = 0;
};

namespace detail {

struct Transmission {
  std::uint64_t start = 0, end = 0;
  int helper = -1;
  std::vector<int> users;
};

}  // namespace detail

// Replays a trace against the geometry: every served user must be in cell of
// its server, hear no other transmission during its serving column, and be
// served exactly once; column lengths must match the slot-cost table.
inline VerifyResult verify_trace(const CollisionGraph& cg, const CacheAssignment& assignment,
                                 const CacheScheme& scheme, const ScheduleTrace& trace) {
  VerifyResult res;
  auto fail = [&](const std::string& why) {
    if (res.ok) {
      res.ok = false;
      res.error = why;
    }
  };
  const int K = cg.user_count();
  const int L = scheme.configs;
  const int t_prime = scheme.replication;
  std::vector<detail::Transmission> sent;
  std::map<int, std::uint64_t> open_since;  // helper -> column start
  std::uint64_t clock = 0;
  for (const TraceEvent& e : trace) {
    if (e.t_slots < clock) fail("events out of order at slot " + std::to_string(e.t_slots));
    clock = std::max(clock, e.t_slots);
    if (e.event == "activate") {
      if (open_since.count(e.helper) > 0) {
        fail("helper " + std::to_string(e.helper) + " activated while transmitting");
      }
      open_since[e.helper] = e.t_slots;
    } else if (e.event == "columnDone") {
      auto it = open_since.find(e.helper);
      if (it == open_since.end()) {
        fail("helper " + std::to_string(e.helper) + " finished a column without activating");
        continue;
      }
      detail::Transmission tx{it->second, e.t_slots, e.helper, e.users};
      const std::uint64_t want = round_xor_count(static_cast<int>(e.users.size()), L, t_prime);
      if (tx.end - tx.start != want) {
        fail("column of helper " + std::to_string(e.helper) + " took " +
             std::to_string(tx.end - tx.start) + " slots, expected " + std::to_string(want));
      }
      std::vector<int> groups;
      for (int u : e.users) groups.push_back(assignment.group_of[u]);
      std::sort(groups.begin(), groups.end());
      if (std::adjacent_find(groups.begin(), groups.end()) != groups.end()) {
        fail("column of helper " + std::to_string(e.helper) + " repeats a caching group");
      }
      sent.push_back(std::move(tx));
      open_since[e.helper] = e.t_slots;  // next column starts back-to-back unless stopped
    } else if (e.event == "stop") {
      open_since.erase(e.helper);
    } else if (e.event != "serve") {
      fail("unknown event kind: " + e.event);
    }
  }
  res.intervals = static_cast<int>(sent.size());

  std::vector<int> served_count(K, 0);
  for (const auto& tx : sent) {
    for (int u : tx.users) {
      if (u < 0 || u >= K) {
        fail("serve of unknown user " + std::to_string(u));
        continue;
      }
      served_count[u] += 1;
      const auto& solid = cg.solid_of_user[u];
      if (std::find(solid.begin(), solid.end(), tx.helper) == solid.end()) {
        fail("user " + std::to_string(u) + " served by out-of-cell helper " +
             std::to_string(tx.helper));
      }
      for (const auto& other : sent) {
        if (other.helper == tx.helper) continue;
        if (std::max(tx.start, other.start) < std::min(tx.end, other.end) &&
            cg.reaches(other.helper, u)) {
          fail("user " + std::to_string(u) + " hears helper " + std::to_string(other.helper) +
               " while served by helper " + std::to_string(tx.helper));
        }
      }
    }
  }
  for (int u = 0; u < K; ++u) {
    if (served_count[u] != 1) {
      fail("user " + std::to_string(u) + " served " + std::to_string(served_count[u]) +
           " times");
    }
  }
  return res;
}

}  // namespace cachecast
