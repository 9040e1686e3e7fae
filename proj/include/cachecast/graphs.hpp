#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cachecast/layout.hpp"

namespace cachecast {

// Bipartite reachability within the signal radius. Users with no helper in
// range are dropped (and reported); graph users are reindexed 0..n-1 with
// `kept` mapping back to layout indices.
struct TopologicalGraph {
  double c_front = 0.0;
  double c_access = 0.0;
  std::vector<std::vector<int>> users_of;    // helper -> users, ascending
  std::vector<std::vector<int>> helpers_of;  // user -> helpers, ascending
  std::vector<int> kept;                     // graph user -> layout user
  std::vector<int> dropped;                  // layout users with no coverage

  int helper_count() const { return static_cast<int>(users_of.size()); }
  int user_count() const { return static_cast<int>(helpers_of.size()); }
};

inline TopologicalGraph build_topological_graph(const Layout& l) {
  TopologicalGraph g;
  g.c_front = l.c_front_bps;
  g.c_access = l.c_access_bps;
  g.users_of.assign(l.helpers.size(), {});
  for (int u = 0; u < static_cast<int>(l.users.size()); ++u) {
    std::vector<int> hs;
    for (int h = 0; h < static_cast<int>(l.helpers.size()); ++h) {
      if (within(l.users[u], l.helpers[h], l.a_sig_m)) hs.push_back(h);
    }
    if (hs.empty()) {
      g.dropped.push_back(u);
      continue;
    }
    const int idx = static_cast<int>(g.helpers_of.size());
    for (int h : hs) g.users_of[h].push_back(idx);
    g.helpers_of.push_back(std::move(hs));
    g.kept.push_back(u);
  }
  return g;
}

// Serving (solid, within a_cell) and interference-only (dashed, within
// a_interf but beyond a_cell) edges. Every user must have a solid edge.
struct CollisionGraph {
  std::vector<std::vector<int>> solid_of_helper;  // helper -> users
  std::vector<std::vector<int>> solid_of_user;    // user -> helpers
  std::vector<std::vector<int>> reach_of_user;    // user -> helpers within a_interf

  int helper_count() const { return static_cast<int>(solid_of_helper.size()); }
  int user_count() const { return static_cast<int>(solid_of_user.size()); }

  bool dashed(int helper, int user) const {
    const auto& all = reach_of_user[user];
    const auto& solid = solid_of_user[user];
    bool reach = false;
    for (int h : all) reach |= (h == helper);
    if (!reach) return false;
    for (int h : solid) {
      if (h == helper) return false;
    }
    return true;
  }

  bool reaches(int helper, int user) const {
    for (int h : reach_of_user[user]) {
      if (h == helper) return true;
    }
    return false;
  }
};

inline CollisionGraph build_collision_graph(const Layout& l) {
  CollisionGraph g;
  g.solid_of_helper.assign(l.helpers.size(), {});
  g.solid_of_user.assign(l.users.size(), {});
  g.reach_of_user.assign(l.users.size(), {});
  std::vector<int> uncovered;
  for (int u = 0; u < static_cast<int>(l.users.size()); ++u) {
    for (int h = 0; h < static_cast<int>(l.helpers.size()); ++h) {
      if (within(l.users[u], l.helpers[h], l.a_cell_m)) {
        g.solid_of_user[u].push_back(h);
        g.solid_of_helper[h].push_back(u);
        g.reach_of_user[u].push_back(h);
      } else if (within(l.users[u], l.helpers[h], l.a_interf_m)) {
        g.reach_of_user[u].push_back(h);
      }
    }
    if (g.solid_of_user[u].empty()) uncovered.push_back(u);
  }
  if (!uncovered.empty()) {
    std::string msg = "collision model requires every user within a_cell of a helper; uncovered:";
    for (int u : uncovered) msg += " " + std::to_string(u);
    throw std::invalid_argument(msg);
  }
  return g;
}

// Helpers conflict when some user lies within the interference radius of both.
struct HelperConflictGraph {
  int vertices = 0;
  std::vector<std::vector<bool>> adj;
  std::vector<std::pair<int, int>> edges;  // i < j

  int degree(int v) const {
    int d = 0;
    for (int u = 0; u < vertices; ++u) d += adj[v][u] ? 1 : 0;
    return d;
  }
};

inline HelperConflictGraph build_helper_conflict_graph(const CollisionGraph& cg) {
  HelperConflictGraph g;
  g.vertices = cg.helper_count();
  g.adj.assign(g.vertices, std::vector<bool>(g.vertices, false));
  for (const auto& reach : cg.reach_of_user) {
    for (std::size_t a = 0; a < reach.size(); ++a) {
      for (std::size_t b = a + 1; b < reach.size(); ++b) {
        const int i = reach[a], j = reach[b];
        if (!g.adj[i][j]) {
          g.adj[i][j] = g.adj[j][i] = true;
          g.edges.emplace_back(std::min(i, j), std::max(i, j));
        }
      }
    }
  }
  return g;
}

// Restriction of a layout to users with at least one helper within `radius`.
// Returns the filtered layout and the number of users removed.
inline std::pair<Layout, int> covered_subset(const Layout& l, double radius) {
  Layout out = l;
  out.users.clear();
  int removed = 0;
  for (const Point& u : l.users) {
    bool cov = false;
    for (const Point& h : l.helpers) cov |= within(u, h, radius);
    if (cov) {
      out.users.push_back(u);
    } else {
      ++removed;
    }
  }
  return {out, removed};
}

}  // namespace cachecast
