#pragma once

#include "cachecast/combinatorics.hpp"
#include "cachecast/layout.hpp"
#include "cachecast/library.hpp"

namespace cachecast {

// Small hand-placed instance used by the docs, the CLI trace example, and the
// test suite: 4 helpers, 6 users, 3 cache configurations with t' = 1.
inline Layout example_layout() {
  Layout l;
  l.region_radius_m = 1000.0;
  l.a_sig_m = 220.0;
  l.a_cell_m = 200.0;
  l.a_interf_m = 240.0;
  l.c_front_bps = 1.0;
  l.c_access_bps = 1.0;
  l.helpers = {{0.0, 0.0}, {250.0, 170.0}, {270.0, -170.0}, {520.0, 0.0}};
  l.users = {{-80.0, 0.0}, {170.0, 155.0}, {285.0, 0.0},
             {400.0, -120.0}, {155.0, -170.0}, {385.0, 125.0}};
  return l;
}

inline CacheAssignment example_assignment() {
  CacheAssignment a;
  a.users = 6;
  a.configs = 3;
  a.group_of = {0, 0, 1, 2, 0, 1};
  a.members = {{0, 1, 4}, {2, 5}, {3}};
  return a;
}

inline CacheScheme example_scheme() { return CacheScheme{3, 1, k_subsets(3, 1)}; }

}  // namespace cachecast
