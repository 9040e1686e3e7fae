#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "cachecast/association.hpp"
#include "cachecast/example_instance.hpp"
#include "fixture.hpp"

using namespace cachecast;

namespace {

CollisionGraph manual_graph(int helpers, const std::vector<std::vector<int>>& solid_of_user) {
  CollisionGraph g;
  g.solid_of_helper.assign(helpers, {});
  g.solid_of_user = solid_of_user;
  g.reach_of_user = solid_of_user;
  for (int k = 0; k < static_cast<int>(solid_of_user.size()); ++k) {
    for (int h : solid_of_user[k]) g.solid_of_helper[h].push_back(k);
  }
  return g;
}

CollisionGraph random_solid_graph(int helpers, int users, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<int>> solid(users);
  for (int k = 0; k < users; ++k) {
    for (int h = 0; h < helpers; ++h) {
      if (rng.uniform() < 0.5) solid[k].push_back(h);
    }
    if (solid[k].empty()) solid[k].push_back(static_cast<int>(rng.uniform_int(helpers)));
  }
  return manual_graph(helpers, solid);
}

}  // namespace

TEST_CASE("greedy association replays the fixture trace") {
  const CollisionGraph cg = fixture::collision_graph();
  const Association a = associate_greedy(cg, example_assignment(), example_scheme());
  CHECK(a.helper_of == fixture::greedy_helper_of());
  CHECK(a.max_slots == fixture::kGreedyMaxSlots);
  CHECK_FALSE(a.certified_exact);
  CHECK(a.users_of[1] == std::vector<int>{1, 2});
  CHECK(a.users_of[3] == std::vector<int>{3, 5});
  CHECK(a.occupancy[3] == std::vector<int>{0, 1, 1});
  CHECK(a.slots_of[0] == 2);
  CHECK(a.slots_of[1] == 3);
  CHECK(a.slots_of[2] == 2);
  CHECK(a.slots_of[3] == 3);
}

TEST_CASE("the exact association matches the fixture optimum") {
  const CollisionGraph cg = fixture::collision_graph();
  const Association a = associate_exact(cg, example_assignment(), example_scheme());
  CHECK(a.certified_exact);
  // Six users over four helpers force a two-user helper, which costs three
  // slots at best; the greedy already achieves that.
  CHECK(a.max_slots == fixture::kGreedyMaxSlots);
}

TEST_CASE("random association is deterministic and in-cell") {
  const CollisionGraph cg = fixture::collision_graph();
  const Association a = associate_random(cg, example_assignment(), example_scheme(), 42);
  const Association b = associate_random(cg, example_assignment(), example_scheme(), 42);
  CHECK(a.helper_of == b.helper_of);
  const Association c = associate_random(cg, example_assignment(), example_scheme(), 43);
  CHECK(a.max_slots >= fixture::kGreedyMaxSlots);  // 3 is the instance optimum
  CHECK(c.max_slots >= fixture::kGreedyMaxSlots);
  for (int k = 0; k < cg.user_count(); ++k) {
    const auto& hs = cg.solid_of_user[k];
    CHECK(std::find(hs.begin(), hs.end(), a.helper_of[k]) != hs.end());
  }
}

TEST_CASE("exact association never trails the greedy") {
  const CacheScheme scheme{3, 1, k_subsets(3, 1)};
  for (std::uint64_t seed : {21ULL, 22ULL, 23ULL, 24ULL}) {
    const CollisionGraph cg = random_solid_graph(3, 7, seed);
    const CacheAssignment assignment = assign_caches(7, 3, seed + 1000);
    const Association greedy = associate_greedy(cg, assignment, scheme);
    const Association exact = associate_exact(cg, assignment, scheme);
    CAPTURE(seed, greedy.max_slots, exact.max_slots);
    CHECK(exact.certified_exact);
    CHECK(exact.max_slots <= greedy.max_slots);
  }
}

TEST_CASE("balanced placement is found when groups do not matter") {
  // Four interchangeable users over two helpers: two per helper is optimal.
  const CollisionGraph cg = manual_graph(2, {{0, 1}, {0, 1}, {0, 1}, {0, 1}});
  CacheAssignment assignment;
  assignment.users = 4;
  assignment.configs = 2;
  assignment.group_of = {0, 0, 1, 1};
  assignment.members = {{0, 1}, {2, 3}};
  const CacheScheme scheme{2, 0, k_subsets(2, 0)};
  const Association exact = associate_exact(cg, assignment, scheme);
  CHECK(exact.certified_exact);
  CHECK(exact.max_slots == 2);
}

TEST_CASE("oversized instances fall back to the greedy") {
  const CollisionGraph cg = manual_graph(1, {{0}, {0}});
  CacheAssignment assignment;
  assignment.users = 2;
  assignment.configs = 7;
  assignment.group_of = {0, 1};
  assignment.members = {{0}, {1}, {}, {}, {}, {}, {}};
  const CacheScheme scheme{7, 1, k_subsets(7, 1)};
  const Association a = associate_exact(cg, assignment, scheme);
  CHECK_FALSE(a.certified_exact);
  CHECK(a.max_slots == associate_greedy(cg, assignment, scheme).max_slots);

  std::vector<std::vector<int>> wide(16, {0, 1});
  const CollisionGraph many = manual_graph(2, wide);
  const CacheAssignment wide_assignment = assign_caches(16, 3, 7);
  const CacheScheme small{3, 1, k_subsets(3, 1)};
  const Association b = associate_exact(many, wide_assignment, small);
  CHECK_FALSE(b.certified_exact);
}

TEST_CASE("association validates its inputs") {
  const CollisionGraph cg = fixture::collision_graph();
  CacheAssignment wrong_users = example_assignment();
  wrong_users.users = 5;
  CHECK_THROWS_AS(associate_greedy(cg, wrong_users, example_scheme()), std::invalid_argument);

  CacheAssignment wrong_configs = example_assignment();
  wrong_configs.configs = 4;
  CHECK_THROWS_AS(associate_greedy(cg, wrong_configs, example_scheme()), std::invalid_argument);

  CollisionGraph orphan = manual_graph(1, {{0}, {}});
  CacheAssignment two;
  two.users = 2;
  two.configs = 3;
  two.group_of = {0, 1};
  two.members = {{0}, {1}, {}};
  CHECK_THROWS_AS(associate_greedy(orphan, two, example_scheme()), std::invalid_argument);
}

TEST_CASE("reuse delivery time combines load and reuse order") {
  const CollisionGraph cg = fixture::collision_graph();
  const Association a = associate_greedy(cg, example_assignment(), example_scheme());
  const HelperConflictGraph conflicts = build_helper_conflict_graph(cg);
  const Coloring col = color_dsatur(conflicts);
  REQUIRE(col.colors == 3);
  // Load 3/3 = 1 stretched by three orthogonal subframes on the access side.
  CHECK(reuse_delivery_time(col, a, example_scheme(), 1.0, 1.0, 1.0) == Catch::Approx(3.0));
  // A fast access link leaves the fronthaul as the bottleneck.
  CHECK(reuse_delivery_time(col, a, example_scheme(), 1.0, 6.0, 1.0) == Catch::Approx(1.0));
  // Time scales linearly with the file size.
  CHECK(reuse_delivery_time(col, a, example_scheme(), 1.0, 1.0, 2.0) == Catch::Approx(6.0));
}
