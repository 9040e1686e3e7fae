#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "cachecast/coloring.hpp"
#include "cachecast/rng.hpp"
#include "fixture.hpp"

using namespace cachecast;

namespace {

HelperConflictGraph graph_from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  HelperConflictGraph g;
  g.vertices = n;
  g.adj.assign(n, std::vector<bool>(n, false));
  for (const auto& [i, j] : edges) {
    g.adj[i][j] = g.adj[j][i] = true;
    g.edges.emplace_back(i, j);
  }
  return g;
}

HelperConflictGraph random_graph(int n, double p, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.uniform() < p) edges.emplace_back(i, j);
    }
  }
  return graph_from_edges(n, edges);
}

}  // namespace

TEST_CASE("saturation-first coloring of the fixture conflict graph") {
  const HelperConflictGraph g = build_helper_conflict_graph(fixture::collision_graph());
  const Coloring col = color_dsatur(g);
  CHECK(col.colors == fixture::kChromatic);
  CHECK(col.color_of == std::vector<int>{2, 0, 1, 2});
  CHECK_NOTHROW(check_coloring(g, col));
}

TEST_CASE("exact coloring of the fixture is certified by its triangle") {
  const HelperConflictGraph g = build_helper_conflict_graph(fixture::collision_graph());
  const Coloring col = color_exact(g);
  CHECK(col.colors == fixture::kChromatic);
  CHECK_NOTHROW(check_coloring(g, col));
}

TEST_CASE("structured graphs color to their known chromatic numbers") {
  const HelperConflictGraph path = graph_from_edges(3, {{0, 1}, {1, 2}});
  CHECK(color_dsatur(path).colors == 2);
  CHECK(color_exact(path).colors == 2);

  const HelperConflictGraph k4 =
      graph_from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  CHECK(color_dsatur(k4).colors == 4);
  CHECK(color_exact(k4).colors == 4);

  const HelperConflictGraph k33 = graph_from_edges(
      6, {{0, 3}, {0, 4}, {0, 5}, {1, 3}, {1, 4}, {1, 5}, {2, 3}, {2, 4}, {2, 5}});
  CHECK(color_dsatur(k33).colors == 2);
  CHECK(color_exact(k33).colors == 2);
}

TEST_CASE("an odd cycle needs three colors through the search path") {
  // The largest clique has two vertices, so the certificate shortcut cannot
  // fire and the binary program must prove three colors are necessary.
  const HelperConflictGraph c5 =
      graph_from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
  const Coloring greedy = color_dsatur(c5);
  CHECK(greedy.colors == 3);
  const Coloring exact = color_exact(c5);
  CHECK(exact.colors == 3);
  CHECK_NOTHROW(check_coloring(c5, exact));
}

TEST_CASE("trivial graphs") {
  const HelperConflictGraph empty = graph_from_edges(0, {});
  CHECK(color_dsatur(empty).colors == 0);
  CHECK(color_exact(empty).colors == 0);

  const HelperConflictGraph lone = graph_from_edges(1, {});
  CHECK(color_dsatur(lone).colors == 1);
  CHECK(color_exact(lone).colors == 1);

  const HelperConflictGraph pair = graph_from_edges(2, {{0, 1}});
  CHECK(color_exact(pair).colors == 2);
}

TEST_CASE("exact coloring is gated on graph size") {
  const HelperConflictGraph big = graph_from_edges(31, {});
  CHECK_THROWS_AS(color_exact(big), std::invalid_argument);
}

TEST_CASE("coloring validation rejects broken colorings") {
  const HelperConflictGraph path = graph_from_edges(3, {{0, 1}, {1, 2}});
  Coloring short_col;
  short_col.colors = 1;
  short_col.color_of = {0, 1};
  CHECK_THROWS_AS(check_coloring(path, short_col), std::logic_error);
  Coloring mono;
  mono.colors = 1;
  mono.color_of = {0, 0, 0};
  CHECK_THROWS_AS(check_coloring(path, mono), std::logic_error);
}

TEST_CASE("exact coloring never trails the greedy on random graphs") {
  for (std::uint64_t seed : {11ULL, 12ULL, 13ULL}) {
    const HelperConflictGraph g = random_graph(9, 0.45, seed);
    const Coloring greedy = color_dsatur(g);
    const Coloring exact = color_exact(g);
    CAPTURE(seed, greedy.colors, exact.colors);
    CHECK(exact.colors <= greedy.colors);
    CHECK_NOTHROW(check_coloring(g, exact));
  }
}
