#pragma once

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include "cachecast/binary_program.hpp"
#include "cachecast/graphs.hpp"
#include "cachecast/lp.hpp"

namespace cachecast {

struct Coloring {
  int colors = 0;
  std::vector<int> color_of;
};

inline void check_coloring(const HelperConflictGraph& g, const Coloring& col) {
  if (static_cast<int>(col.color_of.size()) != g.vertices) {
    throw std::logic_error("check_coloring: one color per vertex required");
  }
  for (const auto& [i, j] : g.edges) {
    if (col.color_of[i] == col.color_of[j]) {
      throw std::logic_error("check_coloring: conflict edge is monochromatic");
    }
  }
}

// Saturation-first greedy; ties by higher degree, then lower vertex id.
inline Coloring color_dsatur(const HelperConflictGraph& g) {
  const int n = g.vertices;
  Coloring out;
  out.color_of.assign(n, -1);
  std::vector<std::set<int>> neighbor_colors(n);
  for (int step = 0; step < n; ++step) {
    int best = -1;
    for (int v = 0; v < n; ++v) {
      if (out.color_of[v] >= 0) continue;
      if (best < 0) {
        best = v;
        continue;
      }
      const int sv = static_cast<int>(neighbor_colors[v].size());
      const int sb = static_cast<int>(neighbor_colors[best].size());
      if (sv > sb || (sv == sb && g.degree(v) > g.degree(best))) best = v;
    }
    int c = 0;
    while (neighbor_colors[best].count(c) > 0) ++c;
    out.color_of[best] = c;
    out.colors = std::max(out.colors, c + 1);
    for (int u = 0; u < n; ++u) {
      if (g.adj[best][u]) neighbor_colors[u].insert(c);
    }
  }
  check_coloring(g, out);
  return out;
}

namespace detail {

// Greedy maximal clique seeded at the highest-degree vertex; used to pin
// colors and give the relaxation an immediate lower bound.
inline std::vector<int> greedy_clique(const HelperConflictGraph& g) {
  const int n = g.vertices;
  if (n == 0) return {};
  int start = 0;
  for (int v = 1; v < n; ++v) {
    if (g.degree(v) > g.degree(start)) start = v;
  }
  std::vector<int> clique{start};
  while (true) {
    int pick = -1;
    for (int v = 0; v < n; ++v) {
      bool ok = true;
      for (int q : clique) ok = ok && v != q && g.adj[v][q];
      if (!ok) continue;
      if (pick < 0 || g.degree(v) > g.degree(pick)) pick = v;
    }
    if (pick < 0) break;
    clique.push_back(pick);
  }
  return clique;
}

}  // namespace detail

// Minimum coloring as a binary program: assignment variables x[v][c] and
// color-use variables y[c], budgeted by the greedy color count, with a
// pinned clique and ordered y to cut symmetric branches.
inline Coloring color_exact(const HelperConflictGraph& g, const BinarySolveConfig& cfg = {}) {
  const int n = g.vertices;
  if (n > 30) {
    throw std::invalid_argument(
        "color_exact: gated to 30 vertices; use color_dsatur for larger graphs");
  }
  Coloring seed = color_dsatur(g);
  const int budget = seed.colors;
  if (budget <= 1) return seed;  // edge-free graph: greedy is already optimal
  const std::vector<int> clique = detail::greedy_clique(g);
  if (static_cast<int>(clique.size()) == budget) return seed;  // clique certifies greedy

  LinearProgram lp;
  std::vector<std::vector<int>> x(n, std::vector<int>(budget));
  std::vector<int> y(budget);
  std::vector<int> binaries;
  for (int v = 0; v < n; ++v) {
    for (int c = 0; c < budget; ++c) {
      x[v][c] = lp.add_variable(0.0, 1.0);
      binaries.push_back(x[v][c]);
    }
  }
  for (int c = 0; c < budget; ++c) {
    y[c] = lp.add_variable(0.0, 1.0);
    binaries.push_back(y[c]);
  }
  std::vector<std::pair<int, double>> obj;
  for (int c = 0; c < budget; ++c) obj.emplace_back(y[c], 1.0);
  lp.set_objective(obj);

  for (int v = 0; v < n; ++v) {
    std::vector<std::pair<int, double>> row;
    for (int c = 0; c < budget; ++c) row.emplace_back(x[v][c], 1.0);
    lp.add_constraint(row, LinearProgram::Sense::EQ, 1.0);
  }
  for (const auto& [i, j] : g.edges) {
    for (int c = 0; c < budget; ++c) {
      lp.add_constraint({{x[i][c], 1.0}, {x[j][c], 1.0}, {y[c], -1.0}},
                        LinearProgram::Sense::LE, 0.0);
    }
  }
  for (int v = 0; v < n; ++v) {
    for (int c = 0; c < budget; ++c) {
      lp.add_constraint({{x[v][c], 1.0}, {y[c], -1.0}}, LinearProgram::Sense::LE, 0.0);
    }
  }
  for (int c = 0; c + 1 < budget; ++c) {
    lp.add_constraint({{y[c + 1], 1.0}, {y[c], -1.0}}, LinearProgram::Sense::LE, 0.0);
  }
  for (std::size_t i = 0; i < clique.size(); ++i) {
    const int c = static_cast<int>(i);
    lp.lower[x[clique[i]][c]] = 1.0;
    lp.lower[y[c]] = 1.0;
  }

  BinarySolution sol = solve_binary_min(lp, binaries, cfg);
  if (sol.status == BinarySolution::Status::Abandoned) {
    throw std::runtime_error("color_exact: search budget exhausted; use color_dsatur");
  }
  if (sol.status != BinarySolution::Status::Optimal) {
    throw std::logic_error("color_exact: greedy-budgeted program cannot be infeasible");
  }

  Coloring out;
  out.color_of.assign(n, -1);
  std::vector<int> remap(budget, -1);
  for (int v = 0; v < n; ++v) {
    for (int c = 0; c < budget; ++c) {
      if (sol.x[x[v][c]] > 0.5) {
        if (remap[c] < 0) remap[c] = out.colors++;
        out.color_of[v] = remap[c];
        break;
      }
    }
  }
  check_coloring(g, out);
  return out;
}

}  // namespace cachecast
