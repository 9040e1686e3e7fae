#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "cachecast/lp.hpp"

namespace cachecast {

struct BinarySolveConfig {
  std::int64_t node_budget = 200000;
  double integrality_tol = 1e-6;
  // Prune margin below the incumbent; safe when objective values over binary
  // assignments are separated by more than this.
  double prune_gap = 1e-6;
};

struct BinarySolution {
  enum class Status { Optimal, Infeasible, Abandoned };
  Status status = Status::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
  std::int64_t nodes = 0;
};

// Depth-first branch and bound minimizing lp's objective with the listed
// variables restricted to {0, 1}. Other variables stay continuous.
inline BinarySolution solve_binary_min(const LinearProgram& base,
                                       const std::vector<int>& binary_vars,
                                       const BinarySolveConfig& cfg = {}) {
  BinarySolution best;
  best.objective = kInf;
  std::int64_t nodes = 0;
  bool abandoned = false;

  struct Fix {
    int var;
    double value;
  };
  std::vector<Fix> fixes;

  auto apply = [&](LinearProgram lp, const std::vector<Fix>& fs) {
    for (const auto& f : fs) {
      lp.lower[f.var] = f.value;
      lp.upper[f.var] = f.value;
    }
    return lp;
  };

  std::function<void()> recurse = [&]() {
    if (abandoned) return;
    if (++nodes > cfg.node_budget) {
      abandoned = true;
      return;
    }
    LinearProgram node = apply(base, fixes);
    FeasibilityResult feas = check_feasible(node);
    if (!feas.feasible) return;
    LpSolution rel = optimize(node);
    if (rel.status == LpSolution::Status::Optimal) {
      if (rel.objective >= best.objective - cfg.prune_gap) return;
    } else {
      // No trustworthy bound; keep branching from the feasible point.
      rel.x = feas.point;
    }
    // Most fractional unfixed binary branches first.
    int branch_var = -1;
    double branch_frac = -1.0;
    for (int v : binary_vars) {
      const double val = rel.x[v];
      const double dist = std::min(val, 1.0 - val);
      if (dist > cfg.integrality_tol && dist > branch_frac) {
        branch_frac = dist;
        branch_var = v;
      }
    }
    if (branch_var < 0) {
      std::vector<double> cand = rel.x;
      for (int v : binary_vars) cand[v] = cand[v] >= 0.5 ? 1.0 : 0.0;
      LinearProgram rounded = apply(base, fixes);
      for (int v : binary_vars) {
        rounded.lower[v] = cand[v];
        rounded.upper[v] = cand[v];
      }
      FeasibilityResult exact = check_feasible(rounded);
      if (!exact.feasible) return;
      LpSolution fin = optimize(rounded);
      const std::vector<double>& pt =
          fin.status == LpSolution::Status::Optimal ? fin.x : exact.point;
      double obj = 0.0;
      for (const auto& [v, coef] : base.objective) obj += coef * pt[v];
      if (obj < best.objective - cfg.prune_gap) {
        best.objective = obj;
        best.x = pt;
        best.status = BinarySolution::Status::Optimal;
      }
      return;
    }
    const double first = rel.x[branch_var] >= 0.5 ? 1.0 : 0.0;
    for (double val : {first, 1.0 - first}) {
      fixes.push_back({branch_var, val});
      recurse();
      fixes.pop_back();
      if (abandoned) return;
    }
  };

  recurse();
  best.nodes = nodes;
  if (abandoned) {
    best.status = BinarySolution::Status::Abandoned;
  } else if (best.x.empty()) {
    best.status = BinarySolution::Status::Infeasible;
  }
  return best;
}

}  // namespace cachecast
