#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "cachecast/binary_program.hpp"
#include "cachecast/coloring.hpp"
#include "cachecast/graphs.hpp"
#include "cachecast/library.hpp"
#include "cachecast/lp.hpp"
#include "cachecast/multiround.hpp"
#include "cachecast/rng.hpp"

namespace cachecast {

struct Association {
  std::vector<int> helper_of;               // user -> helper
  std::vector<std::vector<int>> users_of;   // helper -> ascending users
  std::vector<std::vector<int>> occupancy;  // helper -> per-group user count
  std::vector<std::uint64_t> slots_of;      // helper -> delivery slot count
  std::uint64_t max_slots = 0;
  bool certified_exact = false;
};

namespace detail {

inline void check_association_inputs(const CollisionGraph& cg, const CacheAssignment& assignment,
                                     const CacheScheme& scheme) {
  if (assignment.users != cg.user_count()) {
    throw std::invalid_argument("association: assignment and graph disagree on user count");
  }
  if (assignment.configs != scheme.configs) {
    throw std::invalid_argument("association: assignment and scheme disagree on configurations");
  }
  for (int k = 0; k < cg.user_count(); ++k) {
    if (cg.solid_of_user[k].empty()) {
      throw std::invalid_argument("association: user without any in-cell helper");
    }
  }
}

inline Association finalize_association(std::vector<int> helper_of, const CollisionGraph& cg,
                                        const CacheAssignment& assignment,
                                        const CacheScheme& scheme) {
  const int H = cg.helper_count();
  const int L = scheme.configs;
  Association a;
  a.helper_of = std::move(helper_of);
  a.users_of.assign(H, {});
  a.occupancy.assign(H, std::vector<int>(L, 0));
  a.slots_of.assign(H, 0);
  for (int k = 0; k < cg.user_count(); ++k) {
    const int h = a.helper_of[k];
    if (h < 0 || h >= H ||
        std::find(cg.solid_of_user[k].begin(), cg.solid_of_user[k].end(), h) ==
            cg.solid_of_user[k].end()) {
      throw std::logic_error("association: user assigned outside its in-cell helpers");
    }
    a.users_of[h].push_back(k);
    a.occupancy[h][assignment.group_of[k]] += 1;
  }
  for (int h = 0; h < H; ++h) {
    a.slots_of[h] = multiround_slots(a.occupancy[h], L, scheme.replication);
    a.max_slots = std::max(a.max_slots, a.slots_of[h]);
  }
  return a;
}

}  // namespace detail

// Forced users first; every remaining user then takes the helper that is
// lexicographically best on (resulting worst helper slots, resulting slots
// of the receiving helper, helper id).
inline Association associate_greedy(const CollisionGraph& cg, const CacheAssignment& assignment,
                                    const CacheScheme& scheme) {
  detail::check_association_inputs(cg, assignment, scheme);
  const int H = cg.helper_count();
  const int L = scheme.configs;
  const int t_prime = scheme.replication;
  std::vector<int> helper_of(cg.user_count(), -1);
  std::vector<std::vector<int>> occ(H, std::vector<int>(L, 0));
  std::vector<std::uint64_t> slots(H, 0);
  auto place = [&](int k, int h) {
    helper_of[k] = h;
    occ[h][assignment.group_of[k]] += 1;
    slots[h] = multiround_slots(occ[h], L, t_prime);
  };
  for (int k = 0; k < cg.user_count(); ++k) {
    if (cg.solid_of_user[k].size() == 1) place(k, cg.solid_of_user[k][0]);
  }
  for (int k = 0; k < cg.user_count(); ++k) {
    if (helper_of[k] >= 0) continue;
    std::uint64_t rest_max = 0;
    for (int h = 0; h < H; ++h) rest_max = std::max(rest_max, slots[h]);
    int best_h = -1;
    std::uint64_t best_global = 0, best_local = 0;
    for (int h : cg.solid_of_user[k]) {
      std::vector<int> trial = occ[h];
      trial[assignment.group_of[k]] += 1;
      const std::uint64_t local = multiround_slots(trial, L, t_prime);
      const std::uint64_t global = std::max(rest_max, local);
      if (best_h < 0 || global < best_global ||
          (global == best_global && local < best_local)) {
        best_h = h;
        best_global = global;
        best_local = local;
      }
    }
    place(k, best_h);
  }
  return detail::finalize_association(std::move(helper_of), cg, assignment, scheme);
}

inline Association associate_random(const CollisionGraph& cg, const CacheAssignment& assignment,
                                    const CacheScheme& scheme, std::uint64_t seed) {
  detail::check_association_inputs(cg, assignment, scheme);
  Rng rng(seed);
  std::vector<int> helper_of(cg.user_count(), -1);
  for (int k = 0; k < cg.user_count(); ++k) {
    const auto& hs = cg.solid_of_user[k];
    helper_of[k] = hs[rng.uniform_int(hs.size())];
  }
  return detail::finalize_association(std::move(helper_of), cg, assignment, scheme);
}

// Binary program over the ambiguous users: per-helper load is bounded by
// every injective placement of occupancy counts against the multiround
// column weights, so the worst helper's slot count is minimized exactly.
// Beyond the size gates this falls back to the greedy association.
inline Association associate_exact(const CollisionGraph& cg, const CacheAssignment& assignment,
                                   const CacheScheme& scheme, const BinarySolveConfig& cfg = {}) {
  detail::check_association_inputs(cg, assignment, scheme);
  const int H = cg.helper_count();
  const int L = scheme.configs;
  const int t_prime = scheme.replication;
  int ambiguous = 0;
  for (int k = 0; k < cg.user_count(); ++k) ambiguous += cg.solid_of_user[k].size() > 1 ? 1 : 0;
  if (L > 6 || ambiguous > 15) return associate_greedy(cg, assignment, scheme);

  std::vector<std::vector<int>> fixed_occ(H, std::vector<int>(L, 0));
  for (int k = 0; k < cg.user_count(); ++k) {
    if (cg.solid_of_user[k].size() == 1) {
      fixed_occ[cg.solid_of_user[k][0]][assignment.group_of[k]] += 1;
    }
  }

  LinearProgram lp;
  std::vector<std::vector<std::pair<int, int>>> x_of_user(cg.user_count());  // (helper, var)
  std::vector<int> binaries;
  for (int k = 0; k < cg.user_count(); ++k) {
    if (cg.solid_of_user[k].size() <= 1) continue;
    for (int h : cg.solid_of_user[k]) {
      const int v = lp.add_variable(0.0, 1.0);
      x_of_user[k].emplace_back(h, v);
      binaries.push_back(v);
    }
  }
  std::vector<bool> candidate(H, false);
  for (int k = 0; k < cg.user_count(); ++k) {
    for (int h : cg.solid_of_user[k]) candidate[h] = true;
  }
  std::vector<std::vector<int>> a_var(H, std::vector<int>(L, -1));
  for (int h = 0; h < H; ++h) {
    if (!candidate[h]) continue;
    for (int ell = 0; ell < L; ++ell) a_var[h][ell] = lp.add_variable(0.0);
  }
  const int alpha = lp.add_variable(0.0, kInf, "alpha");
  lp.set_objective({{alpha, 1.0}});

  for (int k = 0; k < cg.user_count(); ++k) {
    if (x_of_user[k].empty()) continue;
    std::vector<std::pair<int, double>> row;
    for (const auto& [h, v] : x_of_user[k]) row.emplace_back(v, 1.0);
    lp.add_constraint(row, LinearProgram::Sense::EQ, 1.0);
  }
  for (int h = 0; h < H; ++h) {
    for (int ell = 0; ell < L; ++ell) {
      if (a_var[h][ell] < 0) continue;
      std::vector<std::pair<int, double>> row;
      for (int k = 0; k < cg.user_count(); ++k) {
        if (assignment.group_of[k] != ell) continue;
        for (const auto& [hk, v] : x_of_user[k]) {
          if (hk == h) row.emplace_back(v, 1.0);
        }
      }
      if (row.empty()) {
        lp.lower[a_var[h][ell]] = static_cast<double>(fixed_occ[h][ell]);
        continue;
      }
      row.emplace_back(a_var[h][ell], -1.0);
      lp.add_constraint(row, LinearProgram::Sense::LE,
                        -static_cast<double>(fixed_occ[h][ell]));
    }
  }
  // Column weights taken over every distinct injective placement; positions
  // with zero weight are canonicalized to ascending order to avoid duplicates.
  std::vector<double> coef(L);
  int zero_from = L;
  for (int r = 0; r < L; ++r) {
    coef[r] = static_cast<double>(binomial(L - r - 1, t_prime));
    if (coef[r] == 0.0 && zero_from == L) zero_from = r;
  }
  std::vector<int> perm(L);
  for (int ell = 0; ell < L; ++ell) perm[ell] = ell;
  std::vector<std::vector<int>> perms;
  do {
    bool canonical = true;
    for (int r = zero_from; r + 1 < L; ++r) canonical = canonical && perm[r] < perm[r + 1];
    if (canonical) perms.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (int h = 0; h < H; ++h) {
    if (!candidate[h]) continue;
    for (const auto& p : perms) {
      std::vector<std::pair<int, double>> row;
      for (int r = 0; r < L; ++r) {
        if (coef[r] > 0.0) row.emplace_back(a_var[h][p[r]], coef[r]);
      }
      row.emplace_back(alpha, -1.0);
      lp.add_constraint(row, LinearProgram::Sense::LE, 0.0);
    }
  }

  BinarySolution sol = solve_binary_min(lp, binaries, cfg);
  if (sol.status == BinarySolution::Status::Abandoned) {
    throw std::runtime_error("associate_exact: search budget exhausted");
  }
  if (sol.status != BinarySolution::Status::Optimal) {
    throw std::logic_error("associate_exact: assignment program cannot be infeasible");
  }

  std::vector<int> helper_of(cg.user_count(), -1);
  for (int k = 0; k < cg.user_count(); ++k) {
    if (cg.solid_of_user[k].size() == 1) {
      helper_of[k] = cg.solid_of_user[k][0];
      continue;
    }
    for (const auto& [h, v] : x_of_user[k]) {
      if (sol.x[v] > 0.5) {
        helper_of[k] = h;
        break;
      }
    }
  }
  Association a = detail::finalize_association(std::move(helper_of), cg, assignment, scheme);
  if (std::abs(sol.objective - static_cast<double>(a.max_slots)) > 1e-4) {
    throw std::logic_error("associate_exact: objective disagrees with realized slot count");
  }
  a.certified_exact = true;
  return a;
}

// Worst helper finishes last; access air time stretches by the reuse order
// because each color class owns one of r orthogonal subframes.
inline double reuse_delivery_time(const Coloring& coloring, const Association& assoc,
                                  const CacheScheme& scheme, double c_front, double c_access,
                                  double F) {
  const double denom = static_cast<double>(binomial(scheme.configs, scheme.replication));
  const double load = static_cast<double>(assoc.max_slots) / denom;
  const double r = static_cast<double>(coloring.colors);
  return load * std::max(F / c_front, r * F / c_access);
}

}  // namespace cachecast
