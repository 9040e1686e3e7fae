// Acceptance gate: nine end-to-end checks, one pass/fail line each.
// Exits nonzero when any criterion fails or overruns its time budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "cachecast/association.hpp"
#include "cachecast/avalanche.hpp"
#include "cachecast/coloring.hpp"
#include "cachecast/combinatorics.hpp"
#include "cachecast/example_instance.hpp"
#include "cachecast/experiment.hpp"
#include "cachecast/graphs.hpp"
#include "cachecast/layout.hpp"
#include "cachecast/library.hpp"
#include "cachecast/multiround.hpp"
#include "cachecast/rng.hpp"
#include "cachecast/routing.hpp"

#include "../codec_roundtrip.hpp"
#include "../fixture.hpp"

using namespace cachecast;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

// Avalanche traces retained for the replay criterion, with the instance
// context the verifier needs.
struct TraceBundle {
  CollisionGraph cg;
  CacheAssignment assignment;
  CacheScheme scheme;
  ScheduleTrace trace;
};

std::vector<TraceBundle> g_bundles;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

template <typename Body>
bool report(int id, const char* name, double budget_s, Body body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r.ok = false;
    r.detail = std::string("exception: ") + e.what();
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_budget = elapsed < budget_s;
  const bool pass = r.ok && in_budget;
  std::string line = pass ? "[PASS]" : "[FAIL]";
  line += " criterion " + std::to_string(id) + ": " + name + " (" + r.detail;
  if (!in_budget) line += "; over budget";
  line += "; " + fmt(elapsed) + "s of " + fmt(budget_s) + "s)";
  std::puts(line.c_str());
  std::fflush(stdout);
  return pass;
}

// 1. Worked reuse instance: exact coloring gives reuse order 3, greedy
//    association lands every user where the hand trace puts it, and the
//    delivery time is exactly 3 file units at unit capacities.
Outcome criterion_reuse_fixture() {
  const CollisionGraph cg = fixture::collision_graph();
  const HelperConflictGraph conflict = build_helper_conflict_graph(cg);
  const Coloring col = color_exact(conflict);
  if (col.colors != fixture::kChromatic) {
    return {false, "reuse order " + std::to_string(col.colors) + ", want 3"};
  }
  check_coloring(conflict, col);
  const CacheAssignment assignment = example_assignment();
  const CacheScheme scheme = example_scheme();
  const Association greedy = associate_greedy(cg, assignment, scheme);
  if (greedy.helper_of != fixture::greedy_helper_of()) {
    return {false, "greedy association deviates from the worked instance"};
  }
  if (greedy.helper_of[5] != 3) {
    return {false, "tie-broken user 5 not at helper 3"};
  }
  if (greedy.max_slots != fixture::kGreedyMaxSlots) {
    return {false, "greedy slot count " + std::to_string(greedy.max_slots) + ", want 3"};
  }
  const double t = reuse_delivery_time(col, greedy, scheme, 1.0, 1.0, 1.0);
  if (std::abs(t - 3.0) > 1e-12) {
    return {false, "delivery time " + fmt(t) + ", want 3*F/C_access = 3"};
  }
  return {true, "r=3, association matches, T=3*F/C_access"};
}

// 2. Worked avalanche instance: 9 slots total, helper 0 done at slot 2,
//    helpers 1-2 at slot 4, helper 3 serving users 3 and 5 jointly over
//    three slots, and the full 20-event schedule reproduced.
Outcome criterion_avalanche_fixture() {
  const CollisionGraph cg = fixture::collision_graph();
  const CacheAssignment assignment = example_assignment();
  const CacheScheme scheme = example_scheme();
  const AvalancheResult av = avalanche_run(cg, assignment, scheme, 1.0, 1.0, 1.0);
  if (av.slots != fixture::kAvalancheSlots) {
    return {false, "slot count " + std::to_string(av.slots) + ", want 9"};
  }
  if (std::abs(av.t_total - 3.0) > 1e-12) {
    return {false, "delivery time " + fmt(av.t_total) + ", want 3*F/C_access = 3"};
  }
  const auto want = fixture::avalanche_events();
  if (av.trace.size() != want.size()) {
    return {false, "trace has " + std::to_string(av.trace.size()) + " events, want " +
                       std::to_string(want.size())};
  }
  for (std::size_t i = 0; i < want.size(); ++i) {
    const TraceEvent& got = av.trace[i];
    const fixture::Event& w = want[i];
    if (got.t_slots != static_cast<std::uint64_t>(w.t) || got.event != w.kind ||
        got.helper != w.helper || got.users != w.users) {
      return {false, "event " + std::to_string(i) + " deviates from the hand schedule"};
    }
  }
  g_bundles.push_back({cg, assignment, scheme, av.trace});
  return {true, "9 slots, T=3*F/C_access, 20-event schedule matches"};
}

TopologicalGraph star_graph(int users) {
  TopologicalGraph g;
  g.c_front = 1.0;
  g.c_access = static_cast<double>(users);
  g.users_of.resize(1);
  for (int k = 0; k < users; ++k) {
    g.users_of[0].push_back(k);
    g.helpers_of.push_back({0});
    g.kept.push_back(k);
  }
  return g;
}

// 3. Single-cell reduction: with one helper and access capacity K*C_front the
//    routed delivery time must match the closed form (K-t)/(1+t) * F/C_front.
Outcome criterion_single_cell_tradeoff() {
  double worst = 0.0;
  int points = 0;
  for (int users = 1; users <= 8; ++users) {
    const TopologicalGraph g = star_graph(users);
    for (int t = 0; t <= users; ++t) {
      const RoutingSolution sol = solve_centralized_routing(g, t, 1.0);
      const double ref = static_cast<double>(users - t) / (1.0 + t);
      ++points;
      if (ref == 0.0) {
        if (std::abs(sol.t_total) > 1e-9) {
          return {false, "K=" + std::to_string(users) + " t=" + std::to_string(t) +
                             ": time " + fmt(sol.t_total) + ", want 0"};
        }
        continue;
      }
      const double rel = std::abs(sol.t_total - ref) / ref;
      worst = std::max(worst, rel);
      if (rel > 1e-5) {
        return {false, "K=" + std::to_string(users) + " t=" + std::to_string(t) +
                           ": rel err " + fmt(rel)};
      }
    }
  }
  return {true, std::to_string(points) + " (K,t) points, worst rel err " + fmt(worst)};
}

// 4. Codec round trip: 200 random instances prefetch, encode, forward,
//    decode, and compare every demanded bit.
Outcome criterion_codec_roundtrip() {
  Rng rng(777);
  for (int i = 0; i < 200; ++i) {
    roundtrip::Case rc;
    rc.users = 1 + static_cast<int>(rng.uniform_int(8));
    rc.configs = 1 + static_cast<int>(rng.uniform_int(4));
    rc.files = 1 + static_cast<int>(rng.uniform_int(4));
    rc.t_prime = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(rc.configs) + 1));
    const long long pieces = static_cast<long long>(binomial(rc.configs, rc.t_prime));
    const long long max_mult = 4096 / pieces;
    rc.file_bits = pieces * (1 + static_cast<long long>(rng.uniform_int(
                                     static_cast<std::uint64_t>(max_mult))));
    rc.seed = 9000 + static_cast<std::uint64_t>(i);
    try {
      roundtrip::run(rc);
    } catch (const std::exception& e) {
      return {false, roundtrip::describe(rc) + ": " + e.what()};
    }
  }
  return {true, "200 random instances decode bit-exactly"};
}

// 5. Multiround oracle: the closed-form slot count equals a column-by-column
//    replay of the delivery array for every occupancy vector.
Outcome criterion_multiround_oracle() {
  long long cases = 0;
  for (int L = 1; L <= 5; ++L) {
    std::vector<int> occ(L, 0);
    while (true) {
      for (int tp = 0; tp <= L; ++tp) {
        const std::uint64_t formula = multiround_slots(occ, L, tp);
        std::vector<std::vector<int>> members(L);
        int id = 0;
        for (int g = 0; g < L; ++g) {
          for (int j = 0; j < occ[g]; ++j) members[g].push_back(id++);
        }
        const DeliveryArray arr = build_delivery_array(members);
        const std::uint64_t replay = array_slots(arr, tp);
        if (formula != replay) {
          std::string o;
          for (int g = 0; g < L; ++g) o += (g ? "," : "") + std::to_string(occ[g]);
          return {false, "L=" + std::to_string(L) + " occ=[" + o + "] t'=" +
                             std::to_string(tp) + ": formula " + std::to_string(formula) +
                             " vs replay " + std::to_string(replay)};
        }
        ++cases;
      }
      int pos = 0;
      while (pos < L && occ[pos] == 6) {
        occ[pos] = 0;
        ++pos;
      }
      if (pos == L) break;
      ++occ[pos];
    }
  }
  return {true, std::to_string(cases) + " occupancy cases agree exactly"};
}

// 6. One-shot LP never loses to multiround: random dense layouts, both
//    schemes solved on the same instance, compared within twice the
//    bisection tolerance used for the runs.
Outcome criterion_dominance() {
  ExperimentConfig cfg;  // default intensities 7/140 per km^2, radius 1 km
  RoutingSolveOptions opt;
  opt.rel_tol = 1e-6;
  int done = 0;
  double worst_margin = -1e300;
  for (int L : {5, 10}) {
    const int tp = L / 5;  // cached fraction 0.2
    int valid = 0;
    for (std::uint64_t attempt = 0; valid < 25; ++attempt) {
      if (attempt >= 200) return {false, "layout sampling stalled at L=" + std::to_string(L)};
      const std::uint64_t seed = 404000 + 1000ULL * static_cast<std::uint64_t>(L) + attempt;
      SweepPoint sp;
      sp.value = L;
      sp.L = L;
      sp.t_prime = tp;
      sp.mu = 0.2;
      sp.c_front = 1.0;
      sp.c_access = 1.0;
      const Layout layout = make_instance_layout(cfg, sp, seed);
      const TopologicalGraph graph = build_topological_graph(layout);
      if (graph.user_count() == 0 || graph.helper_count() == 0) continue;
      const CacheAssignment assignment = assign_caches(
          static_cast<int>(layout.users.size()), L, Rng(seed).split(3).next_u64());
      std::vector<int> group_of(graph.user_count());
      for (int k = 0; k < graph.user_count(); ++k) {
        group_of[k] = assignment.group_of[graph.kept[k]];
      }
      const MultiroundRouting mr = solve_multiround_routing(graph, group_of, L, tp, 1.0, opt);
      const RoutingSolution nl =
          solve_new_decentralized_routing(graph, group_of, L, tp, 1.0, opt);
      const double slack = 2.0 * opt.rel_tol * std::max(1.0, mr.t_total);
      if (!(nl.t_total <= mr.t_total + slack)) {
        return {false, "seed " + std::to_string(seed) + ": one-shot " + fmt(nl.t_total) +
                           " above multiround " + fmt(mr.t_total)};
      }
      worst_margin = std::max(worst_margin, nl.t_total - mr.t_total);
      ++valid;
      ++done;
    }
  }
  return {true, std::to_string(done) + " instances, worst one-shot minus multiround " +
                    fmt(worst_margin)};
}

// 7. Association ordering: exact never above greedy on any instance, and
//    greedy beats random association on the ensemble mean.
Outcome criterion_association_order() {
  ExperimentConfig cfg;
  cfg.region_radius_m = 500.0;
  cfg.helper_intensity_per_km2 = 10.0;
  cfg.user_intensity_per_km2 = 40.0;
  double sum_greedy = 0.0;
  double sum_random = 0.0;
  int found = 0;
  int strict_wins = 0;
  for (std::uint64_t attempt = 0; found < 100; ++attempt) {
    if (attempt >= 4000) {
      return {false, "only " + std::to_string(found) + " usable instances in 4000 draws"};
    }
    const int L = 2 + static_cast<int>(attempt % 3);
    const std::uint64_t seed = 515000 + attempt;
    SweepPoint sp;
    sp.value = L;
    sp.L = L;
    sp.t_prime = 1;
    sp.mu = 1.0 / L;
    sp.c_front = 1.0;
    sp.c_access = 1.0;
    const Layout layout = make_instance_layout(cfg, sp, seed);
    const auto [covered, removed] = covered_subset(layout, layout.a_cell_m);
    (void)removed;
    if (covered.users.empty()) continue;
    const CollisionGraph cg = build_collision_graph(covered);
    int ambiguous = 0;
    for (const auto& s : cg.solid_of_user) ambiguous += s.size() > 1 ? 1 : 0;
    if (ambiguous > 12) continue;
    const HelperConflictGraph conflict = build_helper_conflict_graph(cg);
    const CacheAssignment assignment = assign_caches(
        static_cast<int>(covered.users.size()), L, Rng(seed).split(3).next_u64());
    const CacheScheme scheme{L, 1, k_subsets(L, 1)};
    const Coloring col = color_dsatur(conflict);
    const Association ge = associate_greedy(cg, assignment, scheme);
    const Association ex = associate_exact(cg, assignment, scheme);
    const Association rn = associate_random(cg, assignment, scheme, Rng(seed).split(4).next_u64());
    if (!ex.certified_exact) {
      return {false, "exact association fell back on seed " + std::to_string(seed)};
    }
    const double t_ex = reuse_delivery_time(col, ex, scheme, 1.0, 1.0, 1.0);
    const double t_ge = reuse_delivery_time(col, ge, scheme, 1.0, 1.0, 1.0);
    const double t_rn = reuse_delivery_time(col, rn, scheme, 1.0, 1.0, 1.0);
    if (t_ex > t_ge + 1e-12) {
      return {false, "seed " + std::to_string(seed) + ": exact " + fmt(t_ex) +
                         " above greedy " + fmt(t_ge)};
    }
    if (t_ex < t_ge - 1e-12) ++strict_wins;
    sum_greedy += t_ge;
    sum_random += t_rn;
    ++found;
  }
  const double mean_ge = sum_greedy / found;
  const double mean_rn = sum_random / found;
  if (mean_ge > mean_rn + 1e-9) {
    return {false, "mean greedy " + fmt(mean_ge) + " above mean random " + fmt(mean_rn)};
  }
  return {true, "100 instances, exact<=greedy everywhere (" + std::to_string(strict_wins) +
                    " strict), mean greedy " + fmt(mean_ge) + " <= mean random " +
                    fmt(mean_rn)};
}

// 8. Avalanche vs reuse: on dense half-kilometre layouts the dynamic
//    scheduler's mean delivery time does not exceed static reuse.
Outcome criterion_avalanche_vs_reuse() {
  ExperimentConfig cfg;  // default intensities, region scaled down
  cfg.region_radius_m = 500.0;
  const int L = 5;
  const int tp = 1;
  double sum_av = 0.0;
  double sum_re = 0.0;
  int found = 0;
  for (std::uint64_t attempt = 0; found < 100; ++attempt) {
    if (attempt >= 1000) {
      return {false, "only " + std::to_string(found) + " usable instances in 1000 draws"};
    }
    const std::uint64_t seed = 626000 + attempt;
    SweepPoint sp;
    sp.value = L;
    sp.L = L;
    sp.t_prime = tp;
    sp.mu = 0.2;
    sp.c_front = 1.0;
    sp.c_access = 1.0;
    const Layout layout = make_instance_layout(cfg, sp, seed);
    const auto [covered, removed] = covered_subset(layout, layout.a_cell_m);
    (void)removed;
    if (covered.users.empty()) continue;
    const CollisionGraph cg = build_collision_graph(covered);
    const HelperConflictGraph conflict = build_helper_conflict_graph(cg);
    const CacheAssignment assignment = assign_caches(
        static_cast<int>(covered.users.size()), L, Rng(seed).split(3).next_u64());
    const CacheScheme scheme{L, tp, k_subsets(L, tp)};
    const AvalancheResult av = avalanche_run(cg, assignment, scheme, 1.0, 1.0, 1.0);
    const Coloring col = color_dsatur(conflict);
    const Association ge = associate_greedy(cg, assignment, scheme);
    const double t_re = reuse_delivery_time(col, ge, scheme, 1.0, 1.0, 1.0);
    sum_av += av.t_total;
    sum_re += t_re;
    g_bundles.push_back({cg, assignment, scheme, av.trace});
    ++found;
  }
  const double mean_av = sum_av / found;
  const double mean_re = sum_re / found;
  if (!(mean_av <= mean_re + 1e-9)) {
    return {false, "mean avalanche " + fmt(mean_av) + " above mean reuse " + fmt(mean_re)};
  }
  return {true, "100 instances, mean avalanche " + fmt(mean_av) + " <= mean reuse " +
                    fmt(mean_re)};
}

// 9. Safety replay: every retained avalanche trace passes the collision and
//    completeness checks.
Outcome criterion_safety_replay() {
  if (g_bundles.size() != 101) {
    return {false, "expected 101 retained traces, have " + std::to_string(g_bundles.size())};
  }
  long long intervals = 0;
  for (std::size_t i = 0; i < g_bundles.size(); ++i) {
    const TraceBundle& b = g_bundles[i];
    const VerifyResult v = verify_trace(b.cg, b.assignment, b.scheme, b.trace);
    if (!v.ok) {
      return {false, "trace " + std::to_string(i) + ": " + v.error};
    }
    intervals += v.intervals;
  }
  return {true, "101 traces clean, " + std::to_string(intervals) + " transmission intervals"};
}

}  // namespace

int main() {
  bool ok = true;
  ok &= report(1, "worked reuse instance", 1.0, criterion_reuse_fixture);
  ok &= report(2, "worked avalanche instance", 1.0, criterion_avalanche_fixture);
  ok &= report(3, "single-cell tradeoff", 30.0, criterion_single_cell_tradeoff);
  ok &= report(4, "codec round trip", 60.0, criterion_codec_roundtrip);
  ok &= report(5, "multiround formula vs replay", 10.0, criterion_multiround_oracle);
  ok &= report(6, "one-shot LP dominates multiround", 600.0, criterion_dominance);
  ok &= report(7, "association ordering", 600.0, criterion_association_order);
  ok &= report(8, "avalanche vs reuse ensemble", 900.0, criterion_avalanche_vs_reuse);
  ok &= report(9, "trace safety replay", 900.0, criterion_safety_replay);
  return ok ? 0 : 1;
}
