#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cachecast/combinatorics.hpp"
#include "cachecast/graphs.hpp"
#include "cachecast/lp.hpp"
#include "cachecast/multiround.hpp"

namespace cachecast {

struct RoutingSolution {
  double alpha = 0.0;
  double t_front = 0.0;
  double t_access = 0.0;
  double t_total = 0.0;
  double violation = 0.0;  // exact worst slack of the returned point
  int bisect_iterations = 0;
  std::vector<double> point;
  std::map<std::pair<int, int>, double> c_split;  // (helper, user) -> bits/s
};

struct RoutingSolveOptions {
  bool seed_with_direct = true;  // shrink the bisection bracket with a direct solve
  double rel_tol = 1e-6;
  int max_iters = 60;
};

// Routing of whole multicast messages to labeled recipients. A label is a
// user in the one-configuration-per-user scheme and a caching group in a
// multiround round; each present label carries one real user's connectivity.
struct MessageRoutingModel {
  double c_front = 0.0;
  double c_access = 0.0;
  int label_space = 0;
  std::vector<std::vector<int>> subsets;           // messages as label subsets
  std::vector<int> real_user_of_label;             // -1 when the label is absent
  std::vector<std::vector<int>> labels_of_helper;  // present labels reachable via h
  std::vector<std::vector<int>> helpers_of_label;
  std::vector<std::vector<int>> msgs_of_helper;    // message ids with a reachable recipient
  std::vector<std::vector<int>> y_var;             // parallel to msgs_of_helper
  std::vector<std::vector<int>> c_var;             // parallel to labels_of_helper
  int var_count = 0;                               // y vars then c vars

  int helper_count() const { return static_cast<int>(labels_of_helper.size()); }

  void index_variables() {
    int next = 0;
    y_var.assign(msgs_of_helper.size(), {});
    for (std::size_t h = 0; h < msgs_of_helper.size(); ++h) {
      for (std::size_t i = 0; i < msgs_of_helper[h].size(); ++i) y_var[h].push_back(next++);
    }
    c_var.assign(labels_of_helper.size(), {});
    for (std::size_t h = 0; h < labels_of_helper.size(); ++h) {
      for (std::size_t i = 0; i < labels_of_helper[h].size(); ++i) c_var[h].push_back(next++);
    }
    var_count = next;
  }

  void add_shared_rows(LinearProgram& lp, bool direct, double alpha, int alpha_var) const {
    const int H = helper_count();
    for (int h = 0; h < H; ++h) {
      if (msgs_of_helper[h].empty()) continue;
      std::vector<std::pair<int, double>> terms;
      for (int v : y_var[h]) terms.emplace_back(v, 1.0);
      if (direct) {
        terms.emplace_back(alpha_var, -1.0);
        lp.add_constraint(terms, LinearProgram::Sense::LE, 0.0);
      } else {
        lp.add_constraint(terms, LinearProgram::Sense::LE, alpha);
      }
    }
    for (int h = 0; h < H; ++h) {
      for (std::size_t li = 0; li < labels_of_helper[h].size(); ++li) {
        const int label = labels_of_helper[h][li];
        std::vector<std::pair<int, double>> terms;
        for (std::size_t mi = 0; mi < msgs_of_helper[h].size(); ++mi) {
          if (subset_contains(subsets[msgs_of_helper[h][mi]], label)) {
            terms.emplace_back(y_var[h][mi], 1.0);
          }
        }
        if (terms.empty()) continue;
        terms.emplace_back(c_var[h][li], direct ? -1.0 : -alpha / c_front);
        lp.add_constraint(terms, LinearProgram::Sense::LE, 0.0);
      }
    }
    for (std::size_t s = 0; s < subsets.size(); ++s) {
      for (int label : subsets[s]) {
        if (real_user_of_label[label] < 0) continue;
        std::vector<std::pair<int, double>> terms;
        for (int h : helpers_of_label[label]) {
          for (std::size_t mi = 0; mi < msgs_of_helper[h].size(); ++mi) {
            if (msgs_of_helper[h][mi] == static_cast<int>(s)) {
              terms.emplace_back(y_var[h][mi], 1.0);
            }
          }
        }
        lp.add_constraint(terms, LinearProgram::Sense::GE, 1.0);
      }
    }
    for (int h = 0; h < H; ++h) {
      if (labels_of_helper[h].empty()) continue;
      std::vector<std::pair<int, double>> terms;
      for (int v : c_var[h]) terms.emplace_back(v, 1.0);
      if (direct) {
        terms.emplace_back(alpha_var, -c_access / c_front);
        lp.add_constraint(terms, LinearProgram::Sense::LE, 0.0);
      } else {
        lp.add_constraint(terms, LinearProgram::Sense::LE, c_access);
      }
    }
  }

  LinearProgram lp_at_alpha(double alpha) const {
    LinearProgram lp;
    for (int v = 0; v < var_count; ++v) lp.add_variable(0.0);
    add_shared_rows(lp, false, alpha, -1);
    return lp;
  }

  // Capacity shares rescaled as z = C * alpha / c_front turn the fixed-alpha
  // family into one program that minimizes alpha directly.
  LinearProgram lp_direct() const {
    LinearProgram lp;
    for (int v = 0; v < var_count; ++v) lp.add_variable(0.0);
    const int alpha_var = lp.add_variable(0.0, kInf, "alpha");
    lp.set_objective({{alpha_var, 1.0}});
    add_shared_rows(lp, true, 0.0, alpha_var);
    return lp;
  }

  // Feasible by construction: every y set to one, capacity split evenly.
  double fallback_alpha() const {
    double worst = 1.0;
    for (int h = 0; h < helper_count(); ++h) {
      worst = std::max(worst, static_cast<double>(msgs_of_helper[h].size()));
      for (int label : labels_of_helper[h]) {
        double cnt = 0;
        for (int mi : msgs_of_helper[h]) {
          if (subset_contains(subsets[mi], label)) cnt += 1.0;
        }
        worst = std::max(worst, cnt * c_front * labels_of_helper[h].size() / c_access);
      }
    }
    return 2.0 * worst + 1.0;
  }
};

inline MessageRoutingModel make_centralized_model(const TopologicalGraph& graph, int t) {
  const int K = graph.user_count();
  MessageRoutingModel m;
  m.c_front = graph.c_front;
  m.c_access = graph.c_access;
  m.label_space = K;
  m.subsets = k_subsets(K, t + 1);
  m.real_user_of_label.resize(K);
  for (int k = 0; k < K; ++k) m.real_user_of_label[k] = k;
  m.labels_of_helper = graph.users_of;
  m.helpers_of_label = graph.helpers_of;
  m.msgs_of_helper.assign(graph.users_of.size(), {});
  for (std::size_t h = 0; h < graph.users_of.size(); ++h) {
    for (std::size_t s = 0; s < m.subsets.size(); ++s) {
      bool overlap = false;
      for (int k : m.subsets[s]) {
        if (std::find(graph.users_of[h].begin(), graph.users_of[h].end(), k) !=
            graph.users_of[h].end()) {
          overlap = true;
          break;
        }
      }
      if (overlap) m.msgs_of_helper[h].push_back(static_cast<int>(s));
    }
  }
  m.index_variables();
  return m;
}

// One multiround column: labels are caching groups, present ones mapped to
// the column's users; only messages meeting a present group are routed.
inline MessageRoutingModel make_round_model(const TopologicalGraph& graph, int L,
                                            const std::vector<std::vector<int>>& all_subsets,
                                            const std::vector<std::pair<int, int>>& column) {
  MessageRoutingModel m;
  m.c_front = graph.c_front;
  m.c_access = graph.c_access;
  m.label_space = L;
  m.real_user_of_label.assign(L, -1);
  for (const auto& [group, user] : column) m.real_user_of_label[group] = user;
  for (const auto& s : all_subsets) {
    for (int label : s) {
      if (m.real_user_of_label[label] >= 0) {
        m.subsets.push_back(s);
        break;
      }
    }
  }
  const int H = static_cast<int>(graph.users_of.size());
  m.labels_of_helper.assign(H, {});
  m.helpers_of_label.assign(L, {});
  for (int label = 0; label < L; ++label) {
    const int user = m.real_user_of_label[label];
    if (user < 0) continue;
    for (int h : graph.helpers_of[user]) {
      m.labels_of_helper[h].push_back(label);
      m.helpers_of_label[label].push_back(h);
    }
  }
  m.msgs_of_helper.assign(H, {});
  for (int h = 0; h < H; ++h) {
    for (std::size_t s = 0; s < m.subsets.size(); ++s) {
      bool overlap = false;
      for (int label : m.subsets[s]) {
        if (std::find(m.labels_of_helper[h].begin(), m.labels_of_helper[h].end(), label) !=
            m.labels_of_helper[h].end()) {
          overlap = true;
          break;
        }
      }
      if (overlap) m.msgs_of_helper[h].push_back(static_cast<int>(s));
    }
  }
  m.index_variables();
  return m;
}

// Bisection on the fixed-alpha family, bracket seeded by the direct program.
// denom is the subpacketization count of the active scheme.
inline RoutingSolution solve_message_routing(const MessageRoutingModel& model, double F,
                                             double denom,
                                             const RoutingSolveOptions& opt = {}) {
  RoutingSolution sol;
  bool any_label = false;
  for (int u : model.real_user_of_label) any_label |= u >= 0;
  if (model.subsets.empty() || !any_label) return sol;

  auto family = [&](double alpha) { return model.lp_at_alpha(alpha); };
  BisectionConfig cfg;
  cfg.rel_tol = opt.rel_tol;
  cfg.max_iters = opt.max_iters;
  cfg.alpha_low = 0.0;
  cfg.alpha_high = model.fallback_alpha();
  if (opt.seed_with_direct) {
    LpSolution direct = optimize(model.lp_direct());
    if (direct.status == LpSolution::Status::Optimal && direct.objective > 0) {
      cfg.alpha_low = direct.objective * (1.0 - 1e-4);
      cfg.alpha_high = direct.objective * (1.0 + 1e-4);
    }
  }
  BisectionResult bi;
  try {
    bi = bisect_min_alpha(family, cfg);
  } catch (const std::runtime_error&) {
    cfg.alpha_low = 0.0;
    cfg.alpha_high = model.fallback_alpha();
    bi = bisect_min_alpha(family, cfg);
  }

  sol.alpha = bi.alpha;
  sol.point = bi.point;
  sol.bisect_iterations = bi.iterations;
  sol.violation = max_violation(model.lp_at_alpha(bi.alpha), bi.point);
  double front = 0.0, access = 0.0;
  for (int h = 0; h < model.helper_count(); ++h) {
    double load = 0.0;
    for (int v : model.y_var[h]) load += sol.point[v];
    front = std::max(front, load);
    for (std::size_t li = 0; li < model.labels_of_helper[h].size(); ++li) {
      const int label = model.labels_of_helper[h][li];
      double num = 0.0;
      for (std::size_t mi = 0; mi < model.msgs_of_helper[h].size(); ++mi) {
        if (subset_contains(model.subsets[model.msgs_of_helper[h][mi]], label)) {
          num += sol.point[model.y_var[h][mi]];
        }
      }
      const double cap = sol.point[model.c_var[h][li]];
      sol.c_split[{h, model.real_user_of_label[label]}] = cap;
      if (num > 1e-12) access = std::max(access, num / std::max(cap, 1e-300));
    }
  }
  sol.t_front = front * F / (model.c_front * denom);
  sol.t_access = access * F / denom;
  sol.t_total = std::max(sol.t_front, sol.t_access);
  return sol;
}

// One-configuration-per-user scheme routed over the helper network.
inline RoutingSolution solve_centralized_routing(const TopologicalGraph& graph, int t, double F,
                                                 const RoutingSolveOptions& opt = {}) {
  const int K = graph.user_count();
  if (K > 12) {
    throw std::invalid_argument(
        "solve_centralized_routing: gated to 12 users or fewer; the per-user message count "
        "grows combinatorially");
  }
  if (t < 0 || t > K) throw std::invalid_argument("solve_centralized_routing: t outside [0, K]");
  for (int k = 0; k < K; ++k) {
    if (graph.helpers_of[k].empty()) {
      throw std::invalid_argument("solve_centralized_routing: user without any helper");
    }
  }
  if (t == K) return {};
  MessageRoutingModel model = make_centralized_model(graph, t);
  return solve_message_routing(model, F, static_cast<double>(binomial(K, t)), opt);
}

struct MultiroundRouting {
  double t_total = 0.0;
  DeliveryArray array;
  std::vector<RoutingSolution> rounds;
};

// Column-by-column delivery: each round routes its own message set
// independently and the round times add up.
inline MultiroundRouting solve_multiround_routing(const TopologicalGraph& graph,
                                                  const std::vector<int>& group_of, int L,
                                                  int t_prime, double F,
                                                  const RoutingSolveOptions& opt = {}) {
  if (static_cast<int>(group_of.size()) != graph.user_count()) {
    throw std::invalid_argument("solve_multiround_routing: one group per user required");
  }
  std::vector<std::vector<int>> members(L);
  for (int k = 0; k < graph.user_count(); ++k) {
    if (group_of[k] < 0 || group_of[k] >= L) {
      throw std::invalid_argument("solve_multiround_routing: group index out of range");
    }
    members[group_of[k]].push_back(k);
  }
  MultiroundRouting out;
  out.array = build_delivery_array(members);
  if (t_prime >= L) return out;
  const std::vector<std::vector<int>> all_subsets = k_subsets(L, t_prime + 1);
  const double denom = static_cast<double>(binomial(L, t_prime));
  for (int j = 0; j < out.array.columns(); ++j) {
    const auto column = out.array.column_users(j);
    if (column.empty()) continue;
    MessageRoutingModel model = make_round_model(graph, L, all_subsets, column);
    RoutingSolution round = solve_message_routing(model, F, denom, opt);
    out.t_total += round.t_total;
    out.rounds.push_back(std::move(round));
  }
  return out;
}

// Per-user segment routing: every user independently splits each of its
// missing subfiles across its helpers; per-helper message length is the
// largest per-group segment total, linearized with one auxiliary variable
// per (helper, message).
struct PerUserRoutingModel {
  double c_front = 0.0;
  double c_access = 0.0;
  int L = 0;
  int t_prime = 0;
  std::vector<int> group_of;
  std::vector<std::vector<int>> users_of;    // helper -> users
  std::vector<std::vector<int>> helpers_of;  // user -> helpers
  std::vector<std::vector<int>> subsets;     // group subsets of size t_prime + 1
  std::vector<std::vector<int>> msgs_of_group;
  std::vector<bool> multi_homed;
  std::vector<std::vector<int>> singles_at;  // [h][group] count of single-homed users
  // variable layout: y block, then c block, then m block
  std::vector<int> y_base;                      // per multi-homed user; -1 otherwise
  std::vector<std::map<int, int>> c_of;         // [h] user -> var
  std::vector<std::map<int, int>> m_of;         // [h] message -> var
  std::vector<std::map<int, double>> m_floor;   // [h] message -> single-user load floor
  int var_count = 0;

  int helper_count() const { return static_cast<int>(users_of.size()); }
  int user_count() const { return static_cast<int>(group_of.size()); }

  int y_var(int user, int msg_pos, int helper_pos) const {
    return y_base[user] +
           msg_pos * static_cast<int>(helpers_of[user].size()) + helper_pos;
  }

  double single_load() const {  // messages each single-homed user needs in full
    return static_cast<double>(binomial(L - 1, t_prime));
  }

  void build_rows(LinearProgram& lp, bool direct, double alpha, int alpha_var) const {
    const int H = helper_count();
    for (int h = 0; h < H; ++h) {
      if (m_of[h].empty()) continue;
      std::vector<std::pair<int, double>> terms;
      for (const auto& [msg, var] : m_of[h]) terms.emplace_back(var, 1.0);
      if (direct) {
        terms.emplace_back(alpha_var, -1.0);
        lp.add_constraint(terms, LinearProgram::Sense::LE, 0.0);
      } else {
        lp.add_constraint(terms, LinearProgram::Sense::LE, alpha);
      }
    }
    for (int h = 0; h < H; ++h) {
      for (const auto& [msg, mvar] : m_of[h]) {
        for (int ell : subsets[msg]) {
          std::vector<std::pair<int, double>> terms;
          double floor_const = static_cast<double>(singles_at[h][ell]);
          for (int k : users_of[h]) {
            if (!multi_homed[k] || group_of[k] != ell) continue;
            const auto& msgs = msgs_of_group[ell];
            const int pos =
                static_cast<int>(std::find(msgs.begin(), msgs.end(), msg) - msgs.begin());
            if (pos == static_cast<int>(msgs.size())) continue;
            const auto& hs = helpers_of[k];
            const int hp = static_cast<int>(std::find(hs.begin(), hs.end(), h) - hs.begin());
            terms.emplace_back(y_var(k, pos, hp), 1.0);
          }
          if (terms.empty()) continue;  // handled through the variable floor
          terms.emplace_back(mvar, -1.0);
          lp.add_constraint(terms, LinearProgram::Sense::LE, -floor_const);
        }
      }
    }
    for (int h = 0; h < H; ++h) {
      for (int k : users_of[h]) {
        if (!multi_homed[k]) continue;  // folded into the capacity variable floor
        const int ell = group_of[k];
        std::vector<std::pair<int, double>> terms;
        const auto& hs = helpers_of[k];
        const int hp = static_cast<int>(std::find(hs.begin(), hs.end(), h) - hs.begin());
        for (std::size_t pos = 0; pos < msgs_of_group[ell].size(); ++pos) {
          terms.emplace_back(y_var(k, static_cast<int>(pos), hp), 1.0);
        }
        if (terms.empty()) continue;
        terms.emplace_back(c_of[h].at(k), direct ? -1.0 : -alpha / c_front);
        lp.add_constraint(terms, LinearProgram::Sense::LE, 0.0);
      }
    }
    for (int k = 0; k < user_count(); ++k) {
      if (!multi_homed[k]) continue;
      const int ell = group_of[k];
      for (std::size_t pos = 0; pos < msgs_of_group[ell].size(); ++pos) {
        std::vector<std::pair<int, double>> terms;
        for (std::size_t hp = 0; hp < helpers_of[k].size(); ++hp) {
          terms.emplace_back(y_var(k, static_cast<int>(pos), static_cast<int>(hp)), 1.0);
        }
        lp.add_constraint(terms, LinearProgram::Sense::EQ, 1.0);
      }
    }
    for (int h = 0; h < H; ++h) {
      if (c_of[h].empty()) continue;
      std::vector<std::pair<int, double>> terms;
      for (const auto& [k, var] : c_of[h]) terms.emplace_back(var, 1.0);
      if (direct) {
        terms.emplace_back(alpha_var, -c_access / c_front);
        lp.add_constraint(terms, LinearProgram::Sense::LE, 0.0);
      } else {
        lp.add_constraint(terms, LinearProgram::Sense::LE, c_access);
      }
    }
  }

  LinearProgram lp_at_alpha(double alpha) const {
    LinearProgram lp;
    bool any_single = false;
    for (int k = 0; k < user_count(); ++k) any_single |= !multi_homed[k] && !subsets.empty();
    if (alpha <= 0.0 && any_single) {
      lp.add_constraint({}, LinearProgram::Sense::GE, 1.0);  // no time, demand remains
      return lp;
    }
    add_vars(lp, false, alpha);
    build_rows(lp, false, alpha, -1);
    return lp;
  }

  LinearProgram lp_direct() const {
    LinearProgram lp;
    add_vars(lp, true, 0.0);
    const int alpha_var = lp.add_variable(0.0, kInf, "alpha");
    lp.set_objective({{alpha_var, 1.0}});
    build_rows(lp, true, 0.0, alpha_var);
    return lp;
  }

  void add_vars(LinearProgram& lp, bool direct, double alpha) const {
    for (int v = 0; v < var_count; ++v) lp.add_variable(0.0);
    for (int h = 0; h < helper_count(); ++h) {
      for (const auto& [k, var] : c_of[h]) {
        if (!multi_homed[k]) {
          lp.lower[var] = direct ? single_load() : single_load() * c_front / alpha;
        }
      }
      for (const auto& [msg, var] : m_of[h]) {
        auto it = m_floor[h].find(msg);
        if (it != m_floor[h].end()) lp.lower[var] = it->second;
      }
    }
  }

  double fallback_alpha() const {
    const double n_msgs = static_cast<double>(subsets.size());
    const double k = static_cast<double>(user_count());
    return n_msgs * (k + 1.0) * (1.0 + c_front * (k + 1.0) / c_access) + 1.0;
  }
};

inline PerUserRoutingModel make_per_user_model(const TopologicalGraph& graph,
                                               const std::vector<int>& group_of, int L,
                                               int t_prime) {
  PerUserRoutingModel m;
  m.c_front = graph.c_front;
  m.c_access = graph.c_access;
  m.L = L;
  m.t_prime = t_prime;
  m.group_of = group_of;
  m.users_of = graph.users_of;
  m.helpers_of = graph.helpers_of;
  if (t_prime < L) m.subsets = k_subsets(L, t_prime + 1);
  m.msgs_of_group.assign(L, {});
  for (std::size_t s = 0; s < m.subsets.size(); ++s) {
    for (int ell : m.subsets[s]) m.msgs_of_group[ell].push_back(static_cast<int>(s));
  }
  const int K = m.user_count();
  const int H = m.helper_count();
  m.multi_homed.assign(K, false);
  for (int k = 0; k < K; ++k) {
    if (m.helpers_of[k].empty()) {
      throw std::invalid_argument("make_per_user_model: user without any helper");
    }
    m.multi_homed[k] = m.helpers_of[k].size() > 1;
  }
  m.singles_at.assign(H, std::vector<int>(L, 0));
  for (int k = 0; k < K; ++k) {
    if (!m.multi_homed[k]) m.singles_at[m.helpers_of[k][0]][group_of[k]] += 1;
  }
  int next = 0;
  m.y_base.assign(K, -1);
  for (int k = 0; k < K; ++k) {
    if (!m.multi_homed[k]) continue;
    m.y_base[k] = next;
    next += static_cast<int>(m.msgs_of_group[group_of[k]].size() * m.helpers_of[k].size());
  }
  m.c_of.assign(H, {});
  for (int h = 0; h < H; ++h) {
    for (int k : m.users_of[h]) m.c_of[h][k] = next++;
  }
  m.m_of.assign(H, {});
  m.m_floor.assign(H, {});
  for (int h = 0; h < H; ++h) {
    for (std::size_t s = 0; s < m.subsets.size(); ++s) {
      bool needed = false;
      double floor_val = 0.0;
      bool floor_only = true;
      for (int ell : m.subsets[s]) {
        bool has_multi = false;
        for (int k : m.users_of[h]) {
          if (m.multi_homed[k] && group_of[k] == ell) has_multi = true;
        }
        if (has_multi || m.singles_at[h][ell] > 0) needed = true;
        if (has_multi) floor_only = false;
        floor_val = std::max(floor_val, static_cast<double>(m.singles_at[h][ell]));
      }
      if (!needed) continue;
      m.m_of[h][static_cast<int>(s)] = next++;
      if (floor_val > 0.0 || floor_only) {
        m.m_floor[h][static_cast<int>(s)] = floor_val;
      }
    }
  }
  m.var_count = next;
  return m;
}

inline RoutingSolution solve_new_decentralized_routing(const TopologicalGraph& graph,
                                                       const std::vector<int>& group_of, int L,
                                                       int t_prime, double F,
                                                       const RoutingSolveOptions& opt = {}) {
  if (static_cast<int>(group_of.size()) != graph.user_count()) {
    throw std::invalid_argument("solve_new_decentralized_routing: one group per user required");
  }
  RoutingSolution sol;
  if (t_prime >= L || graph.user_count() == 0) return sol;
  PerUserRoutingModel model = make_per_user_model(graph, group_of, L, t_prime);
  const double denom = static_cast<double>(binomial(L, t_prime));

  auto family = [&](double alpha) { return model.lp_at_alpha(alpha); };
  BisectionConfig cfg;
  cfg.rel_tol = opt.rel_tol;
  cfg.max_iters = opt.max_iters;
  cfg.alpha_low = 0.0;
  cfg.alpha_high = model.fallback_alpha();
  if (opt.seed_with_direct) {
    LpSolution direct = optimize(model.lp_direct());
    if (direct.status == LpSolution::Status::Optimal && direct.objective > 0) {
      cfg.alpha_low = direct.objective * (1.0 - 1e-4);
      cfg.alpha_high = direct.objective * (1.0 + 1e-4);
    }
  }
  BisectionResult bi;
  try {
    bi = bisect_min_alpha(family, cfg);
  } catch (const std::runtime_error&) {
    cfg.alpha_low = 0.0;
    cfg.alpha_high = model.fallback_alpha();
    bi = bisect_min_alpha(family, cfg);
  }

  sol.alpha = bi.alpha;
  sol.point = bi.point;
  sol.bisect_iterations = bi.iterations;
  sol.violation = max_violation(model.lp_at_alpha(bi.alpha), bi.point);
  double front = 0.0, access = 0.0;
  for (int h = 0; h < model.helper_count(); ++h) {
    double load = 0.0;
    for (std::size_t s = 0; s < model.subsets.size(); ++s) {
      double worst_group = 0.0;
      for (int ell : model.subsets[s]) {
        double group_sum = static_cast<double>(model.singles_at[h][ell]);
        for (int k : model.users_of[h]) {
          if (!model.multi_homed[k] || model.group_of[k] != ell) continue;
          const auto& msgs = model.msgs_of_group[ell];
          const auto it = std::find(msgs.begin(), msgs.end(), static_cast<int>(s));
          if (it == msgs.end()) continue;
          const int pos = static_cast<int>(it - msgs.begin());
          const auto& hs = model.helpers_of[k];
          const int hp = static_cast<int>(std::find(hs.begin(), hs.end(), h) - hs.begin());
          group_sum += sol.point[model.y_var(k, pos, hp)];
        }
        worst_group = std::max(worst_group, group_sum);
      }
      load += worst_group;
    }
    front = std::max(front, load);
    for (int k : model.users_of[h]) {
      double num = 0.0;
      if (model.multi_homed[k]) {
        const auto& hs = model.helpers_of[k];
        const int hp = static_cast<int>(std::find(hs.begin(), hs.end(), h) - hs.begin());
        for (std::size_t pos = 0; pos < model.msgs_of_group[model.group_of[k]].size(); ++pos) {
          num += sol.point[model.y_var(k, static_cast<int>(pos), hp)];
        }
      } else {
        num = model.single_load();
      }
      const double cap = sol.point[model.c_of[h].at(k)];
      sol.c_split[{h, k}] = cap;
      if (num > 1e-12) access = std::max(access, num / std::max(cap, 1e-300));
    }
  }
  sol.t_front = front * F / (model.c_front * denom);
  sol.t_access = access * F / denom;
  sol.t_total = std::max(sol.t_front, sol.t_access);
  return sol;
}

}  // namespace cachecast
