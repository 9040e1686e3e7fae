#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cachecast/association.hpp"
#include "cachecast/avalanche.hpp"
#include "cachecast/coloring.hpp"
#include "cachecast/graphs.hpp"
#include "cachecast/layout.hpp"
#include "cachecast/library.hpp"
#include "cachecast/rng.hpp"
#include "cachecast/routing.hpp"

namespace cachecast {

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::string strip_quotes(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\''))) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

// Flat key/value text: one `key = value` per line, values either scalars,
// quoted strings, or single-line [a, b, c] lists; # starts a comment.
struct ConfigText {
  std::map<std::string, std::string> scalars;
  std::map<std::string, std::vector<std::string>> lists;

  bool has(const std::string& key) const {
    return scalars.count(key) > 0 || lists.count(key) > 0;
  }

  std::string scalar(const std::string& key) const {
    auto it = scalars.find(key);
    if (it == scalars.end()) {
      throw std::invalid_argument("config: missing key '" + key + "'");
    }
    return it->second;
  }

  std::string scalar_or(const std::string& key, const std::string& fallback) const {
    auto it = scalars.find(key);
    return it == scalars.end() ? fallback : it->second;
  }

  std::vector<std::string> list(const std::string& key) const {
    auto it = lists.find(key);
    if (it == lists.end()) {
      throw std::invalid_argument("config: missing list key '" + key + "'");
    }
    return it->second;
  }
};

inline double parse_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + key + "' is not a number: " + text);
  }
}

inline long long parse_int(const std::string& key, const std::string& text) {
  const double v = parse_double(key, text);
  const long long n = std::llround(v);
  if (std::abs(v - static_cast<double>(n)) > 1e-9) {
    throw std::invalid_argument("config: key '" + key + "' is not an integer: " + text);
  }
  return n;
}

inline ConfigText parse_config_text(const std::string& text) {
  ConfigText out;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": empty key or value");
    }
    if (value.front() == '[') {
      if (value.back() != ']') {
        throw std::invalid_argument("config line " + std::to_string(line_no) +
                                    ": list must close on the same line");
      }
      std::vector<std::string> items;
      std::string inner = value.substr(1, value.size() - 2);
      std::size_t start = 0;
      while (start <= inner.size()) {
        std::size_t comma = inner.find(',', start);
        const std::string item =
            trim(inner.substr(start, comma == std::string::npos ? std::string::npos
                                                                : comma - start));
        if (!item.empty()) items.push_back(strip_quotes(item));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      out.lists[key] = std::move(items);
    } else {
      out.scalars[key] = strip_quotes(value);
    }
  }
  return out;
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace detail

struct ExperimentConfig {
  std::string model;                 // topological | collision
  std::vector<std::string> schemes;  // see scheme lists below
  std::string sweep_param;           // L | mu | cRatio
  std::vector<double> sweep_values;
  int instances = 1;
  std::uint64_t base_seed = 1;
  double helper_intensity_per_km2 = 7.0;
  double user_intensity_per_km2 = 140.0;
  double region_radius_m = 1000.0;
  double a_sig_m = 220.0;
  double a_cell_m = 200.0;
  double a_interf_m = 240.0;
  double c_front_bps = 1.0;
  double c_access_bps = 1.0;
  double file_bits = 1.0;
  double mu = 0.2;   // cached fraction of the library per user
  int configs = 5;   // number of cache configurations L
};

inline const std::set<std::string>& topological_schemes() {
  static const std::set<std::string> s{"central", "multiround", "new-lp"};
  return s;
}

inline const std::set<std::string>& collision_schemes() {
  static const std::set<std::string> s{"reuse-exact", "reuse-dsatur+greedy", "reuse-random",
                                       "avalanche"};
  return s;
}

// One resolved point on the sweep axis.
struct SweepPoint {
  double value = 0.0;
  int L = 0;
  int t_prime = 0;
  double mu = 0.0;
  double c_front = 0.0;
  double c_access = 0.0;
};

inline SweepPoint resolve_sweep_point(const ExperimentConfig& cfg, double value) {
  SweepPoint p;
  p.value = value;
  p.L = cfg.configs;
  p.mu = cfg.mu;
  p.c_front = cfg.c_front_bps;
  p.c_access = cfg.c_access_bps;
  if (cfg.sweep_param == "L") {
    const long long L = std::llround(value);
    if (std::abs(value - static_cast<double>(L)) > 1e-9 || L <= 0) {
      throw std::invalid_argument("sweep over L requires positive integer values");
    }
    p.L = static_cast<int>(L);
  } else if (cfg.sweep_param == "mu") {
    p.mu = value;
  } else if (cfg.sweep_param == "cRatio") {
    p.c_access = value * cfg.c_front_bps;
  } else {
    throw std::invalid_argument("sweep_param must be L, mu, or cRatio");
  }
  const double t_real = p.mu * static_cast<double>(p.L);
  const long long t = std::llround(t_real);
  if (std::abs(t_real - static_cast<double>(t)) > 1e-9 || t < 0 || t > p.L) {
    throw std::invalid_argument("sweep point needs integer replication: L*mu must be an integer in [0, L]");
  }
  p.t_prime = static_cast<int>(t);
  return p;
}

inline void validate_config(const ExperimentConfig& cfg) {
  if (cfg.model != "topological" && cfg.model != "collision") {
    throw std::invalid_argument("model must be topological or collision");
  }
  const auto& allowed =
      cfg.model == "topological" ? topological_schemes() : collision_schemes();
  if (cfg.schemes.empty()) throw std::invalid_argument("schemes must be non-empty");
  for (const std::string& s : cfg.schemes) {
    if (allowed.count(s) == 0) {
      throw std::invalid_argument("scheme '" + s + "' does not run on model " + cfg.model);
    }
  }
  if (cfg.instances <= 0) throw std::invalid_argument("instances must be positive");
  if (cfg.sweep_values.empty()) throw std::invalid_argument("sweep_values must be non-empty");
  for (double v : cfg.sweep_values) {
    if (!(v > 0)) throw std::invalid_argument("sweep values must be positive");
    resolve_sweep_point(cfg, v);  // throws on non-integer replication
  }
  for (double v : {cfg.helper_intensity_per_km2, cfg.user_intensity_per_km2,
                   cfg.region_radius_m, cfg.a_sig_m, cfg.a_cell_m, cfg.a_interf_m,
                   cfg.c_front_bps, cfg.c_access_bps, cfg.file_bits}) {
    if (!(v > 0)) throw std::invalid_argument("layout and capacity parameters must be positive");
  }
  if (cfg.a_cell_m > cfg.a_interf_m) {
    throw std::invalid_argument("a_cell_m must not exceed a_interf_m");
  }
  if (cfg.configs <= 0) throw std::invalid_argument("configs must be positive");
  if (!(cfg.mu > 0.0) || cfg.mu > 1.0) throw std::invalid_argument("mu must be in (0, 1]");
}

inline ExperimentConfig parse_experiment_config(const std::string& text) {
  const detail::ConfigText c = detail::parse_config_text(text);
  ExperimentConfig cfg;
  cfg.model = c.scalar("model");
  cfg.schemes = c.list("schemes");
  cfg.sweep_param = c.scalar_or("sweep_param", "L");
  if (c.has("sweep_values")) {
    for (const std::string& v : c.list("sweep_values")) {
      cfg.sweep_values.push_back(detail::parse_double("sweep_values", v));
    }
  }
  cfg.instances = static_cast<int>(detail::parse_int("instances", c.scalar_or("instances", "1")));
  cfg.base_seed =
      static_cast<std::uint64_t>(detail::parse_int("base_seed", c.scalar_or("base_seed", "1")));
  auto num = [&](const char* key, double fallback) {
    return c.has(key) ? detail::parse_double(key, c.scalar(key)) : fallback;
  };
  cfg.helper_intensity_per_km2 = num("helper_intensity_per_km2", cfg.helper_intensity_per_km2);
  cfg.user_intensity_per_km2 = num("user_intensity_per_km2", cfg.user_intensity_per_km2);
  cfg.region_radius_m = num("region_radius_m", cfg.region_radius_m);
  cfg.a_sig_m = num("a_sig_m", cfg.a_sig_m);
  cfg.a_cell_m = num("a_cell_m", cfg.a_cell_m);
  cfg.a_interf_m = num("a_interf_m", cfg.a_interf_m);
  cfg.c_front_bps = num("c_front_bps", cfg.c_front_bps);
  cfg.c_access_bps = num("c_access_bps", cfg.c_access_bps);
  cfg.file_bits = num("file_bits", cfg.file_bits);
  cfg.mu = num("mu", cfg.mu);
  cfg.configs = static_cast<int>(detail::parse_int("configs", c.scalar_or("configs", "5")));
  if (cfg.sweep_values.empty()) {
    cfg.sweep_values.push_back(cfg.sweep_param == "L" ? static_cast<double>(cfg.configs)
                               : cfg.sweep_param == "mu" ? cfg.mu
                                                         : cfg.c_access_bps / cfg.c_front_bps);
  }
  validate_config(cfg);
  return cfg;
}

struct ResultRecord {
  std::string scheme;
  std::string sweep_param;
  double sweep_value = 0.0;
  std::uint64_t seed = 0;
  double t_seconds = 0.0;
  double t_normalized = 0.0;
  std::string flag;  // empty = usable row
  // diagnostics
  int reuse_order = 0;
  double max_load = 0.0;
  int lp_iterations = 0;
};

inline Layout make_instance_layout(const ExperimentConfig& cfg, const SweepPoint& sp,
                                   std::uint64_t seed) {
  Rng root(seed);
  Rng helper_stream = root.split(1);
  Rng user_stream = root.split(2);
  Layout l;
  l.region_radius_m = cfg.region_radius_m;
  l.a_sig_m = cfg.a_sig_m;
  l.a_cell_m = cfg.a_cell_m;
  l.a_interf_m = cfg.a_interf_m;
  l.c_front_bps = sp.c_front;
  l.c_access_bps = sp.c_access;
  l.helpers = sample_ppp(cfg.helper_intensity_per_km2, cfg.region_radius_m, helper_stream);
  l.users = sample_ppp(cfg.user_intensity_per_km2, cfg.region_radius_m, user_stream);
  return l;
}

namespace detail {

inline void run_topological_instance(const ExperimentConfig& cfg, const SweepPoint& sp,
                                     std::uint64_t seed, std::vector<ResultRecord>& out) {
  const Layout layout = make_instance_layout(cfg, sp, seed);
  const TopologicalGraph graph = build_topological_graph(layout);
  CacheAssignment assignment =
      assign_caches(static_cast<int>(layout.users.size()), sp.L, Rng(seed).split(3).next_u64());
  std::vector<int> group_of(graph.user_count());
  for (int k = 0; k < graph.user_count(); ++k) group_of[k] = assignment.group_of[graph.kept[k]];
  const double denom_dec = static_cast<double>(binomial(sp.L, sp.t_prime));
  for (const std::string& scheme : cfg.schemes) {
    ResultRecord rec;
    rec.scheme = scheme;
    rec.sweep_param = cfg.sweep_param;
    rec.sweep_value = sp.value;
    rec.seed = seed;
    try {
      if (graph.user_count() == 0) {
        rec.flag = "empty";
      } else if (scheme == "central") {
        // largest replication the cache budget allows
        const int K = graph.user_count();
        const int t = static_cast<int>(std::floor(sp.mu * static_cast<double>(K) + 1e-9));
        if (K > 12) {
          rec.flag = "gate";
        } else {
          RoutingSolution sol = solve_centralized_routing(graph, t, cfg.file_bits);
          rec.t_seconds = sol.t_total;
          rec.max_load = sol.alpha;
          rec.lp_iterations = sol.bisect_iterations;
        }
      } else if (scheme == "multiround") {
        MultiroundRouting mr =
            solve_multiround_routing(graph, group_of, sp.L, sp.t_prime, cfg.file_bits);
        rec.t_seconds = mr.t_total;
        rec.max_load =
            static_cast<double>(array_slots(mr.array, sp.t_prime)) / denom_dec;
        for (const RoutingSolution& r : mr.rounds) rec.lp_iterations += r.bisect_iterations;
      } else if (scheme == "new-lp") {
        RoutingSolution sol =
            solve_new_decentralized_routing(graph, group_of, sp.L, sp.t_prime, cfg.file_bits);
        rec.t_seconds = sol.t_total;
        rec.max_load = sol.alpha;
        rec.lp_iterations = sol.bisect_iterations;
      }
    } catch (const std::exception&) {
      rec.flag = "error";
      rec.t_seconds = 0.0;
    }
    rec.t_normalized = rec.t_seconds * sp.c_front / cfg.file_bits;
    out.push_back(std::move(rec));
  }
}

inline void run_collision_instance(const ExperimentConfig& cfg, const SweepPoint& sp,
                                   std::uint64_t seed, std::vector<ResultRecord>& out) {
  const Layout layout = make_instance_layout(cfg, sp, seed);
  const auto [covered, dropped] = covered_subset(layout, layout.a_cell_m);
  const bool empty = covered.users.empty();
  CollisionGraph cg;
  HelperConflictGraph conflict;
  CacheAssignment assignment;
  CacheScheme scheme_plan{sp.L, sp.t_prime, k_subsets(sp.L, sp.t_prime)};
  if (!empty) {
    cg = build_collision_graph(covered);
    conflict = build_helper_conflict_graph(cg);
    assignment = assign_caches(static_cast<int>(covered.users.size()), sp.L,
                               Rng(seed).split(3).next_u64());
  }
  const double denom = static_cast<double>(binomial(sp.L, sp.t_prime));
  for (const std::string& scheme : cfg.schemes) {
    ResultRecord rec;
    rec.scheme = scheme;
    rec.sweep_param = cfg.sweep_param;
    rec.sweep_value = sp.value;
    rec.seed = seed;
    try {
      if (empty) {
        rec.flag = "empty";
      } else if (scheme == "avalanche") {
        AvalancheResult av =
            avalanche_run(cg, assignment, scheme_plan, sp.c_front, sp.c_access, cfg.file_bits);
        rec.t_seconds = av.t_total;
        rec.max_load = static_cast<double>(av.slots) / denom;
      } else {
        Coloring coloring;
        Association assoc;
        if (scheme == "reuse-exact") {
          if (conflict.vertices > 30) {
            rec.flag = "gate";
          } else {
            coloring = color_exact(conflict);
            assoc = associate_exact(cg, assignment, scheme_plan);
            if (!assoc.certified_exact) rec.flag = "fallback";
          }
        } else if (scheme == "reuse-dsatur+greedy") {
          coloring = color_dsatur(conflict);
          assoc = associate_greedy(cg, assignment, scheme_plan);
        } else if (scheme == "reuse-random") {
          coloring = color_dsatur(conflict);
          assoc = associate_random(cg, assignment, scheme_plan, Rng(seed).split(4).next_u64());
        }
        if (rec.flag.empty() || rec.flag == "fallback") {
          rec.t_seconds =
              reuse_delivery_time(coloring, assoc, scheme_plan, sp.c_front, sp.c_access,
                                  cfg.file_bits);
          rec.reuse_order = coloring.colors;
          rec.max_load = static_cast<double>(assoc.max_slots) / denom;
        }
      }
    } catch (const std::exception&) {
      rec.flag = "error";
      rec.t_seconds = 0.0;
    }
    rec.t_normalized = rec.t_seconds * sp.c_front / cfg.file_bits;
    out.push_back(std::move(rec));
  }
}

}  // namespace detail

// Every sweep value x instance pair shares one layout and one cache
// assignment across all schemes; seeds are base + instance index, so a given
// config reproduces byte-identical output.
inline std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  std::vector<ResultRecord> out;
  for (double value : cfg.sweep_values) {
    const SweepPoint sp = resolve_sweep_point(cfg, value);
    for (int inst = 0; inst < cfg.instances; ++inst) {
      const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(inst);
      if (cfg.model == "topological") {
        detail::run_topological_instance(cfg, sp, seed, out);
      } else {
        detail::run_collision_instance(cfg, sp, seed, out);
      }
    }
  }
  return out;
}

struct SummaryRow {
  std::string scheme;
  double sweep_value = 0.0;
  double mean = 0.0;
  double stderr_mean = 0.0;
  int count = 0;
  int excluded = 0;
};

inline std::vector<SummaryRow> summarize(const std::vector<ResultRecord>& records) {
  std::map<std::pair<std::string, double>, SummaryRow> acc;
  std::vector<ResultRecord> sorted = records;
  std::sort(sorted.begin(), sorted.end(), [](const ResultRecord& a, const ResultRecord& b) {
    if (a.scheme != b.scheme) return a.scheme < b.scheme;
    if (a.sweep_value != b.sweep_value) return a.sweep_value < b.sweep_value;
    return a.seed < b.seed;
  });
  std::map<std::pair<std::string, double>, std::vector<double>> samples;
  for (const ResultRecord& r : sorted) {
    const auto key = std::make_pair(r.scheme, r.sweep_value);
    SummaryRow& row = acc[key];
    row.scheme = r.scheme;
    row.sweep_value = r.sweep_value;
    if (r.flag.empty()) {
      samples[key].push_back(r.t_seconds);
    } else {
      row.excluded += 1;
    }
  }
  std::vector<SummaryRow> out;
  for (auto& [key, row] : acc) {
    const auto& xs = samples[key];
    row.count = static_cast<int>(xs.size());
    if (!xs.empty()) {
      double sum = 0.0;
      for (double x : xs) sum += x;
      row.mean = sum / static_cast<double>(xs.size());
      if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - row.mean) * (x - row.mean);
        const double var = ss / static_cast<double>(xs.size() - 1);
        row.stderr_mean = std::sqrt(var / static_cast<double>(xs.size()));
      }
    }
    out.push_back(row);
  }
  return out;
}

inline std::string records_to_csv(const std::vector<ResultRecord>& records) {
  std::string out = "scheme,sweep_param,sweep_value,seed,t_seconds,t_normalized,flag\n";
  for (const ResultRecord& r : records) {
    out += r.scheme;
    out += ',';
    out += r.sweep_param;
    out += ',';
    out += detail::format_double(r.sweep_value);
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += detail::format_double(r.t_seconds);
    out += ',';
    out += detail::format_double(r.t_normalized);
    out += ',';
    out += r.flag;
    out += '\n';
  }
  return out;
}

inline std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
  std::string out = "scheme,sweep_value,mean_t_seconds,stderr,count,excluded\n";
  for (const SummaryRow& r : rows) {
    out += r.scheme;
    out += ',';
    out += detail::format_double(r.sweep_value);
    out += ',';
    out += detail::format_double(r.mean);
    out += ',';
    out += detail::format_double(r.stderr_mean);
    out += ',';
    out += std::to_string(r.count);
    out += ',';
    out += std::to_string(r.excluded);
    out += '\n';
  }
  return out;
}

}  // namespace cachecast
