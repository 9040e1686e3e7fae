// Command line front end: layout generation, experiment runs, sweeps, and
// collision schedule traces.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cachecast/avalanche.hpp"
#include "cachecast/example_instance.hpp"
#include "cachecast/experiment.hpp"
#include "cachecast/graphs.hpp"
#include "cachecast/layout.hpp"
#include "cachecast/multiround.hpp"
#include "cachecast/routing.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

cachecast::ExperimentConfig load_config(const std::string& path) {
  return cachecast::parse_experiment_config(read_file(path));
}

// File size must split evenly into one subfile per index set; round up per
// sweep point when it does not and say so.
double rounded_file_bits(double file_bits, int L, int t_prime, double sweep_value) {
  const double d = static_cast<double>(cachecast::binomial(L, t_prime));
  const double units = std::ceil(file_bits / d - 1e-12);
  const double rounded = units * d;
  if (std::abs(rounded - file_bits) > 1e-9) {
    std::cerr << "note: file_bits " << file_bits << " is not a multiple of " << d
              << " subfiles at sweep value " << sweep_value << "; using " << rounded
              << "\n";
  }
  return rounded;
}

std::vector<cachecast::ResultRecord> run_with_rounding(const cachecast::ExperimentConfig& cfg) {
  std::vector<cachecast::ResultRecord> all;
  for (double value : cfg.sweep_values) {
    const cachecast::SweepPoint sp = cachecast::resolve_sweep_point(cfg, value);
    cachecast::ExperimentConfig one = cfg;
    one.sweep_values = {value};
    one.file_bits = rounded_file_bits(cfg.file_bits, sp.L, sp.t_prime, value);
    std::vector<cachecast::ResultRecord> part = cachecast::run_experiment(one);
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

// Writes the self-contained min-load program for the first instance of the
// first scheme that has one.
void dump_first_lp(const cachecast::ExperimentConfig& cfg, const std::string& path) {
  if (cfg.model != "topological") {
    throw std::runtime_error("--dump-lp needs the topological model");
  }
  const cachecast::SweepPoint sp = cachecast::resolve_sweep_point(cfg, cfg.sweep_values[0]);
  const cachecast::Layout layout = cachecast::make_instance_layout(cfg, sp, cfg.base_seed);
  const cachecast::TopologicalGraph graph = cachecast::build_topological_graph(layout);
  if (graph.user_count() == 0) throw std::runtime_error("--dump-lp: instance has no users");
  cachecast::CacheAssignment assignment =
      cachecast::assign_caches(static_cast<int>(layout.users.size()), sp.L,
                               cachecast::Rng(cfg.base_seed).split(3).next_u64());
  std::vector<int> group_of(graph.user_count());
  for (int k = 0; k < graph.user_count(); ++k) {
    group_of[k] = assignment.group_of[graph.kept[k]];
  }
  cachecast::LinearProgram lp;
  bool have = false;
  for (const std::string& scheme : cfg.schemes) {
    if (scheme == "central") {
      const int K = graph.user_count();
      if (K > 12) continue;
      const int t = static_cast<int>(std::floor(sp.mu * static_cast<double>(K) + 1e-9));
      lp = cachecast::make_centralized_model(graph, t).lp_direct();
      have = true;
    } else if (scheme == "new-lp") {
      lp = cachecast::make_per_user_model(graph, group_of, sp.L, sp.t_prime).lp_direct();
      have = true;
    } else if (scheme == "multiround") {
      std::vector<std::vector<int>> members(sp.L);
      for (int k = 0; k < graph.user_count(); ++k) members[group_of[k]].push_back(k);
      const cachecast::DeliveryArray arr = cachecast::build_delivery_array(members);
      const auto subsets = cachecast::k_subsets(sp.L, sp.t_prime + 1);
      for (int col = 0; col < arr.columns(); ++col) {
        const auto column = arr.column_users(col);
        if (column.empty()) continue;
        lp = cachecast::make_round_model(graph, sp.L, subsets, column).lp_direct();
        have = true;
        break;
      }
    }
    if (have) break;
  }
  if (!have) throw std::runtime_error("--dump-lp: no scheme produced a program");
  std::ostringstream os;
  cachecast::write_lp_format(lp, os);
  write_output(path, os.str());
}

void print_trace(const cachecast::CollisionGraph& cg,
                 const cachecast::CacheAssignment& assignment,
                 const cachecast::CacheScheme& plan, double c_front, double c_access,
                 double file_bits, const std::string& out_path) {
  const cachecast::AvalancheResult result =
      cachecast::avalanche_run(cg, assignment, plan, c_front, c_access, file_bits);
  write_output(out_path, cachecast::trace_to_json_lines(result.trace));
  std::cerr << "slots=" << result.slots << " t_total=" << result.t_total
            << " fallback_activations=" << result.fallback_activations << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coded caching delivery over helper networks"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "sample a random layout and print it as JSON");
  std::uint64_t gen_seed = 1;
  std::string gen_out = "-";
  cachecast::ExperimentConfig gen_cfg;  // reuse the field defaults
  gen->add_option("--seed", gen_seed, "instance seed");
  gen->add_option("--out", gen_out, "output path, - for stdout");
  gen->add_option("--helper-intensity", gen_cfg.helper_intensity_per_km2, "helpers per km^2");
  gen->add_option("--user-intensity", gen_cfg.user_intensity_per_km2, "users per km^2");
  gen->add_option("--radius", gen_cfg.region_radius_m, "region radius in meters");
  gen->add_option("--a-sig", gen_cfg.a_sig_m, "helper signal radius in meters");
  gen->add_option("--a-cell", gen_cfg.a_cell_m, "association radius in meters");
  gen->add_option("--a-interf", gen_cfg.a_interf_m, "interference radius in meters");
  gen->add_option("--c-front", gen_cfg.c_front_bps, "fronthaul capacity");
  gen->add_option("--c-access", gen_cfg.c_access_bps, "total access capacity");

  auto* run = app.add_subcommand("run", "run the experiment in a config file, print CSV");
  std::string run_config;
  std::string run_out = "-";
  std::string run_summary;
  std::string run_dump_lp;
  run->add_option("--config", run_config, "experiment config file")->required();
  run->add_option("--out", run_out, "per-instance CSV path, - for stdout");
  run->add_option("--summary", run_summary, "also write a per-scheme summary CSV here");
  run->add_option("--dump-lp", run_dump_lp, "write the first instance's program in LP format");

  auto* sweep = app.add_subcommand("sweep", "run a config with overridden sweep values");
  std::string sweep_config;
  std::string sweep_out = "-";
  std::string sweep_summary;
  std::string sweep_param;
  std::string sweep_values;
  sweep->add_option("--config", sweep_config, "experiment config file")->required();
  sweep->add_option("--out", sweep_out, "per-instance CSV path, - for stdout");
  sweep->add_option("--summary", sweep_summary, "also write a per-scheme summary CSV here");
  sweep->add_option("--param", sweep_param, "sweep parameter: L, mu, or cRatio");
  sweep->add_option("--values", sweep_values, "comma separated sweep values");

  auto* trace = app.add_subcommand("trace", "print a collision schedule trace as JSON lines");
  std::string trace_config;
  std::string trace_out = "-";
  int trace_instance = 0;
  int trace_sweep_index = 0;
  bool trace_builtin = false;
  trace->add_option("--config", trace_config, "experiment config file (collision model)");
  trace->add_option("--out", trace_out, "output path, - for stdout");
  trace->add_option("--instance", trace_instance, "instance index within the config");
  trace->add_option("--sweep-index", trace_sweep_index, "index into sweep_values");
  trace->add_flag("--builtin-example", trace_builtin, "trace the built-in example instance");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      cachecast::SweepPoint sp;
      sp.c_front = gen_cfg.c_front_bps;
      sp.c_access = gen_cfg.c_access_bps;
      const cachecast::Layout layout = cachecast::make_instance_layout(gen_cfg, sp, gen_seed);
      write_output(gen_out, cachecast::layout_to_json(layout));
    } else if (run->parsed()) {
      const cachecast::ExperimentConfig cfg = load_config(run_config);
      if (!run_dump_lp.empty()) dump_first_lp(cfg, run_dump_lp);
      const std::vector<cachecast::ResultRecord> records = run_with_rounding(cfg);
      write_output(run_out, cachecast::records_to_csv(records));
      if (!run_summary.empty()) {
        write_output(run_summary, cachecast::summary_to_csv(cachecast::summarize(records)));
      }
    } else if (sweep->parsed()) {
      cachecast::ExperimentConfig cfg = load_config(sweep_config);
      if (!sweep_param.empty()) cfg.sweep_param = sweep_param;
      if (!sweep_values.empty()) {
        cfg.sweep_values.clear();
        std::istringstream is(sweep_values);
        std::string item;
        while (std::getline(is, item, ',')) {
          cfg.sweep_values.push_back(cachecast::detail::parse_double("--values", item));
        }
      }
      cachecast::validate_config(cfg);
      const std::vector<cachecast::ResultRecord> records = run_with_rounding(cfg);
      write_output(sweep_out, cachecast::records_to_csv(records));
      if (!sweep_summary.empty()) {
        write_output(sweep_summary, cachecast::summary_to_csv(cachecast::summarize(records)));
      }
    } else if (trace->parsed()) {
      if (trace_builtin) {
        const cachecast::Layout layout = cachecast::example_layout();
        const cachecast::CollisionGraph cg = cachecast::build_collision_graph(layout);
        const cachecast::CacheScheme plan = cachecast::example_scheme();
        const double f = rounded_file_bits(1.0, plan.configs, plan.replication, 0.0);
        print_trace(cg, cachecast::example_assignment(), plan, layout.c_front_bps,
                    layout.c_access_bps, f, trace_out);
      } else {
        if (trace_config.empty()) {
          throw std::runtime_error("trace needs --config or --builtin-example");
        }
        const cachecast::ExperimentConfig cfg = load_config(trace_config);
        if (cfg.model != "collision") {
          throw std::runtime_error("trace needs a collision model config");
        }
        if (trace_sweep_index < 0 ||
            trace_sweep_index >= static_cast<int>(cfg.sweep_values.size())) {
          throw std::runtime_error("--sweep-index out of range");
        }
        if (trace_instance < 0 || trace_instance >= cfg.instances) {
          throw std::runtime_error("--instance out of range");
        }
        const cachecast::SweepPoint sp =
            cachecast::resolve_sweep_point(cfg, cfg.sweep_values[trace_sweep_index]);
        const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(trace_instance);
        const cachecast::Layout layout = cachecast::make_instance_layout(cfg, sp, seed);
        const auto [covered, dropped] = cachecast::covered_subset(layout, layout.a_cell_m);
        if (covered.users.empty()) throw std::runtime_error("instance has no covered users");
        const cachecast::CollisionGraph cg = cachecast::build_collision_graph(covered);
        const cachecast::CacheAssignment assignment = cachecast::assign_caches(
            static_cast<int>(covered.users.size()), sp.L, cachecast::Rng(seed).split(3).next_u64());
        const cachecast::CacheScheme plan{sp.L, sp.t_prime,
                                          cachecast::k_subsets(sp.L, sp.t_prime)};
        const double f =
            rounded_file_bits(cfg.file_bits, sp.L, sp.t_prime, sp.value);
        print_trace(cg, assignment, plan, sp.c_front, sp.c_access, f, trace_out);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
