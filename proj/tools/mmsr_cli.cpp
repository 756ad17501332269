// Command-line driver: instance generation, solving, front metrics, and
// dynamic reinsertion simulation as one reproducible pipeline.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mmsr/archive_io.hpp"
#include "mmsr/evaluator.hpp"
#include "mmsr/evolutionary.hpp"
#include "mmsr/instances.hpp"
#include "mmsr/metrics.hpp"
#include "mmsr/model.hpp"
#include "mmsr/oracle.hpp"
#include "mmsr/search.hpp"
#include "mmsr/simulator.hpp"
#include "mmsr/tu.hpp"

namespace fs = std::filesystem;
using namespace mmsr;

namespace {

int default_jobs() {
  const char* env = std::getenv("MMSR_JOBS");
  if (env != nullptr) {
    int j = std::atoi(env);
    if (j >= 1) return j;
  }
  return 1;
}

bool parse_range(const std::string& text, double& lo, double& hi) {
  size_t colon = text.find(':');
  if (colon == std::string::npos) return false;
  lo = std::strtod(text.substr(0, colon).c_str(), nullptr);
  hi = std::strtod(text.substr(colon + 1).c_str(), nullptr);
  return lo <= hi;
}

bool parse_int_range(const std::string& text, int& lo, int& hi) {
  double a, b;
  if (!parse_range(text, a, b)) return false;
  lo = static_cast<int>(a);
  hi = static_cast<int>(b);
  return true;
}

// Filename globbing for the archive arguments; only '*' is supported and only
// in the basename.
std::vector<std::string> expand_globs(const std::vector<std::string>& patterns) {
  std::vector<std::string> out;
  for (const auto& pat : patterns) {
    size_t star = pat.find('*');
    if (star == std::string::npos) {
      out.push_back(pat);
      continue;
    }
    fs::path p(pat);
    fs::path dir = p.parent_path().empty() ? fs::path(".") : p.parent_path();
    std::string base = p.filename().string();
    size_t bstar = base.find('*');
    std::string prefix = base.substr(0, bstar);
    std::string suffix = base.substr(bstar + 1);
    std::vector<std::string> matches;
    if (fs::exists(dir)) {
      for (const auto& entry : fs::directory_iterator(dir)) {
        std::string name = entry.path().filename().string();
        if (name.size() < prefix.size() + suffix.size()) continue;
        if (name.rfind(prefix, 0) != 0) continue;
        if (name.substr(name.size() - suffix.size()) != suffix) continue;
        matches.push_back(entry.path().string());
      }
    }
    std::sort(matches.begin(), matches.end());
    out.insert(out.end(), matches.begin(), matches.end());
  }
  return out;
}

std::string format_metric(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

int cmd_generate(const std::string& out_path, GeneratorConfig cfg) {
  Instance inst = generate_instance(cfg);
  auto violations = validate_instance(inst);
  if (!violations.empty()) {
    std::cerr << "generated instance failed validation: " << violations.front() << "\n";
    return 1;
  }
  write_instance(inst, out_path);
  return 0;
}

int cmd_solve(const std::string& instance_path, const std::string& algo, int sample_n,
              const std::string& budget_text, std::uint64_t seed, int population,
              double mutation_prob, const std::string& out_path) {
  auto budget = Budget::parse(budget_text);
  if (!budget) {
    std::cerr << "bad budget '" << budget_text << "' (use e.g. 600s or 20000it)\n";
    return 2;
  }
  Instance inst = load_instance(instance_path);

  StmlsConfig ls_cfg;
  ls_cfg.budget = *budget;
  ls_cfg.seed = seed;
  if (budget->kind == Budget::Kind::kSeconds) {
    ls_cfg.tau_f = Budget::secs(1.0);
    ls_cfg.tau_s = Budget::secs(0.05);
  }

  EaConfig ea_cfg;
  ea_cfg.budget = *budget;
  ea_cfg.seed = seed;
  ea_cfg.mutation_prob = mutation_prob;
  if (budget->kind == Budget::Kind::kSeconds) ea_cfg.tau_s = Budget::secs(0.05);

  ParetoArchive archive;
  int meta_n = sample_n;
  if (algo == "onescenario") {
    archive = solve_one_scenario(inst, ls_cfg);
    meta_n = 1;
  } else {
    ScenarioSample sample = sample_scenarios(inst, sample_n, seed);
    EvalContext ctx(inst, sample);
    if (algo == "ff") {
      archive = solve_full_failures(ctx, ls_cfg);
    } else if (algo == "stmls") {
      archive = stmls(ctx, ls_cfg);
    } else if (algo == "nsga2") {
      ea_cfg.population = population > 0 ? population : 40;
      archive = nsga2(ctx, ea_cfg);
    } else if (algo == "lsnsga2") {
      ea_cfg.population = population > 0 ? population : 16;
      archive = ls_nsga2(ctx, ea_cfg);
    }
    ArchiveMeta meta{inst.name, algo, budget->str(), seed, meta_n};
    write_archive(out_path, meta, archive);
    return 0;
  }
  ArchiveMeta meta{inst.name, algo, budget->str(), seed, meta_n};
  write_archive(out_path, meta, archive);
  return 0;
}

int cmd_metrics(const std::vector<std::string>& archive_args,
                const std::string& out_dir, const std::vector<double>& eaf_levels) {
  auto paths = expand_globs(archive_args);
  if (paths.empty()) {
    std::cerr << "metrics needs at least one archive\n";
    return 2;
  }
  struct Entry {
    ArchiveMeta meta;
    Front front;  // objective means
  };
  std::map<std::string, std::vector<Entry>> by_instance;
  for (const auto& path : paths) {
    LoadedArchive la = read_archive(path);
    Entry e;
    e.meta = la.meta;
    for (const auto& row : la.rows)
      e.front.push_back(
          {static_cast<double>(row.wo_total) / (kTuScale * double(row.sample_n)),
           static_cast<double>(row.re_total) / double(row.sample_n)});
    by_instance[la.meta.instance].push_back(std::move(e));
  }

  fs::create_directories(out_dir);
  std::ofstream metrics_csv(out_dir + "/metrics.csv");
  std::ofstream css_csv(out_dir + "/css.csv");
  std::ofstream eaf_csv(out_dir + "/eaf.csv");
  if (!metrics_csv || !css_csv || !eaf_csv) {
    std::cerr << "cannot write into " << out_dir << "\n";
    return 1;
  }
  metrics_csv << "instance,algorithm,run,nns,mid,sns\n";
  css_csv << "instance,x,y,css\n";
  eaf_csv << "instance,algorithm,level,x,y\n";

  for (const auto& [instance, entries] : by_instance) {
    std::vector<Front> all;
    for (const auto& e : entries) all.push_back(e.front);
    NormalizationBounds bounds = compute_bounds(all);
    // Normalized space puts the per-instance heuristic ideal at the origin.
    ObjectivePoint ideal{0.0, 0.0};

    std::vector<Front> normalized;
    for (const auto& e : entries) normalized.push_back(normalize(e.front, bounds));

    for (size_t i = 0; i < entries.size(); ++i) {
      if (normalized[i].empty()) continue;
      metrics_csv << instance << "," << entries[i].meta.algo << ","
                  << entries[i].meta.seed << "," << nns(normalized[i]) << ","
                  << format_metric(mid(normalized[i], ideal)) << ","
                  << format_metric(sns(normalized[i], ideal)) << "\n";
    }
    for (size_t i = 0; i < entries.size(); ++i) {
      for (size_t j = 0; j < entries.size(); ++j) {
        if (normalized[i].empty() || normalized[j].empty()) continue;
        css_csv << instance << "," << entries[i].meta.algo << ":" << entries[i].meta.seed
                << "," << entries[j].meta.algo << ":" << entries[j].meta.seed << ","
                << format_metric(css(normalized[i], normalized[j])) << "\n";
      }
    }
    std::map<std::string, std::vector<Front>> by_algo;
    for (size_t i = 0; i < entries.size(); ++i)
      by_algo[entries[i].meta.algo].push_back(normalized[i]);
    for (const auto& [algo, runs] : by_algo) {
      for (double level : eaf_levels) {
        Front surface = eaf_surface(runs, level);
        for (const auto& p : surface)
          eaf_csv << instance << "," << algo << "," << format_metric(level) << ","
                  << format_metric(p.wo) << "," << format_metric(p.re) << "\n";
      }
    }
  }
  return 0;
}

int cmd_simulate(const std::string& instance_path,
                 const std::vector<std::string>& archive_args, int test_n,
                 const std::string& thresholds_text, std::uint64_t seed,
                 const std::string& out_path, int jobs) {
  Instance inst = load_instance(instance_path);
  auto paths = expand_globs(archive_args);
  if (paths.empty()) {
    std::cerr << "simulate needs at least one archive\n";
    return 2;
  }

  SimConfig cfg;
  cfg.n_test_scenarios = test_n;
  cfg.seed = seed;
  cfg.thresholds.clear();
  {
    size_t pos = 0;
    while (pos <= thresholds_text.size()) {
      size_t comma = thresholds_text.find(',', pos);
      std::string tok = thresholds_text.substr(
          pos, comma == std::string::npos ? std::string::npos : comma - pos);
      auto v = tu_parse(tok);
      if (!v || *v < 0) {
        std::cerr << "bad threshold '" << tok << "'\n";
        return 2;
      }
      cfg.thresholds.push_back(*v);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }

  std::vector<LabeledSequence> sequences;
  for (const auto& path : paths) {
    LoadedArchive la = read_archive(path);
    std::string variant = la.meta.algo == "onescenario" ? "one-scenario"
                          : la.meta.algo == "ff"        ? "FF"
                                                        : "FFR";
    for (const auto& row : la.rows) sequences.push_back({variant, row.first_stage});
  }

  auto rows = run_simulation_suite(sequences, inst, cfg, jobs);
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "cannot write " << out_path << "\n";
    return 1;
  }
  out << "variant,threshold,mean_obj_wo,mean_obj_re\n";
  for (const auto& r : rows)
    out << r.variant << "," << tu_to_string(r.threshold) << ","
        << format_metric(r.mean_wo) << "," << format_metric(r.mean_re) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed-model sequencing with stochastic failures and reinsertion"};
  app.require_subcommand(1);
  int jobs = default_jobs();
  app.add_option("--jobs", jobs, "worker threads for independent work items");

  // generate
  auto* gen = app.add_subcommand("generate", "write a synthetic instance file");
  int gen_vehicles = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  GeneratorConfig gcfg;
  std::string gen_cycle, gen_hr_ratio, gen_ev_ratio, gen_rnew, gen_rold;
  gen->add_option("--vehicles", gen_vehicles, "number of vehicles")->required();
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output instance path")->required();
  gen->add_option("--stations", gcfg.n_stations, "station count");
  gen->add_option("--cycle", gen_cycle, "cycle time in TU, e.g. 97.0");
  gen->add_option("--lambda", gcfg.lambda, "reinsertion window length");
  gen->add_option("--fmax", gcfg.fmax_override, "override fmax");
  gen->add_option("--leadtime", gcfg.lead_time, "order lead time in days");
  gen->add_option("--highrisk-ratio", gen_hr_ratio, "high-risk share range lo:hi");
  gen->add_option("--ev-ratio", gen_ev_ratio, "EV share range lo:hi");
  gen->add_option("--rnew", gen_rnew, "ready-offset range lo:hi for new failures");
  gen->add_option("--rold", gen_rold, "ready-offset range lo:hi for pool vehicles");

  // solve
  auto* solve = app.add_subcommand("solve", "run a solver and write its archive");
  std::string solve_instance, solve_algo, solve_budget = "10000it", solve_out;
  int solve_sample_n = 100, solve_pop = 0;
  std::uint64_t solve_seed = 0;
  double solve_mut = 0.1;
  solve->add_option("--instance", solve_instance, "instance file")->required();
  solve->add_option("--algo", solve_algo, "solver")
      ->required()
      ->check(CLI::IsMember({"stmls", "nsga2", "lsnsga2", "onescenario", "ff"}));
  solve->add_option("--sample-n", solve_sample_n, "training sample size");
  solve->add_option("--budget", solve_budget, "budget, e.g. 600s or 20000it");
  solve->add_option("--seed", solve_seed, "run seed");
  solve->add_option("--pop", solve_pop, "population size for the evolutionary solvers");
  solve->add_option("--mutation", solve_mut, "mutation probability");
  solve->add_option("--out", solve_out, "output archive path")->required();

  // metrics
  auto* metrics = app.add_subcommand("metrics", "front quality metrics over archives");
  std::vector<std::string> metrics_archives;
  std::string metrics_out;
  std::string metrics_levels = "0.5";
  metrics->add_option("--archives", metrics_archives, "archive files (glob ok)")
      ->required()
      ->expected(-1);
  metrics->add_option("--out", metrics_out, "output directory")->required();
  metrics->add_option("--eaf-levels", metrics_levels, "comma-separated levels");

  // simulate
  auto* sim = app.add_subcommand("simulate", "dynamic reinsertion simulation");
  std::string sim_instance, sim_thresholds = "0,3,5,10,15,30", sim_out;
  std::vector<std::string> sim_archives;
  int sim_test_n = 50;
  std::uint64_t sim_seed = 0;
  sim->add_option("--instance", sim_instance, "instance file")->required();
  sim->add_option("--archives", sim_archives, "archive files (glob ok)")
      ->required()
      ->expected(-1);
  sim->add_option("--test-n", sim_test_n, "test scenario count");
  sim->add_option("--thresholds", sim_thresholds, "overload thresholds in TU");
  sim->add_option("--seed", sim_seed, "test sampling seed");
  sim->add_option("--out", sim_out, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) {
      gcfg.n_vehicles = gen_vehicles;
      gcfg.seed = gen_seed;
      if (!gen_cycle.empty()) {
        auto c = tu_parse(gen_cycle);
        if (!c) {
          std::cerr << "bad cycle value\n";
          return 2;
        }
        gcfg.cycle = *c;
      }
      if (!gen_hr_ratio.empty() &&
          !parse_range(gen_hr_ratio, gcfg.highrisk_ratio_lo, gcfg.highrisk_ratio_hi)) {
        std::cerr << "bad high-risk ratio range\n";
        return 2;
      }
      if (!gen_ev_ratio.empty() &&
          !parse_range(gen_ev_ratio, gcfg.ev_ratio_lo, gcfg.ev_ratio_hi)) {
        std::cerr << "bad EV ratio range\n";
        return 2;
      }
      if (!gen_rnew.empty() && !parse_int_range(gen_rnew, gcfg.r_new_lo, gcfg.r_new_hi)) {
        std::cerr << "bad rnew range\n";
        return 2;
      }
      if (!gen_rold.empty() && !parse_int_range(gen_rold, gcfg.r_old_lo, gcfg.r_old_hi)) {
        std::cerr << "bad rold range\n";
        return 2;
      }
      return cmd_generate(gen_out, gcfg);
    }
    if (solve->parsed())
      return cmd_solve(solve_instance, solve_algo, solve_sample_n, solve_budget,
                       solve_seed, solve_pop, solve_mut, solve_out);
    if (metrics->parsed()) {
      std::vector<double> levels;
      size_t pos = 0;
      while (pos <= metrics_levels.size()) {
        size_t comma = metrics_levels.find(',', pos);
        std::string tok = metrics_levels.substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos);
        double v = std::strtod(tok.c_str(), nullptr);
        if (v <= 0.0 || v > 1.0) {
          std::cerr << "bad EAF level '" << tok << "'\n";
          return 2;
        }
        levels.push_back(v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
      return cmd_metrics(metrics_archives, metrics_out, levels);
    }
    if (sim->parsed())
      return cmd_simulate(sim_instance, sim_archives, sim_test_n, sim_thresholds,
                          sim_seed, sim_out, jobs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
