#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mmsr/model.hpp"

namespace mmsr {

struct GeneratorConfig {
  int n_vehicles = 200;
  int n_stations = 5;
  tu_t cycle = 970;                   // 97.0 TU
  tu_t station_length = 1200;         // 120.0 TU
  tu_t battery_station_length = 2400; // first station hosts the battery tasks
  double ev_ratio_lo = 0.25, ev_ratio_hi = 0.33;
  double highrisk_ratio_lo = 0.03, highrisk_ratio_hi = 0.05;
  double highrisk_prob_lo = 0.20, highrisk_prob_hi = 0.35;
  double lowrisk_prob_lo = 0.0, lowrisk_prob_hi = 0.01;
  double fmax_fraction = 0.05;
  int fmax_override = -1;  // >= 0 replaces fraction * n_vehicles
  int lambda = 10;
  int lead_time = 9;
  // Ready-offset ranges; negative means the size-derived default
  // [10, n-10] for current-horizon failures and [0, n-10] for pool vehicles,
  // clamped to stay well-formed on small instances.
  int r_new_lo = -1, r_new_hi = -1;
  int r_old_lo = -1, r_old_hi = -1;
  std::uint64_t seed = 0;

  std::vector<std::string> validate() const;
};

struct ScenarioSample {
  std::vector<Scenario> scenarios;
  std::uint64_t seed = 0;
  int size() const { return static_cast<int>(scenarios.size()); }
};

Instance generate_instance(const GeneratorConfig& config);

ScenarioSample sample_scenarios(const Instance& instance, int n, std::uint64_t seed);

// Single failure-free scenario; the deterministic counterpart of a sample.
ScenarioSample one_scenario_sample(const Instance& instance);

// (1/(fmax+1)) * prod_v f_v^(1-e_v) (1-f_v)^e_v
double scenario_probability(const Instance& instance, const Scenario& scenario);

void write_instance(const Instance& instance, const std::string& path);
Instance load_instance(const std::string& path);

void write_sample(const ScenarioSample& sample, const std::string& path);
ScenarioSample load_sample(const std::string& path, const Instance& instance);

bool instances_equal(const Instance& a, const Instance& b);

// Canonical per-scenario failed set: current-horizon failures by vehicle id,
// then realized pool vehicles by pool index. Reinsertion plans align to it.
struct FailedVehicle {
  int vehicle_id = 0;
  bool is_old = false;
  int old_pool_idx = -1;
  int ready_offset = 0;
  int wait_days = 0;  // 0 for current-horizon failures
  bool due = false;
  const Vehicle* vehicle = nullptr;
};

std::vector<FailedVehicle> failed_vehicles(const Instance& instance,
                                           const Scenario& scenario);

}  // namespace mmsr
