#pragma once

#include <initializer_list>
#include <vector>

#include "mmsr/instances.hpp"
#include "mmsr/model.hpp"

namespace mmsr::testing {

// One-station instance; processing times in tenths of a TU.
inline Instance single_station(std::vector<tu_t> processing, tu_t length, tu_t cycle,
                               int lambda = 1, int fmax = 0) {
  Instance inst;
  inst.name = "fixture";
  inst.cycle = cycle;
  inst.lambda = lambda;
  inst.fmax = fmax;
  inst.lead_time = 9;
  inst.stations.push_back({0, length});
  for (size_t i = 0; i < processing.size(); ++i) {
    Vehicle v;
    v.id = static_cast<int>(i);
    v.processing = {processing[i]};
    inst.vehicles.push_back(v);
  }
  return inst;
}

inline void add_old_vehicle(Instance& inst, std::vector<tu_t> processing, int g, int d,
                            int r) {
  OldFailedVehicle o;
  o.vehicle.id = inst.num_positions() + static_cast<int>(inst.old_pool.size());
  o.vehicle.processing = std::move(processing);
  o.vehicle.ready_offset = r;
  o.wait_days = g;
  o.slack_days = d;
  inst.old_pool.push_back(std::move(o));
  inst.fmax = static_cast<int>(inst.old_pool.size());
}

inline Scenario no_failure_scenario(const Instance& inst) {
  Scenario sc;
  sc.exists.assign(inst.num_positions(), 1);
  return sc;
}

inline Scenario scenario_with(const Instance& inst, std::initializer_list<int> fails,
                              std::initializer_list<int> old_present = {}) {
  Scenario sc = no_failure_scenario(inst);
  for (int v : fails) sc.exists[v] = 0;
  sc.old_present.assign(old_present);
  return sc;
}

inline ScenarioSample sample_of(std::vector<Scenario> scenarios) {
  ScenarioSample s;
  s.scenarios = std::move(scenarios);
  return s;
}

inline std::vector<int> identity_perm(int n) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  return p;
}

}  // namespace mmsr::testing
