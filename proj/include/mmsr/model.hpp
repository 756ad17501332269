#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mmsr/tu.hpp"

namespace mmsr {

enum class RiskClass { kLow, kHigh };

struct Station {
  int id = 0;
  tu_t length = 0;  // must be >= cycle of the owning instance
};

struct Vehicle {
  int id = 0;
  std::vector<tu_t> processing;  // one entry per station
  double failure_prob = 0.0;
  RiskClass risk = RiskClass::kLow;
  int ready_offset = 0;  // positions until the vehicle can be reinserted
  bool is_ev = false;
};

// A vehicle that failed in an earlier horizon and waits in the pool.
// Due when wait_days == slack_days: it must be reinserted this horizon.
struct OldFailedVehicle {
  Vehicle vehicle;
  int wait_days = 0;   // g
  int slack_days = 0;  // d
  bool due() const { return wait_days == slack_days; }
};

struct Instance {
  std::string name;
  std::vector<Station> stations;
  std::vector<Vehicle> vehicles;  // ids are dense 0..n-1
  tu_t cycle = 0;
  int fmax = 0;
  int lambda = 1;
  int lead_time = 9;
  std::vector<OldFailedVehicle> old_pool;  // exactly fmax entries

  int num_positions() const { return static_cast<int>(vehicles.size()); }
  int num_stations() const { return static_cast<int>(stations.size()); }
};

// One failure realization: exists[v] == 0 means vehicle v fails this horizon;
// old_present lists the pool indices realized this scenario, ascending.
struct Scenario {
  std::vector<std::uint8_t> exists;
  std::vector<int> old_present;
};

// Decision per failed vehicle in canonical order (new failures by id, then
// old-pool members by pool index): 0 = not reinserted, t in [1, |T|] = insert
// at first-stage position t.
using ReinsertionPlan = std::vector<int>;

struct FinalEntry {
  int vehicle_id = 0;
  bool neutral = false;
  bool operator==(const FinalEntry&) const = default;
};
using FinalSequence = std::vector<FinalEntry>;

struct ObjectivePoint {
  double wo = 0.0;  // mean work overload, TU
  double re = 0.0;  // mean sum of squared waiting days
};

struct Solution {
  std::vector<int> first_stage;        // vehicle id at position index+1
  std::vector<ReinsertionPlan> plans;  // one per sampled scenario
  tu_sum_t wo_total = 0;               // tenths of a TU, summed over scenarios
  std::int64_t re_total = 0;           // summed over scenarios
  int violation_degree = 0;            // violated lambda windows, all scenarios
  bool evaluated = false;

  ObjectivePoint objectives(int n_scenarios) const {
    return {static_cast<double>(wo_total) / (kTuScale * static_cast<double>(n_scenarios)),
            static_cast<double>(re_total) / static_cast<double>(n_scenarios)};
  }
};

// Returns one description per violated invariant; empty means well-formed.
std::vector<std::string> validate_instance(const Instance& instance);

// 1-based first-stage position of every vehicle id.
std::vector<int> positions_of(const std::vector<int>& first_stage);

bool is_permutation_of_instance(const std::vector<int>& seq, int n_vehicles);

}  // namespace mmsr
