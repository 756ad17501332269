#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mmsr/instances.hpp"
#include "mmsr/model.hpp"

namespace mmsr {

struct SimConfig {
  std::vector<tu_t> thresholds = {0, 30, 50, 100, 150, 300};  // tenths of a TU
  int n_test_scenarios = 1000;
  std::uint64_t seed = 0;
};

struct SimLogEntry {
  int vehicle_id = 0;
  int position = 0;       // 1-based position in the sequence at insertion time
  tu_sum_t delta_wo = 0;  // tenths; can be negative
};

struct SimOutcome {
  tu_sum_t wo = 0;       // total overload of the final simulated sequence
  std::int64_t re = 0;   // squared waiting days of never-inserted vehicles
  int reinserted = 0;
  std::vector<SimLogEntry> log;
};

// Replays one scenario against a first-stage sequence: failed vehicles are
// pulled, ready ones re-enter at the first walked position whose overload
// increase stays within `threshold` while the spacing rule holds.
SimOutcome simulate_dynamic(const std::vector<int>& first_stage,
                            const Scenario& scenario, const Instance& instance,
                            tu_t threshold);

struct SimRow {
  std::string variant;
  tu_t threshold = 0;
  double mean_wo = 0.0;  // TU
  double mean_re = 0.0;
};

struct LabeledSequence {
  std::string variant;  // one-scenario | FF | FFR
  std::vector<int> first_stage;
};

// Simulates every labeled sequence over a fresh test sample at each
// threshold; rows are flat means over (sequence, scenario) pairs, ordered by
// variant label then threshold.
std::vector<SimRow> run_simulation_suite(const std::vector<LabeledSequence>& sequences,
                                         const Instance& instance,
                                         const SimConfig& config, int jobs);

}  // namespace mmsr
