#pragma once

#include <vector>

#include "mmsr/archive.hpp"
#include "mmsr/instances.hpp"
#include "mmsr/model.hpp"

namespace mmsr {

// Minimum total overload over the discretized feasible (z, w) polytope,
// computed independently of the greedy recursion. Limited to 6 positions and
// moderate station lengths; throws when a bound is exceeded.
tu_sum_t reference_overload(const std::vector<tu_t>& loads, tu_t length, tu_t cycle);

// Exact Pareto front with a witness solution per point, by exhausting every
// first-stage permutation and every hard-feasible, spacing-free plan
// combination. Bounds: |V| <= 7, <= 3 failed vehicles per scenario, <= 8
// scenarios.
ParetoArchive enumerate_pareto(const Instance& instance, const ScenarioSample& sample);

}  // namespace mmsr
