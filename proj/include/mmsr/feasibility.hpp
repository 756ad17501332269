#pragma once

#include <vector>

#include "mmsr/instances.hpp"
#include "mmsr/model.hpp"
#include "mmsr/rng.hpp"
#include "mmsr/tabu.hpp"

namespace mmsr {

struct FeasibilityReport {
  int lambda_violations = 0;  // soft: windows of length lambda with >1 insert
  int fmax_excess = 0;        // skips beyond fmax
  int due_misses = 0;         // due pool vehicles left skipped
  int ready_violations = 0;   // targets before the being-ready bound

  bool hard_feasible() const {
    return fmax_excess == 0 && due_misses == 0 && ready_violations == 0;
  }
  bool operator==(const FeasibilityReport&) const = default;
};

// Earliest admissible reinsertion position (1-based). Current-horizon
// failures become ready r positions after their first-stage slot, capped at
// |T|; pool vehicles are ready at max(1, r), which can exceed |T| when no
// position admits them at all.
int ready_lower_bound(const FailedVehicle& failed, const std::vector<int>& pos_of,
                      int n_positions);

// Contract-checked variant; throws if the vehicle did not fail in `scenario`.
int ready_lower_bound(const Instance& instance, const Scenario& scenario,
                      const std::vector<int>& first_stage, int vehicle_id);

// True when inserting at both p and q would place two reinsertions inside
// one lambda window.
bool lambda_conflict(int p, int q, int lambda, int n_positions);

// Number of windows [t, t+lambda-1], t = 1..|T|-lambda+1, holding >= 2 targets.
int count_lambda_violations(const ReinsertionPlan& plan, int lambda, int n_positions);

FeasibilityReport check_plan(const ReinsertionPlan& plan,
                             const std::vector<FailedVehicle>& failed,
                             const std::vector<int>& pos_of, const Instance& instance);
FeasibilityReport check_plan(const ReinsertionPlan& plan, const Scenario& scenario,
                             const std::vector<int>& first_stage,
                             const Instance& instance);

// Uniform draw over positions in [lower_bound, |T|] that conflict with no
// other target of the plan; prefers positions the tabu memory allows.
// Returns 0 when no conflict-free position exists.
int sample_insert_target(Rng& rng, const ReinsertionPlan& plan, int self_idx,
                         int lower_bound, int n_positions, int lambda,
                         const TabuList* tabu, int vehicle_id);

// Best-effort repair: fixes ready violations, inserts due vehicles, converts
// excess skips (sacrificing lambda spacing when unavoidable), then tries to
// clear remaining lambda violations one move at a time.
ReinsertionPlan enhance(ReinsertionPlan plan, const std::vector<FailedVehicle>& failed,
                        const std::vector<int>& pos_of, const Instance& instance,
                        Rng& rng);

// Sum of lambda violations over all scenario plans; the soft-constraint
// degree used by constrained domination.
int violation_degree(const Solution& solution, const Instance& instance,
                     const ScenarioSample& sample);

}  // namespace mmsr
