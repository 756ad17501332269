#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mmsr/feasibility.hpp"
#include "mmsr/instances.hpp"
#include "mmsr/kernels.hpp"
#include "mmsr/model.hpp"

namespace mmsr {

// Overload recursion for one station. Returns the per-position overloads and
// their sum; the last position uses the regenerative rule w = max(0, z+b-c).
std::pair<std::vector<tu_t>, tu_sum_t> station_overload(const std::vector<tu_t>& loads,
                                                        tu_t length, tu_t cycle);

// Applies a reinsertion plan to a first-stage sequence under a scenario:
// failed vehicles are deleted, each insert goes in front of the survivor at
// the post-deletion index it names (appended when past the end), and skipped
// vehicles trail as neutral entries in id order.
FinalSequence build_final_sequence(const std::vector<int>& first_stage,
                                   const Scenario& scenario,
                                   const ReinsertionPlan& plan,
                                   const Instance& instance);

struct ObjTriple {
  tu_sum_t wo = 0;       // tenths of a TU, summed over scenarios
  std::int64_t re = 0;   // summed over scenarios
  int vio = 0;           // lambda violations, summed over scenarios

  bool operator==(const ObjTriple&) const = default;
};

// Per-scenario evaluation state kept alongside a solution so local moves can
// restart the recursion at the first changed position.
struct ScenarioCache {
  FinalSequence seq;
  std::vector<int> row_ids;        // per position, rows of the load matrix
  std::vector<tu_t> z;             // (len+1) * stride operator start states
  std::vector<tu_t> w_pos;         // per-position overload across stations
  std::vector<tu_sum_t> w_prefix;  // w_prefix[t] = sum of w_pos[0..t)
  tu_sum_t wo = 0;
  std::int64_t re = 0;
  int lambda_violations = 0;
};

// Immutable per-(instance, sample) precomputation shared by every evaluation.
class EvalContext {
 public:
  EvalContext(const Instance& instance, const ScenarioSample& sample);

  const Instance& instance() const { return *instance_; }
  const ScenarioSample& sample() const { return *sample_; }
  const LoadMatrix& loads() const { return loads_; }
  int n_scenarios() const { return static_cast<int>(sample_->scenarios.size()); }
  const std::vector<FailedVehicle>& failed(int scenario) const {
    return failed_[scenario];
  }

  // Recomputes `out` for one scenario. When `prev` matches the same scenario
  // under some other (first_stage, plan), the recursion restarts at the first
  // position whose load row differs; results are identical to a cold start.
  void eval_scenario(const std::vector<int>& first_stage,
                     const std::vector<int>& pos_of, int scenario,
                     const ReinsertionPlan& plan, ScenarioCache& out,
                     const ScenarioCache* prev) const;

 private:
  const Instance* instance_;
  const ScenarioSample* sample_;
  LoadMatrix loads_;
  std::vector<std::vector<FailedVehicle>> failed_;
};

// Evaluates and caches both objectives on the solution. Scenario terms are
// reduced in index order regardless of any outer parallelism.
ObjectivePoint evaluate(const EvalContext& ctx, Solution& solution);
ObjectivePoint evaluate(Solution& solution, const Instance& instance,
                        const ScenarioSample& sample);

// A solution plus its evaluation caches, with candidate-move evaluation that
// reuses unchanged prefixes. try_* never mutates the committed state.
class SearchState {
 public:
  SearchState(const EvalContext& ctx, Solution solution);

  SearchState(SearchState&&) = default;
  SearchState& operator=(SearchState&&) = default;

  const EvalContext& context() const { return *ctx_; }
  const Solution& solution() const { return sol_; }
  const std::vector<int>& pos_of() const { return pos_of_; }
  const ScenarioCache& cache(int scenario) const { return caches_[scenario]; }
  ObjTriple objectives() const { return {sol_.wo_total, sol_.re_total, sol_.violation_degree}; }

  // Candidate with a new first stage; plans must already respect the ready
  // bounds implied by it. Returns the candidate objective triple.
  ObjTriple try_first_stage(std::vector<int> first_stage,
                            std::vector<ReinsertionPlan> plans);
  void commit_first_stage();

  // Candidate plan replacement for one scenario.
  ObjTriple try_plan(int scenario, ReinsertionPlan plan);
  void commit_plan(int scenario);

  // Cold full evaluation; used to cross-check the incremental path.
  void reevaluate();

 private:
  const EvalContext* ctx_;
  Solution sol_;
  std::vector<int> pos_of_;
  std::vector<ScenarioCache> caches_;

  // pending first-stage candidate
  bool pending_first_ = false;
  std::vector<int> cand_first_;
  std::vector<int> cand_pos_of_;
  std::vector<ReinsertionPlan> cand_plans_;
  std::vector<ScenarioCache> cand_caches_;
  ObjTriple cand_first_obj_;

  // pending single-scenario candidate
  int pending_scenario_ = -1;
  ReinsertionPlan cand_plan_;
  ScenarioCache cand_cache_;
  ObjTriple cand_plan_obj_;
};

}  // namespace mmsr
