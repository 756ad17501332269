#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mmsr/archive.hpp"
#include "mmsr/evaluator.hpp"
#include "mmsr/rng.hpp"
#include "mmsr/tabu.hpp"

namespace mmsr {

enum class SeqOp { kSwap, kInsertForward, kInsertBackward, kInversion };

// Positions are 1-based. Forward insertion requires i < j, backward i > j;
// inversion reverses [min(i,j), max(i,j)].
std::vector<int> apply_operator(const std::vector<int>& seq, SeqOp op, int i, int j);

struct OperatorWeights {
  double swap = 0.35;
  double insert_forward = 0.25;
  double insert_backward = 0.25;
  double inversion = 0.15;
};

// Either a wall-clock allowance or a count of elementary local-search moves
// and evaluations. Iteration budgets make runs reproducible.
struct Budget {
  enum class Kind { kIterations, kSeconds };
  Kind kind = Kind::kIterations;
  std::uint64_t iterations = 0;
  double seconds = 0.0;

  static Budget iters(std::uint64_t n) { return {Kind::kIterations, n, 0.0}; }
  static Budget secs(double s) { return {Kind::kSeconds, 0, s}; }
  static std::optional<Budget> parse(const std::string& text);  // "600s" | "2000it"
  std::string str() const;
  Budget scaled(double fraction) const;
};

class BudgetClock {
 public:
  explicit BudgetClock(const Budget& budget)
      : budget_(budget), start_(std::chrono::steady_clock::now()) {}

  bool exhausted() const {
    if (budget_.kind == Budget::Kind::kIterations) return spent_ >= budget_.iterations;
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
               .count() >= budget_.seconds;
  }
  void spend(std::uint64_t units = 1) { spent_ += units; }
  std::uint64_t spent() const { return spent_; }

 private:
  Budget budget_;
  std::uint64_t spent_ = 0;
  std::chrono::steady_clock::time_point start_;
};

struct StmlsConfig {
  std::uint64_t theta = 10;
  Budget tau_f = Budget::iters(100);
  Budget tau_s = Budget::iters(20);
  Budget budget = Budget::iters(10000);
  OperatorWeights weights;
  std::uint64_t seed = 0;
};

// Work-overload-greedy constructor: random first pick, then repeatedly the
// vehicle adding the least marginal overload, idle time breaking ties.
std::vector<int> naive_greedy(const Instance& instance, Rng& rng);

// Deterministic spreading constructor: vehicles ranked by peak station
// utilization, laid out by bit-reversed rank so heavy and light interleave.
std::vector<int> utilization_greedy(const Instance& instance);

bool tabu_allows(const TabuList& history, int vehicle, int position);

// Local search over first-stage sequences; accepts moves that do not worsen
// work overload. Plans are repaired when a move breaks a ready bound.
void improve_first_stage(SearchState& state, BudgetClock& global, BudgetClock& local,
                         const OperatorWeights& weights, std::vector<TabuList>& tabu,
                         Rng& rng);

// Local search over one scenario's reinsertion targets (swap or move; no
// inversion); accepts when work overload does not worsen.
void improve_second_stage(SearchState& state, int scenario, BudgetClock& global,
                          BudgetClock& local, std::vector<TabuList>& tabu, Rng& rng);

// Builds all-insert plans for every scenario and repairs them.
std::vector<ReinsertionPlan> initial_plans_all_insert(const EvalContext& ctx,
                                                      const std::vector<int>& first_stage,
                                                      Rng& rng);
std::vector<ReinsertionPlan> initial_plans_all_skip(const EvalContext& ctx,
                                                    const std::vector<int>& first_stage,
                                                    Rng& rng);
std::vector<ReinsertionPlan> initial_plans_random(const EvalContext& ctx,
                                                  const std::vector<int>& first_stage,
                                                  Rng& rng);

// Two-stage local search: alternates first-stage improvement with periodic
// binary-decision perturbations followed by second-stage improvement, and
// archives non-dominated feasible incumbents.
ParetoArchive stmls(const EvalContext& ctx, const StmlsConfig& config);
ParetoArchive stmls(const Instance& instance, const ScenarioSample& sample,
                    const StmlsConfig& config);

// Single-objective baselines sharing the same machinery: `solve_one_scenario`
// optimizes the failure-free deterministic problem, `solve_full_failures`
// optimizes over the sample with reinsertion disabled (all plans skip).
ParetoArchive solve_one_scenario(const Instance& instance, const StmlsConfig& config);
ParetoArchive solve_full_failures(const EvalContext& ctx, const StmlsConfig& config);

}  // namespace mmsr
