#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mmsr/archive.hpp"
#include "mmsr/evaluator.hpp"
#include "mmsr/rng.hpp"
#include "mmsr/search.hpp"

namespace mmsr {

struct EaConfig {
  int population = 40;  // even, >= 4
  double mutation_prob = 0.1;
  Budget tau_s = Budget::iters(20);      // per-child second-stage improvement
  Budget budget = Budget::iters(10000);  // counted in child evaluations
  std::uint64_t seed = 0;
};

// Keeps parent1's prefix up to `cut`, then parent2's remaining genes in
// parent2 order.
std::vector<int> pmx_single_point(const std::vector<int>& parent1,
                                  const std::vector<int>& parent2, int cut);

// Binary decisions inherited gene-wise (fair coin on disagreement); every
// inherited insert gets a freshly sampled feasible target, never a parent's.
ReinsertionPlan uniform_reinsertion_crossover(const ReinsertionPlan& parent1,
                                              const ReinsertionPlan& parent2,
                                              const std::vector<FailedVehicle>& failed,
                                              const std::vector<int>& pos_of,
                                              const Instance& instance, TabuList* tabu,
                                              Rng& rng);

// Inversion of a random subsequence (endpoints always distinct).
void mutate_first_stage(std::vector<int>& seq, Rng& rng);

// With probability `prob`, flips one random gene of one random scenario
// (skip to a feasible insert, or insert to skip) and re-repairs that plan.
// Returns true when a gene changed.
bool mutate_second_stage(Solution& solution, const EvalContext& ctx, double prob,
                         Rng& rng);

// Feasible beats infeasible; lower violation degree beats higher; ties fall
// back to Pareto dominance (<= both objectives, < in at least one).
bool constrained_dominates(const ObjTriple& a, const ObjTriple& b);

// Front partition under constrained domination; front 0 holds the maximal
// elements.
std::vector<std::vector<int>> fast_nondominated_sort(const std::vector<ObjTriple>& points);

// Boundary points get infinity; interior points accumulate range-normalized
// neighbor gaps per objective (a zero-range objective contributes nothing).
std::vector<double> crowding_distance(const std::vector<std::pair<double, double>>& front);

ParetoArchive nsga2(const EvalContext& ctx, const EaConfig& config);
ParetoArchive nsga2(const Instance& instance, const ScenarioSample& sample,
                    const EaConfig& config);

ParetoArchive ls_nsga2(const EvalContext& ctx, const EaConfig& config);
ParetoArchive ls_nsga2(const Instance& instance, const ScenarioSample& sample,
                       const EaConfig& config);

// Inserts a feasible candidate into the external population, dropping newly
// dominated members; duplicates of an archived objective pair are kept once.
void update_external_population(ParetoArchive& ep, const Solution& solution,
                                const ObjTriple& objectives);

}  // namespace mmsr
