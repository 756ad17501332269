#include "mmsr/feasibility.hpp"

#include <algorithm>
#include <stdexcept>

namespace mmsr {

int ready_lower_bound(const FailedVehicle& failed, const std::vector<int>& pos_of,
                      int n_positions) {
  if (failed.is_old) return std::max(1, failed.ready_offset);
  int t = pos_of[failed.vehicle_id];
  return std::min(n_positions, t + failed.ready_offset);
}

int ready_lower_bound(const Instance& instance, const Scenario& scenario,
                      const std::vector<int>& first_stage, int vehicle_id) {
  auto failed = failed_vehicles(instance, scenario);
  for (const auto& f : failed) {
    if (f.vehicle_id == vehicle_id)
      return ready_lower_bound(f, positions_of(first_stage), instance.num_positions());
  }
  throw std::invalid_argument("vehicle " + std::to_string(vehicle_id) +
                              " did not fail in this scenario");
}

bool lambda_conflict(int p, int q, int lambda, int n_positions) {
  if (n_positions < lambda) return false;  // no window exists
  return std::abs(p - q) <= lambda - 1;
}

int count_lambda_violations(const ReinsertionPlan& plan, int lambda, int n_positions) {
  std::vector<int> targets;
  for (int t : plan)
    if (t > 0) targets.push_back(t);
  if (targets.size() < 2) return 0;
  const int last_window = n_positions - lambda + 1;
  if (last_window < 1) return 0;
  std::sort(targets.begin(), targets.end());

  // Each close pair (gap <= lambda-1) contributes the window starts covering
  // both; the violated-window count is the size of the union of those ranges.
  std::vector<std::pair<int, int>> ranges;
  for (size_t i = 0; i < targets.size(); ++i) {
    for (size_t j = i + 1; j < targets.size(); ++j) {
      int gap = targets[j] - targets[i];
      if (gap > lambda - 1) break;
      int lo = std::max(1, targets[j] - lambda + 1);
      int hi = std::min(targets[i], last_window);
      if (lo <= hi) ranges.emplace_back(lo, hi);
    }
  }
  if (ranges.empty()) return 0;
  std::sort(ranges.begin(), ranges.end());
  int count = 0;
  int cur_lo = ranges[0].first, cur_hi = ranges[0].second;
  for (size_t i = 1; i < ranges.size(); ++i) {
    if (ranges[i].first > cur_hi + 1) {
      count += cur_hi - cur_lo + 1;
      cur_lo = ranges[i].first;
      cur_hi = ranges[i].second;
    } else {
      cur_hi = std::max(cur_hi, ranges[i].second);
    }
  }
  count += cur_hi - cur_lo + 1;
  return count;
}

FeasibilityReport check_plan(const ReinsertionPlan& plan,
                             const std::vector<FailedVehicle>& failed,
                             const std::vector<int>& pos_of, const Instance& inst) {
  FeasibilityReport rep;
  const int n = inst.num_positions();
  int skips = 0;
  for (size_t i = 0; i < plan.size(); ++i) {
    if (plan[i] == 0) {
      ++skips;
      if (failed[i].due) ++rep.due_misses;
    } else if (plan[i] < ready_lower_bound(failed[i], pos_of, n)) {
      ++rep.ready_violations;
    }
  }
  rep.fmax_excess = std::max(0, skips - inst.fmax);
  rep.lambda_violations = count_lambda_violations(plan, inst.lambda, n);
  return rep;
}

FeasibilityReport check_plan(const ReinsertionPlan& plan, const Scenario& scenario,
                             const std::vector<int>& first_stage,
                             const Instance& inst) {
  return check_plan(plan, failed_vehicles(inst, scenario), positions_of(first_stage),
                    inst);
}

int sample_insert_target(Rng& rng, const ReinsertionPlan& plan, int self_idx,
                         int lower_bound, int n_positions, int lambda,
                         const TabuList* tabu, int vehicle_id) {
  if (lower_bound > n_positions) return 0;
  std::vector<int> free_pos;
  std::vector<int> allowed_pos;
  for (int p = lower_bound; p <= n_positions; ++p) {
    bool ok = true;
    for (size_t j = 0; j < plan.size(); ++j) {
      if (static_cast<int>(j) == self_idx || plan[j] <= 0) continue;
      if (lambda_conflict(p, plan[j], lambda, n_positions)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    free_pos.push_back(p);
    if (tabu == nullptr || tabu->allows(vehicle_id, p)) allowed_pos.push_back(p);
  }
  const std::vector<int>& pool = allowed_pos.empty() ? free_pos : allowed_pos;
  if (pool.empty()) return 0;
  return pool[rng.below(pool.size())];
}

namespace {

int count_skips(const ReinsertionPlan& plan) {
  int skips = 0;
  for (int t : plan)
    if (t == 0) ++skips;
  return skips;
}

// Skipped vehicle ready at position p, preferring the earliest-ready one.
int pick_convertible(const ReinsertionPlan& plan,
                     const std::vector<FailedVehicle>& failed,
                     const std::vector<int>& bounds, int p) {
  int best = -1;
  for (size_t i = 0; i < plan.size(); ++i) {
    if (plan[i] != 0 || bounds[i] > p) continue;
    if (best < 0 || bounds[i] < bounds[best] ||
        (bounds[i] == bounds[best] && failed[i].vehicle_id < failed[best].vehicle_id))
      best = static_cast<int>(i);
  }
  return best;
}

bool position_lambda_free(const ReinsertionPlan& plan, int p, int lambda, int n) {
  for (int t : plan)
    if (t > 0 && lambda_conflict(p, t, lambda, n)) return false;
  return true;
}

}  // namespace

ReinsertionPlan enhance(ReinsertionPlan plan, const std::vector<FailedVehicle>& failed,
                        const std::vector<int>& pos_of, const Instance& inst,
                        Rng& rng) {
  const int n = inst.num_positions();
  const int lambda = inst.lambda;
  const int m = static_cast<int>(plan.size());
  std::vector<int> bounds(m);
  for (int i = 0; i < m; ++i) bounds[i] = ready_lower_bound(failed[i], pos_of, n);

  // Ready repair: resample early targets, give up only past the horizon.
  for (int i = 0; i < m; ++i) {
    if (plan[i] > 0 && plan[i] < bounds[i]) {
      if (bounds[i] > n) {
        plan[i] = 0;
      } else {
        int t = sample_insert_target(rng, plan, i, bounds[i], n, lambda, nullptr,
                                     failed[i].vehicle_id);
        plan[i] = t != 0 ? t : bounds[i] + static_cast<int>(rng.below(n - bounds[i] + 1));
      }
    }
  }

  // Due vehicles must be reinserted while any position admits them.
  for (int i = 0; i < m; ++i) {
    if (failed[i].due && plan[i] == 0 && bounds[i] <= n) {
      int t = sample_insert_target(rng, plan, i, bounds[i], n, lambda, nullptr,
                                   failed[i].vehicle_id);
      plan[i] = t != 0 ? t : bounds[i] + static_cast<int>(rng.below(n - bounds[i] + 1));
    }
  }

  // Convert excess skips left to right at spacing-respecting positions first,
  // then sacrifice the spacing rule if skips still exceed fmax.
  int excess = count_skips(plan) - inst.fmax;
  for (int p = 1; p <= n && excess > 0; ++p) {
    if (!position_lambda_free(plan, p, lambda, n)) continue;
    int i = pick_convertible(plan, failed, bounds, p);
    if (i >= 0) {
      plan[i] = p;
      --excess;
    }
  }
  while (excess > 0) {
    int i = pick_convertible(plan, failed, bounds, n);
    if (i < 0) break;  // the rest have no admissible position at all
    plan[i] = bounds[i];
    --excess;
  }

  // Lambda cleanup: first-improvement single-target moves that respect the
  // ready bounds; strictly decreasing violation count guarantees termination.
  int cur = count_lambda_violations(plan, lambda, n);
  while (cur > 0) {
    bool improved = false;
    std::vector<int> order;
    for (int i = 0; i < m; ++i)
      if (plan[i] > 0) order.push_back(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (plan[a] != plan[b]) return plan[a] < plan[b];
      return failed[a].vehicle_id < failed[b].vehicle_id;
    });
    for (int i : order) {
      int old = plan[i];
      for (int t = std::max(1, bounds[i]); t <= n; ++t) {
        if (t == old) continue;
        plan[i] = t;
        int cand = count_lambda_violations(plan, lambda, n);
        if (cand < cur) {
          cur = cand;
          improved = true;
          break;
        }
        plan[i] = old;
      }
      if (improved) break;
    }
    if (!improved) break;
  }

  return plan;
}

int violation_degree(const Solution& solution, const Instance& inst,
                     const ScenarioSample& sample) {
  int total = 0;
  for (size_t s = 0; s < sample.scenarios.size(); ++s)
    total += count_lambda_violations(solution.plans.at(s), inst.lambda,
                                     inst.num_positions());
  return total;
}

}  // namespace mmsr
