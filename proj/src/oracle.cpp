#include "mmsr/oracle.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mmsr/evaluator.hpp"
#include "mmsr/feasibility.hpp"

namespace mmsr {

tu_sum_t reference_overload(const std::vector<tu_t>& loads, tu_t length, tu_t cycle) {
  if (loads.size() > 6) throw std::invalid_argument("reference limited to 6 positions");
  if (length < cycle) throw std::invalid_argument("station length below cycle");
  const int d = length - cycle;
  if (d > 200000) throw std::invalid_argument("station length resolution bound exceeded");
  for (tu_t b : loads)
    if (b < 0) throw std::invalid_argument("negative load");
  if (loads.empty()) return 0;

  constexpr tu_sum_t kInf = std::numeric_limits<tu_sum_t>::max() / 4;
  const int len = static_cast<int>(loads.size());

  // f[z] = minimal overload of the suffix entering with operator state z.
  std::vector<tu_sum_t> f(d + 1), g(d + 1);
  for (int z = 0; z <= d; ++z)
    f[z] = std::max<tu_sum_t>(0, static_cast<tu_sum_t>(z) + loads[len - 1] - cycle);

  std::vector<tu_sum_t> suffix_min(d + 2), shifted_prefix_min(d + 1);
  for (int t = len - 2; t >= 0; --t) {
    const tu_t b = loads[t];
    suffix_min[d + 1] = kInf;
    for (int z = d; z >= 0; --z) suffix_min[z] = std::min(suffix_min[z + 1], f[z]);
    shifted_prefix_min[0] = f[0];
    for (int z = 1; z <= d; ++z)
      shifted_prefix_min[z] = std::min(shifted_prefix_min[z - 1], f[z] - z);

    for (int z = 0; z <= d; ++z) {
      const tu_sum_t zb = static_cast<tu_sum_t>(z) + b;
      const tu_sum_t w_min = std::max<tu_sum_t>(0, zb - length);
      // Successor states z' >= k leave w at its floor; below k the balance
      // constraint forces w = z + b - c - z'.
      const tu_sum_t k = zb - cycle - w_min;
      tu_sum_t best = kInf;
      const int lo = static_cast<int>(std::max<tu_sum_t>(0, k));
      if (lo <= d) best = w_min + suffix_min[lo];
      const int hi = static_cast<int>(std::min<tu_sum_t>(k - 1, d));
      if (hi >= 0) best = std::min(best, (zb - cycle) + shifted_prefix_min[hi]);
      g[z] = best;
    }
    f.swap(g);
  }
  return f[0];
}

namespace {

struct ScenPoint {
  tu_sum_t wo = 0;
  std::int64_t re = 0;
  ReinsertionPlan plan;
};

struct AccPoint {
  tu_sum_t wo = 0;
  std::int64_t re = 0;
  std::vector<ReinsertionPlan> plans;
};

template <typename T>
void pareto_prune(std::vector<T>& pts) {
  std::sort(pts.begin(), pts.end(), [](const T& a, const T& b) {
    if (a.wo != b.wo) return a.wo < b.wo;
    return a.re < b.re;
  });
  std::vector<T> kept;
  std::int64_t best_re = std::numeric_limits<std::int64_t>::max();
  for (auto& p : pts) {
    if (p.re < best_re) {
      best_re = p.re;
      kept.push_back(std::move(p));
    }
  }
  pts = std::move(kept);
}

class PlanEnumerator {
 public:
  PlanEnumerator(const Instance& inst, const Scenario& scenario,
                 const std::vector<FailedVehicle>& failed)
      : inst_(inst), scenario_(scenario), failed_(failed) {}

  std::vector<ScenPoint> enumerate(const std::vector<int>& first_stage,
                                   const std::vector<int>& pos_of) {
    points_.clear();
    first_stage_ = &first_stage;
    bounds_.resize(failed_.size());
    for (size_t i = 0; i < failed_.size(); ++i)
      bounds_[i] = ready_lower_bound(failed_[i], pos_of, inst_.num_positions());
    plan_.assign(failed_.size(), 0);
    recurse(0, 0);
    pareto_prune(points_);
    return points_;
  }

 private:
  void recurse(size_t i, int skips) {
    if (i == failed_.size()) {
      if (skips > inst_.fmax) return;
      emit();
      return;
    }
    if (!failed_[i].due && skips + 1 <= inst_.fmax) {
      plan_[i] = 0;
      recurse(i + 1, skips + 1);
    }
    for (int t = bounds_[i]; t <= inst_.num_positions(); ++t) {
      bool free_slot = true;
      for (size_t j = 0; j < i; ++j) {
        if (plan_[j] > 0 &&
            lambda_conflict(t, plan_[j], inst_.lambda, inst_.num_positions())) {
          free_slot = false;
          break;
        }
      }
      if (!free_slot) continue;
      plan_[i] = t;
      recurse(i + 1, skips);
    }
    plan_[i] = 0;
  }

  void emit() {
    FinalSequence seq = build_final_sequence(*first_stage_, scenario_, plan_, inst_);
    tu_sum_t wo = 0;
    std::vector<tu_t> loads(seq.size());
    for (int k = 0; k < inst_.num_stations(); ++k) {
      for (size_t t = 0; t < seq.size(); ++t)
        loads[t] = seq[t].neutral ? inst_.cycle : processing_of(seq[t].vehicle_id, k);
      wo += station_overload(loads, inst_.stations[k].length, inst_.cycle).second;
    }
    std::int64_t re = 0;
    for (size_t i = 0; i < plan_.size(); ++i) {
      if (plan_[i] == 0) {
        std::int64_t days = failed_[i].wait_days + 1;
        re += days * days;
      }
    }
    points_.push_back({wo, re, plan_});
  }

  tu_t processing_of(int vehicle_id, int station) const {
    if (vehicle_id < inst_.num_positions())
      return inst_.vehicles[vehicle_id].processing[station];
    for (const auto& o : inst_.old_pool)
      if (o.vehicle.id == vehicle_id) return o.vehicle.processing[station];
    throw std::logic_error("unknown vehicle id in final sequence");
  }

  const Instance& inst_;
  const Scenario& scenario_;
  const std::vector<FailedVehicle>& failed_;
  const std::vector<int>* first_stage_ = nullptr;
  std::vector<int> bounds_;
  ReinsertionPlan plan_;
  std::vector<ScenPoint> points_;
};

}  // namespace

ParetoArchive enumerate_pareto(const Instance& inst, const ScenarioSample& sample) {
  const int n = inst.num_positions();
  if (n > 7) throw std::invalid_argument("exact enumeration limited to 7 vehicles");
  if (sample.size() > 8) throw std::invalid_argument("exact enumeration limited to 8 scenarios");
  std::vector<std::vector<FailedVehicle>> failed;
  for (const auto& sc : sample.scenarios) {
    failed.push_back(failed_vehicles(inst, sc));
    if (failed.back().size() > 3)
      throw std::invalid_argument("exact enumeration limited to 3 failed vehicles per scenario");
  }

  ParetoArchive archive;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    auto pos_of = positions_of(perm);
    std::vector<AccPoint> acc(1);
    bool dead_end = false;
    for (int s = 0; s < sample.size() && !dead_end; ++s) {
      PlanEnumerator en(inst, sample.scenarios[s], failed[s]);
      auto pts = en.enumerate(perm, pos_of);
      if (pts.empty()) {
        dead_end = true;  // a scenario admits no hard-feasible plan
        break;
      }
      std::vector<AccPoint> next;
      next.reserve(acc.size() * pts.size());
      for (const auto& a : acc) {
        for (const auto& q : pts) {
          AccPoint merged{a.wo + q.wo, a.re + q.re, a.plans};
          merged.plans.push_back(q.plan);
          next.push_back(std::move(merged));
        }
      }
      pareto_prune(next);
      acc = std::move(next);
    }
    if (dead_end) continue;
    for (auto& p : acc) {
      Solution sol;
      sol.first_stage = perm;
      sol.plans = std::move(p.plans);
      sol.wo_total = p.wo;
      sol.re_total = p.re;
      sol.violation_degree = 0;
      sol.evaluated = true;
      archive.update(p.wo, p.re, sol);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return archive;
}

}  // namespace mmsr
