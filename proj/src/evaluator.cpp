#include "mmsr/evaluator.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

namespace mmsr {

std::pair<std::vector<tu_t>, tu_sum_t> station_overload(const std::vector<tu_t>& loads,
                                                        tu_t length, tu_t cycle) {
  if (length < cycle) throw std::invalid_argument("station length below cycle");
  for (tu_t b : loads)
    if (b < 0) throw std::invalid_argument("negative load");
  std::vector<tu_t> w(loads.size(), 0);
  tu_sum_t total = 0;
  tu_t z = 0;
  for (size_t t = 0; t < loads.size(); ++t) {
    tu_t zb = z + loads[t];
    if (t + 1 == loads.size()) {
      w[t] = std::max<tu_t>(0, zb - cycle);
    } else {
      w[t] = std::max<tu_t>(0, zb - length);
      z = std::max<tu_t>(0, zb - w[t] - cycle);
    }
    total += w[t];
  }
  return {std::move(w), total};
}

namespace {

struct PlannedInsert {
  int target = 0;
  int vehicle_id = 0;
};

// Shared construction: survivors in first-stage order, inserts anchored at
// post-deletion indices, skipped vehicles appended neutral in id order.
void build_final_rows(const std::vector<int>& first_stage,
                      const std::vector<FailedVehicle>& failed,
                      const std::vector<int>& pos_of, int n_positions,
                      const Scenario& scenario, const ReinsertionPlan& plan,
                      FinalSequence& seq, std::vector<int>* row_ids,
                      int neutral_row) {
  if (plan.size() != failed.size())
    throw std::invalid_argument("plan does not cover the scenario's failed vehicles");

  std::vector<PlannedInsert> inserts;
  std::vector<int> skipped;
  for (size_t i = 0; i < plan.size(); ++i) {
    if (plan[i] == 0) {
      skipped.push_back(failed[i].vehicle_id);
      continue;
    }
    if (plan[i] < 0 || plan[i] > n_positions)
      throw std::invalid_argument("reinsertion target out of range for vehicle " +
                                  std::to_string(failed[i].vehicle_id));
    int bound = ready_lower_bound(failed[i], pos_of, n_positions);
    if (plan[i] < bound)
      throw std::invalid_argument("plan violates being-ready bound for vehicle " +
                                  std::to_string(failed[i].vehicle_id));
    inserts.push_back({plan[i], failed[i].vehicle_id});
  }
  std::sort(inserts.begin(), inserts.end(), [](const auto& a, const auto& b) {
    if (a.target != b.target) return a.target < b.target;
    return a.vehicle_id < b.vehicle_id;
  });
  std::sort(skipped.begin(), skipped.end());

  seq.clear();
  if (row_ids != nullptr) row_ids->clear();
  auto push = [&](int vehicle_id, bool neutral) {
    seq.push_back({vehicle_id, neutral});
    if (row_ids != nullptr) row_ids->push_back(neutral ? neutral_row : vehicle_id);
  };

  size_t ins = 0;
  int survivor_idx = 0;
  for (int p = 0; p < n_positions; ++p) {
    int v = first_stage[p];
    if (!scenario.exists[v]) continue;
    ++survivor_idx;
    while (ins < inserts.size() && inserts[ins].target == survivor_idx)
      push(inserts[ins++].vehicle_id, false);
    push(v, false);
  }
  while (ins < inserts.size()) push(inserts[ins++].vehicle_id, false);
  for (int v : skipped) push(v, true);
}

}  // namespace

FinalSequence build_final_sequence(const std::vector<int>& first_stage,
                                   const Scenario& scenario,
                                   const ReinsertionPlan& plan,
                                   const Instance& inst) {
  FinalSequence seq;
  build_final_rows(first_stage, failed_vehicles(inst, scenario),
                   positions_of(first_stage), inst.num_positions(), scenario, plan,
                   seq, nullptr, -1);
  return seq;
}

EvalContext::EvalContext(const Instance& instance, const ScenarioSample& sample)
    : instance_(&instance), sample_(&sample), loads_(build_load_matrix(instance)) {
  failed_.reserve(sample.scenarios.size());
  for (const auto& sc : sample.scenarios) failed_.push_back(failed_vehicles(instance, sc));
}

void EvalContext::eval_scenario(const std::vector<int>& first_stage,
                                const std::vector<int>& pos_of, int scenario,
                                const ReinsertionPlan& plan, ScenarioCache& out,
                                const ScenarioCache* prev) const {
  const Scenario& sc = sample_->scenarios[scenario];
  const auto& failed = failed_[scenario];
  const int stride = loads_.stride;

  build_final_rows(first_stage, failed, pos_of, instance_->num_positions(), sc, plan,
                   out.seq, &out.row_ids, loads_.neutral_row);
  const int len = static_cast<int>(out.row_ids.size());

  int first = 0;
  if (prev != nullptr && static_cast<int>(prev->row_ids.size()) == len) {
    while (first < len && prev->row_ids[first] == out.row_ids[first]) ++first;
    // A matching prefix means identical recursion states up to `first`.
  } else {
    prev = nullptr;
  }

  out.z.resize(static_cast<size_t>(len + 1) * stride);
  out.w_pos.resize(len);
  if (prev != nullptr && first > 0) {
    std::memcpy(out.z.data(), prev->z.data(),
                sizeof(tu_t) * static_cast<size_t>(first + 1) * stride);
    std::memcpy(out.w_pos.data(), prev->w_pos.data(), sizeof(tu_t) * first);
  } else {
    first = 0;
    std::fill(out.z.begin(), out.z.begin() + stride, 0);
  }
  if (first == len && len > 0) {
    // Same rows end to end; the final row of z and all overloads carry over.
    std::memcpy(out.z.data(), prev->z.data(),
                sizeof(tu_t) * static_cast<size_t>(len + 1) * stride);
  } else {
    overload_kernel()(loads_, out.row_ids.data(), len, first, out.z.data(),
                      out.w_pos.data());
  }

  out.w_prefix.resize(len + 1);
  out.w_prefix[0] = 0;
  for (int t = 0; t < len; ++t) out.w_prefix[t + 1] = out.w_prefix[t] + out.w_pos[t];
  out.wo = out.w_prefix[len];

  out.re = 0;
  for (size_t i = 0; i < plan.size(); ++i) {
    if (plan[i] == 0) {
      std::int64_t days = failed[i].wait_days + 1;
      out.re += days * days;
    }
  }
  out.lambda_violations =
      count_lambda_violations(plan, instance_->lambda, instance_->num_positions());
}

ObjectivePoint evaluate(const EvalContext& ctx, Solution& solution) {
  if (static_cast<int>(solution.plans.size()) != ctx.n_scenarios())
    throw std::invalid_argument("solution does not cover every sampled scenario");
  auto pos_of = positions_of(solution.first_stage);
  ScenarioCache scratch;
  tu_sum_t wo = 0;
  std::int64_t re = 0;
  int vio = 0;
  for (int s = 0; s < ctx.n_scenarios(); ++s) {
    ctx.eval_scenario(solution.first_stage, pos_of, s, solution.plans[s], scratch,
                      nullptr);
    wo += scratch.wo;
    re += scratch.re;
    vio += scratch.lambda_violations;
  }
  solution.wo_total = wo;
  solution.re_total = re;
  solution.violation_degree = vio;
  solution.evaluated = true;
  return solution.objectives(ctx.n_scenarios());
}

ObjectivePoint evaluate(Solution& solution, const Instance& instance,
                        const ScenarioSample& sample) {
  EvalContext ctx(instance, sample);
  return evaluate(ctx, solution);
}

SearchState::SearchState(const EvalContext& ctx, Solution solution)
    : ctx_(&ctx), sol_(std::move(solution)) {
  pos_of_ = positions_of(sol_.first_stage);
  caches_.resize(ctx.n_scenarios());
  cand_caches_.resize(ctx.n_scenarios());
  tu_sum_t wo = 0;
  std::int64_t re = 0;
  int vio = 0;
  for (int s = 0; s < ctx.n_scenarios(); ++s) {
    ctx_->eval_scenario(sol_.first_stage, pos_of_, s, sol_.plans[s], caches_[s],
                        nullptr);
    wo += caches_[s].wo;
    re += caches_[s].re;
    vio += caches_[s].lambda_violations;
  }
  sol_.wo_total = wo;
  sol_.re_total = re;
  sol_.violation_degree = vio;
  sol_.evaluated = true;
}

ObjTriple SearchState::try_first_stage(std::vector<int> first_stage,
                                       std::vector<ReinsertionPlan> plans) {
  cand_first_ = std::move(first_stage);
  cand_plans_ = std::move(plans);
  cand_pos_of_ = positions_of(cand_first_);
  ObjTriple obj;
  for (int s = 0; s < ctx_->n_scenarios(); ++s) {
    ctx_->eval_scenario(cand_first_, cand_pos_of_, s, cand_plans_[s], cand_caches_[s],
                        &caches_[s]);
    obj.wo += cand_caches_[s].wo;
    obj.re += cand_caches_[s].re;
    obj.vio += cand_caches_[s].lambda_violations;
  }
  cand_first_obj_ = obj;
  pending_first_ = true;
  return obj;
}

void SearchState::commit_first_stage() {
  if (!pending_first_) throw std::logic_error("no pending first-stage candidate");
  sol_.first_stage.swap(cand_first_);
  sol_.plans.swap(cand_plans_);
  pos_of_.swap(cand_pos_of_);
  caches_.swap(cand_caches_);
  sol_.wo_total = cand_first_obj_.wo;
  sol_.re_total = cand_first_obj_.re;
  sol_.violation_degree = cand_first_obj_.vio;
  pending_first_ = false;
  pending_scenario_ = -1;
}

ObjTriple SearchState::try_plan(int scenario, ReinsertionPlan plan) {
  cand_plan_ = std::move(plan);
  ctx_->eval_scenario(sol_.first_stage, pos_of_, scenario, cand_plan_, cand_cache_,
                      &caches_[scenario]);
  ObjTriple obj{sol_.wo_total - caches_[scenario].wo + cand_cache_.wo,
                sol_.re_total - caches_[scenario].re + cand_cache_.re,
                sol_.violation_degree - caches_[scenario].lambda_violations +
                    cand_cache_.lambda_violations};
  cand_plan_obj_ = obj;
  pending_scenario_ = scenario;
  return obj;
}

void SearchState::commit_plan(int scenario) {
  if (pending_scenario_ != scenario)
    throw std::logic_error("no pending candidate for this scenario");
  sol_.plans[scenario].swap(cand_plan_);
  std::swap(caches_[scenario], cand_cache_);
  sol_.wo_total = cand_plan_obj_.wo;
  sol_.re_total = cand_plan_obj_.re;
  sol_.violation_degree = cand_plan_obj_.vio;
  pending_scenario_ = -1;
}

void SearchState::reevaluate() {
  pending_first_ = false;
  pending_scenario_ = -1;
  tu_sum_t wo = 0;
  std::int64_t re = 0;
  int vio = 0;
  for (int s = 0; s < ctx_->n_scenarios(); ++s) {
    ctx_->eval_scenario(sol_.first_stage, pos_of_, s, sol_.plans[s], caches_[s],
                        nullptr);
    wo += caches_[s].wo;
    re += caches_[s].re;
    vio += caches_[s].lambda_violations;
  }
  sol_.wo_total = wo;
  sol_.re_total = re;
  sol_.violation_degree = vio;
}

}  // namespace mmsr
