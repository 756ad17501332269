#include "mmsr/search.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace mmsr {

std::vector<int> apply_operator(const std::vector<int>& seq, SeqOp op, int i, int j) {
  const int n = static_cast<int>(seq.size());
  if (i < 1 || j < 1 || i > n || j > n || i == j)
    throw std::invalid_argument("operator positions out of range");
  if (op == SeqOp::kInsertForward && i >= j)
    throw std::invalid_argument("forward insertion requires i < j");
  if (op == SeqOp::kInsertBackward && i <= j)
    throw std::invalid_argument("backward insertion requires i > j");

  std::vector<int> out = seq;
  switch (op) {
    case SeqOp::kSwap:
      std::swap(out[i - 1], out[j - 1]);
      break;
    case SeqOp::kInsertForward: {
      int v = out[i - 1];
      for (int p = i; p < j; ++p) out[p - 1] = out[p];
      out[j - 1] = v;
      break;
    }
    case SeqOp::kInsertBackward: {
      int v = out[i - 1];
      for (int p = i; p > j; --p) out[p - 1] = out[p - 2];
      out[j - 1] = v;
      break;
    }
    case SeqOp::kInversion:
      std::reverse(out.begin() + std::min(i, j) - 1, out.begin() + std::max(i, j));
      break;
  }
  return out;
}

std::optional<Budget> Budget::parse(const std::string& text) {
  if (text.size() < 2) return std::nullopt;
  if (text.ends_with("it")) {
    char* end = nullptr;
    unsigned long long n = std::strtoull(text.c_str(), &end, 10);
    if (end != text.c_str() + text.size() - 2) return std::nullopt;
    return Budget::iters(n);
  }
  if (text.ends_with("s")) {
    char* end = nullptr;
    double s = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() - 1 || s < 0) return std::nullopt;
    return Budget::secs(s);
  }
  return std::nullopt;
}

std::string Budget::str() const {
  char buf[48];
  if (kind == Kind::kIterations) {
    std::snprintf(buf, sizeof(buf), "%lluit", static_cast<unsigned long long>(iterations));
  } else {
    std::snprintf(buf, sizeof(buf), "%gs", seconds);
  }
  return buf;
}

Budget Budget::scaled(double fraction) const {
  if (kind == Kind::kIterations) {
    auto n = static_cast<std::uint64_t>(static_cast<double>(iterations) * fraction);
    return Budget::iters(std::max<std::uint64_t>(1, n));
  }
  return Budget::secs(seconds * fraction);
}

std::vector<int> naive_greedy(const Instance& inst, Rng& rng) {
  const int n = inst.num_positions();
  const int k = inst.num_stations();
  std::vector<int> remaining(n);
  std::iota(remaining.begin(), remaining.end(), 0);
  std::vector<tu_t> z(k, 0);
  std::vector<int> seq;
  seq.reserve(n);

  auto take = [&](size_t idx) {
    int v = remaining[idx];
    remaining.erase(remaining.begin() + idx);
    for (int s = 0; s < k; ++s) {
      tu_t zb = z[s] + inst.vehicles[v].processing[s];
      tu_t w = std::max<tu_t>(0, zb - inst.stations[s].length);
      z[s] = std::max<tu_t>(0, zb - w - inst.cycle);
    }
    seq.push_back(v);
  };

  if (n == 0) return seq;
  take(rng.below(remaining.size()));
  std::vector<size_t> best;
  while (!remaining.empty()) {
    tu_sum_t best_over = -1;
    best.clear();
    for (size_t idx = 0; idx < remaining.size(); ++idx) {
      const auto& p = inst.vehicles[remaining[idx]].processing;
      tu_sum_t over = 0;
      for (int s = 0; s < k; ++s)
        over += std::max<tu_t>(0, z[s] + p[s] - inst.stations[s].length);
      if (best_over < 0 || over < best_over) {
        best_over = over;
        best.clear();
        best.push_back(idx);
      } else if (over == best_over) {
        best.push_back(idx);
      }
    }
    if (best.size() > 1) {
      tu_sum_t best_idle = -1;
      std::vector<size_t> keep;
      for (size_t idx : best) {
        const auto& p = inst.vehicles[remaining[idx]].processing;
        tu_sum_t idle = 0;
        for (int s = 0; s < k; ++s)
          idle += std::max<tu_t>(0, inst.cycle - (z[s] + p[s]));
        if (best_idle < 0 || idle < best_idle) {
          best_idle = idle;
          keep.clear();
          keep.push_back(idx);
        } else if (idle == best_idle) {
          keep.push_back(idx);
        }
      }
      best.swap(keep);
    }
    take(best[rng.below(best.size())]);
  }
  return seq;
}

namespace {

std::uint32_t bit_reverse(std::uint32_t v, int bits) {
  std::uint32_t out = 0;
  for (int b = 0; b < bits; ++b) {
    out = (out << 1) | (v & 1);
    v >>= 1;
  }
  return out;
}

}  // namespace

std::vector<int> utilization_greedy(const Instance& inst) {
  const int n = inst.num_positions();
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  std::vector<tu_t> peak(n, 0);
  for (int v = 0; v < n; ++v)
    for (tu_t p : inst.vehicles[v].processing) peak[v] = std::max(peak[v], p);
  std::sort(ids.begin(), ids.end(), [&](int a, int b) {
    if (peak[a] != peak[b]) return peak[a] > peak[b];
    return a < b;
  });

  int bits = 0;
  while ((1 << bits) < n) ++bits;
  std::vector<std::pair<std::uint32_t, int>> keyed(n);
  for (int rank = 0; rank < n; ++rank)
    keyed[rank] = {bit_reverse(static_cast<std::uint32_t>(rank), bits), rank};
  std::sort(keyed.begin(), keyed.end());
  std::vector<int> perm(n);
  for (int p = 0; p < n; ++p) perm[p] = ids[keyed[p].second];
  return perm;
}

bool tabu_allows(const TabuList& history, int vehicle, int position) {
  return history.allows(vehicle, position);
}

namespace {

SeqOp draw_operator(const OperatorWeights& w, Rng& rng) {
  double total = w.swap + w.insert_forward + w.insert_backward + w.inversion;
  double u = rng.uniform01() * total;
  if ((u -= w.swap) < 0) return SeqOp::kSwap;
  if ((u -= w.insert_forward) < 0) return SeqOp::kInsertForward;
  if ((u -= w.insert_backward) < 0) return SeqOp::kInsertBackward;
  return SeqOp::kInversion;
}

}  // namespace

void improve_first_stage(SearchState& state, BudgetClock& global, BudgetClock& local,
                         const OperatorWeights& weights, std::vector<TabuList>& tabu,
                         Rng& rng) {
  const EvalContext& ctx = state.context();
  const Instance& inst = ctx.instance();
  const int n = inst.num_positions();
  if (n < 2) return;

  while (!global.exhausted() && !local.exhausted()) {
    global.spend(1);
    local.spend(1);

    SeqOp op = draw_operator(weights, rng);
    int a = 1 + static_cast<int>(rng.below(n));
    int b = 1 + static_cast<int>(rng.below(n - 1));
    if (b >= a) ++b;
    int i = a, j = b;
    if (op == SeqOp::kInsertForward) {
      i = std::min(a, b);
      j = std::max(a, b);
    } else if (op == SeqOp::kInsertBackward) {
      i = std::max(a, b);
      j = std::min(a, b);
    }

    std::vector<int> cand_first = apply_operator(state.solution().first_stage, op, i, j);
    std::vector<int> cand_pos = positions_of(cand_first);
    std::vector<ReinsertionPlan> plans = state.solution().plans;
    // Binary decisions stay fixed; only targets that fell below their new
    // ready bound are resampled.
    std::vector<std::tuple<int, int, int>> resampled;
    for (int s = 0; s < ctx.n_scenarios(); ++s) {
      const auto& failed = ctx.failed(s);
      for (size_t fi = 0; fi < failed.size(); ++fi) {
        if (failed[fi].is_old || plans[s][fi] == 0) continue;
        int bound = std::min(n, cand_pos[failed[fi].vehicle_id] + failed[fi].ready_offset);
        if (plans[s][fi] >= bound) continue;
        int t = sample_insert_target(rng, plans[s], static_cast<int>(fi), bound, n,
                                     inst.lambda, &tabu[s], failed[fi].vehicle_id);
        if (t == 0) t = bound + static_cast<int>(rng.below(n - bound + 1));
        plans[s][fi] = t;
        resampled.emplace_back(s, failed[fi].vehicle_id, t);
      }
    }

    ObjTriple cand = state.try_first_stage(std::move(cand_first), std::move(plans));
    if (cand.wo <= state.solution().wo_total) {
      state.commit_first_stage();
    } else {
      for (const auto& [s, v, t] : resampled) tabu[s].reject(v, t);
    }
  }
}

void improve_second_stage(SearchState& state, int scenario, BudgetClock& global,
                          BudgetClock& local, std::vector<TabuList>& tabu, Rng& rng) {
  const EvalContext& ctx = state.context();
  const Instance& inst = ctx.instance();
  const int n = inst.num_positions();
  const auto& failed = ctx.failed(scenario);

  while (!global.exhausted() && !local.exhausted()) {
    const ReinsertionPlan& cur = state.solution().plans[scenario];
    std::vector<int> inserted;
    for (size_t i = 0; i < cur.size(); ++i)
      if (cur[i] > 0) inserted.push_back(static_cast<int>(i));
    if (inserted.empty()) return;

    global.spend(1);
    local.spend(1);

    ReinsertionPlan plan = cur;
    std::vector<std::pair<int, int>> touched;  // (vehicle, target) for tabu
    bool usable = false;
    if (inserted.size() >= 2 && rng.bernoulli(0.5)) {
      size_t ia = rng.below(inserted.size());
      size_t ib = rng.below(inserted.size() - 1);
      if (ib >= ia) ++ib;
      int a = inserted[ia], b = inserted[ib];
      int bound_a = ready_lower_bound(failed[a], state.pos_of(), n);
      int bound_b = ready_lower_bound(failed[b], state.pos_of(), n);
      if (plan[b] >= bound_a && plan[a] >= bound_b) {
        std::swap(plan[a], plan[b]);
        touched.emplace_back(failed[a].vehicle_id, plan[a]);
        touched.emplace_back(failed[b].vehicle_id, plan[b]);
        usable = true;
      }
    } else {
      int a = inserted[rng.below(inserted.size())];
      int bound = ready_lower_bound(failed[a], state.pos_of(), n);
      int t = sample_insert_target(rng, plan, a, bound, n, inst.lambda, &tabu[scenario],
                                   failed[a].vehicle_id);
      if (t != 0 && t != plan[a]) {
        plan[a] = t;
        touched.emplace_back(failed[a].vehicle_id, t);
        usable = true;
      }
    }
    if (!usable) continue;

    ObjTriple cand = state.try_plan(scenario, std::move(plan));
    if (cand.wo <= state.solution().wo_total) {
      state.commit_plan(scenario);
    } else {
      for (const auto& [v, t] : touched) tabu[scenario].reject(v, t);
    }
  }
}

namespace {

ReinsertionPlan make_plan(const EvalContext& ctx, int scenario,
                          const std::vector<int>& pos_of, int mode, Rng& rng) {
  const auto& failed = ctx.failed(scenario);
  const Instance& inst = ctx.instance();
  const int n = inst.num_positions();
  ReinsertionPlan plan(failed.size(), 0);
  for (size_t i = 0; i < failed.size(); ++i) {
    bool insert = mode == 1 || (mode == 2 && rng.bernoulli(0.5));
    if (!insert) continue;
    int bound = ready_lower_bound(failed[i], pos_of, n);
    plan[i] = sample_insert_target(rng, plan, static_cast<int>(i), bound, n,
                                   inst.lambda, nullptr, failed[i].vehicle_id);
  }
  return enhance(std::move(plan), failed, pos_of, inst, rng);
}

std::vector<ReinsertionPlan> make_plans(const EvalContext& ctx,
                                        const std::vector<int>& first_stage, int mode,
                                        Rng& rng) {
  auto pos_of = positions_of(first_stage);
  std::vector<ReinsertionPlan> plans;
  plans.reserve(ctx.n_scenarios());
  for (int s = 0; s < ctx.n_scenarios(); ++s)
    plans.push_back(make_plan(ctx, s, pos_of, mode, rng));
  return plans;
}

void flip_binary_decision(SearchState& state, int scenario, BudgetClock& global,
                          TabuList& tabu, Rng& rng) {
  const EvalContext& ctx = state.context();
  const Instance& inst = ctx.instance();
  const auto& failed = ctx.failed(scenario);
  if (failed.empty()) return;
  const int n = inst.num_positions();
  ReinsertionPlan plan = state.solution().plans[scenario];
  int skips = 0;
  for (int t : plan)
    if (t == 0) ++skips;
  std::vector<int> flippable;
  for (size_t i = 0; i < plan.size(); ++i) {
    if (plan[i] > 0) {
      if (!failed[i].due && skips + 1 <= inst.fmax) flippable.push_back(static_cast<int>(i));
    } else if (ready_lower_bound(failed[i], state.pos_of(), n) <= n) {
      flippable.push_back(static_cast<int>(i));
    }
  }
  if (flippable.empty()) return;
  int i = flippable[rng.below(flippable.size())];
  if (plan[i] > 0) {
    plan[i] = 0;
  } else {
    int bound = ready_lower_bound(failed[i], state.pos_of(), n);
    int t = sample_insert_target(rng, plan, i, bound, n, inst.lambda, &tabu,
                                 failed[i].vehicle_id);
    if (t == 0) return;
    plan[i] = t;
  }
  state.try_plan(scenario, std::move(plan));
  state.commit_plan(scenario);  // accepted regardless of objective values
  global.spend(1);
}

ParetoArchive stmls_core(const EvalContext& ctx, const StmlsConfig& cfg,
                         bool reinsertion_enabled) {
  const Instance& inst = ctx.instance();
  Rng rng(Rng::mix(cfg.seed, 0x53544d4cu));
  BudgetClock global(cfg.budget);

  std::vector<int> perm = utilization_greedy(inst);

  // Brief warm-up on the failure-free problem before the stochastic loop.
  ScenarioSample one = one_scenario_sample(inst);
  {
    EvalContext one_ctx(inst, one);
    Solution warm_sol;
    warm_sol.first_stage = perm;
    warm_sol.plans.assign(1, {});
    SearchState warm(one_ctx, std::move(warm_sol));
    std::vector<TabuList> warm_tabu(1, TabuList(2 * inst.lambda));
    BudgetClock local(cfg.budget.scaled(0.05));
    improve_first_stage(warm, global, local, cfg.weights, warm_tabu, rng);
    perm = warm.solution().first_stage;
  }

  Solution sol;
  sol.first_stage = perm;
  if (reinsertion_enabled) {
    sol.plans = make_plans(ctx, perm, 1, rng);
  } else {
    sol.plans.assign(ctx.n_scenarios(), {});
    for (int s = 0; s < ctx.n_scenarios(); ++s)
      sol.plans[s].assign(ctx.failed(s).size(), 0);
  }
  SearchState state(ctx, std::move(sol));
  std::vector<TabuList> tabu(ctx.n_scenarios(), TabuList(2 * inst.lambda));

  if (reinsertion_enabled) {
    for (int s = 0; s < ctx.n_scenarios(); ++s) {
      BudgetClock local(cfg.tau_s);
      improve_second_stage(state, s, global, local, tabu, rng);
    }
  }

  ParetoArchive archive;
  auto archive_incumbent = [&] {
    if (state.solution().violation_degree == 0)
      archive.update(state.solution().wo_total, state.solution().re_total,
                     state.solution());
  };

  std::uint64_t iter = 1;
  while (!global.exhausted()) {
    global.spend(1);
    if (reinsertion_enabled && iter % cfg.theta == 0) {
      archive_incumbent();
      for (int s = 0; s < ctx.n_scenarios(); ++s) {
        Rng scenario_rng = rng.fork();
        flip_binary_decision(state, s, global, tabu[s], scenario_rng);
        BudgetClock local(cfg.tau_s);
        improve_second_stage(state, s, global, local, tabu, scenario_rng);
      }
    } else {
      BudgetClock local(cfg.tau_f);
      improve_first_stage(state, global, local, cfg.weights, tabu, rng);
    }
    ++iter;
  }
  archive_incumbent();
  return archive;
}

}  // namespace

std::vector<ReinsertionPlan> initial_plans_all_insert(const EvalContext& ctx,
                                                      const std::vector<int>& first_stage,
                                                      Rng& rng) {
  return make_plans(ctx, first_stage, 1, rng);
}

std::vector<ReinsertionPlan> initial_plans_all_skip(const EvalContext& ctx,
                                                    const std::vector<int>& first_stage,
                                                    Rng& rng) {
  return make_plans(ctx, first_stage, 0, rng);
}

std::vector<ReinsertionPlan> initial_plans_random(const EvalContext& ctx,
                                                  const std::vector<int>& first_stage,
                                                  Rng& rng) {
  return make_plans(ctx, first_stage, 2, rng);
}

ParetoArchive stmls(const EvalContext& ctx, const StmlsConfig& config) {
  return stmls_core(ctx, config, true);
}

ParetoArchive stmls(const Instance& instance, const ScenarioSample& sample,
                    const StmlsConfig& config) {
  EvalContext ctx(instance, sample);
  return stmls_core(ctx, config, true);
}

ParetoArchive solve_one_scenario(const Instance& instance, const StmlsConfig& config) {
  ScenarioSample one = one_scenario_sample(instance);
  EvalContext ctx(instance, one);
  return stmls_core(ctx, config, false);
}

ParetoArchive solve_full_failures(const EvalContext& ctx, const StmlsConfig& config) {
  return stmls_core(ctx, config, false);
}

}  // namespace mmsr
