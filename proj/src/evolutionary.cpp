#include "mmsr/evolutionary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace mmsr {

std::vector<int> pmx_single_point(const std::vector<int>& parent1,
                                  const std::vector<int>& parent2, int cut) {
  const int n = static_cast<int>(parent1.size());
  if (cut < 1 || cut >= n) throw std::invalid_argument("cut point out of range");
  std::vector<int> child(parent1.begin(), parent1.begin() + cut);
  std::vector<char> taken(n, 0);
  for (int v : child) taken[v] = 1;
  for (int v : parent2)
    if (!taken[v]) child.push_back(v);
  return child;
}

ReinsertionPlan uniform_reinsertion_crossover(const ReinsertionPlan& parent1,
                                              const ReinsertionPlan& parent2,
                                              const std::vector<FailedVehicle>& failed,
                                              const std::vector<int>& pos_of,
                                              const Instance& inst, TabuList* tabu,
                                              Rng& rng) {
  const size_t m = parent1.size();
  if (parent2.size() != m || failed.size() != m)
    throw std::invalid_argument("crossover parents cover different gene sets");
  const int n = inst.num_positions();

  std::vector<char> insert(m, 0);
  for (size_t i = 0; i < m; ++i) {
    bool a = parent1[i] > 0, b = parent2[i] > 0;
    insert[i] = a == b ? a : (rng.bernoulli(0.5) ? a : b);
  }
  ReinsertionPlan child(m, 0);
  for (size_t i = 0; i < m; ++i) {
    if (!insert[i]) continue;
    int bound = ready_lower_bound(failed[i], pos_of, n);
    child[i] = sample_insert_target(rng, child, static_cast<int>(i), bound, n,
                                    inst.lambda, tabu, failed[i].vehicle_id);
  }
  return child;
}

void mutate_first_stage(std::vector<int>& seq, Rng& rng) {
  const int n = static_cast<int>(seq.size());
  if (n < 2) return;
  int a = 1 + static_cast<int>(rng.below(n));
  int b = 1 + static_cast<int>(rng.below(n - 1));
  if (b >= a) ++b;
  std::reverse(seq.begin() + std::min(a, b) - 1, seq.begin() + std::max(a, b));
}

bool mutate_second_stage(Solution& solution, const EvalContext& ctx, double prob,
                         Rng& rng) {
  if (!rng.bernoulli(prob)) return false;
  std::vector<int> candidates;
  for (int s = 0; s < ctx.n_scenarios(); ++s)
    if (!ctx.failed(s).empty()) candidates.push_back(s);
  if (candidates.empty()) return false;
  int s = candidates[rng.below(candidates.size())];
  const auto& failed = ctx.failed(s);
  const Instance& inst = ctx.instance();
  const int n = inst.num_positions();
  auto pos_of = positions_of(solution.first_stage);
  ReinsertionPlan& plan = solution.plans[s];
  int i = static_cast<int>(rng.below(plan.size()));
  if (plan[i] > 0) {
    plan[i] = 0;
  } else {
    int bound = ready_lower_bound(failed[i], pos_of, n);
    int t = sample_insert_target(rng, plan, i, bound, n, inst.lambda, nullptr,
                                 failed[i].vehicle_id);
    if (t == 0) return false;
    plan[i] = t;
  }
  plan = enhance(std::move(plan), failed, pos_of, inst, rng);
  solution.evaluated = false;
  return true;
}

bool constrained_dominates(const ObjTriple& a, const ObjTriple& b) {
  const bool fa = a.vio == 0, fb = b.vio == 0;
  if (fa != fb) return fa;
  if (!fa && a.vio != b.vio) return a.vio < b.vio;
  return a.wo <= b.wo && a.re <= b.re && (a.wo < b.wo || a.re < b.re);
}

std::vector<std::vector<int>> fast_nondominated_sort(const std::vector<ObjTriple>& pts) {
  const int n = static_cast<int>(pts.size());
  std::vector<std::vector<int>> dominates(n);
  std::vector<int> dominated_by(n, 0);
  std::vector<std::vector<int>> fronts;
  std::vector<int> current;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (constrained_dominates(pts[i], pts[j]))
        dominates[i].push_back(j);
      else if (constrained_dominates(pts[j], pts[i]))
        ++dominated_by[i];
    }
    if (dominated_by[i] == 0) current.push_back(i);
  }
  while (!current.empty()) {
    fronts.push_back(current);
    std::vector<int> next;
    for (int i : current) {
      for (int j : dominates[i]) {
        if (--dominated_by[j] == 0) next.push_back(j);
      }
    }
    std::sort(next.begin(), next.end());
    current = std::move(next);
  }
  return fronts;
}

std::vector<double> crowding_distance(const std::vector<std::pair<double, double>>& front) {
  const int n = static_cast<int>(front.size());
  std::vector<double> dist(n, 0.0);
  if (n == 0) return dist;
  const double inf = std::numeric_limits<double>::infinity();
  for (int obj = 0; obj < 2; ++obj) {
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    auto value = [&](int i) { return obj == 0 ? front[i].first : front[i].second; };
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (value(a) != value(b)) return value(a) < value(b);
      return a < b;
    });
    double range = value(order.back()) - value(order.front());
    dist[order.front()] = inf;
    dist[order.back()] = inf;
    if (range <= 0.0) continue;
    for (int k = 1; k + 1 < n; ++k) {
      if (dist[order[k]] == inf) continue;
      dist[order[k]] += (value(order[k + 1]) - value(order[k - 1])) / range;
    }
  }
  return dist;
}

void update_external_population(ParetoArchive& ep, const Solution& solution,
                                const ObjTriple& objectives) {
  if (objectives.vio != 0) return;
  ep.update(objectives.wo, objectives.re, solution);
}

namespace {

struct Individual {
  std::unique_ptr<SearchState> state;
  ObjTriple obj() const { return state->objectives(); }
};

Individual make_individual(const EvalContext& ctx, Solution sol) {
  return Individual{std::make_unique<SearchState>(ctx, std::move(sol))};
}

ParetoArchive ea_core(const EvalContext& ctx, const EaConfig& cfg, bool local_search) {
  const Instance& inst = ctx.instance();
  const int n = inst.num_positions();
  const int p = cfg.population;
  if (p < 4 || p % 2 != 0)
    throw std::invalid_argument("population must be even and at least 4");
  if (cfg.mutation_prob < 0.0 || cfg.mutation_prob > 1.0)
    throw std::invalid_argument("mutation probability outside [0,1]");

  Rng rng(Rng::mix(cfg.seed, 0x4e534741u));
  BudgetClock global(cfg.budget);
  std::vector<TabuList> tabu(ctx.n_scenarios(), TabuList(2 * inst.lambda));
  ParetoArchive ep;

  // Initial population: one utilization-greedy sequence with all-skip plans,
  // one naive-greedy with all-insert plans, the rest naive-greedy random.
  std::vector<Individual> parents;
  parents.reserve(p);
  for (int i = 0; i < p; ++i) {
    Solution sol;
    sol.first_stage = i == 0 ? utilization_greedy(inst) : naive_greedy(inst, rng);
    if (local_search) {
      // Warm every first stage on the failure-free problem.
      ScenarioSample one = one_scenario_sample(inst);
      EvalContext one_ctx(inst, one);
      Solution warm_sol;
      warm_sol.first_stage = sol.first_stage;
      warm_sol.plans.assign(1, {});
      SearchState warm(one_ctx, std::move(warm_sol));
      std::vector<TabuList> warm_tabu(1, TabuList(2 * inst.lambda));
      BudgetClock local(cfg.budget.scaled(0.05 / p));
      improve_first_stage(warm, global, local, OperatorWeights{}, warm_tabu, rng);
      sol.first_stage = warm.solution().first_stage;
    }
    int mode = i == 0 ? 0 : (i == 1 ? 1 : 2);
    sol.plans = mode == 0   ? initial_plans_all_skip(ctx, sol.first_stage, rng)
                : mode == 1 ? initial_plans_all_insert(ctx, sol.first_stage, rng)
                            : initial_plans_random(ctx, sol.first_stage, rng);
    parents.push_back(make_individual(ctx, std::move(sol)));
    global.spend(1);
    if (local_search)
      update_external_population(ep, parents.back().state->solution(),
                                 parents.back().obj());
  }

  while (!global.exhausted()) {
    Rng gen_rng = rng.fork();
    std::vector<Individual> children;
    children.reserve(p);
    for (int c = 0; c < p && !global.exhausted(); ++c) {
      int pa = static_cast<int>(gen_rng.below(p));
      int pb = static_cast<int>(gen_rng.below(p - 1));
      if (pb >= pa) ++pb;
      Rng child_rng = gen_rng.fork();

      const Solution& sa = parents[pa].state->solution();
      const Solution& sb = parents[pb].state->solution();
      Solution child;
      int cut = 1 + static_cast<int>(child_rng.below(n - 1));
      child.first_stage = pmx_single_point(sa.first_stage, sb.first_stage, cut);
      if (child_rng.bernoulli(cfg.mutation_prob))
        mutate_first_stage(child.first_stage, child_rng);

      auto pos_of = positions_of(child.first_stage);
      child.plans.resize(ctx.n_scenarios());
      for (int s = 0; s < ctx.n_scenarios(); ++s) {
        ReinsertionPlan crossed = uniform_reinsertion_crossover(
            sa.plans[s], sb.plans[s], ctx.failed(s), pos_of, inst, &tabu[s], child_rng);
        child.plans[s] =
            enhance(std::move(crossed), ctx.failed(s), pos_of, inst, child_rng);
      }
      mutate_second_stage(child, ctx, cfg.mutation_prob, child_rng);

      children.push_back(make_individual(ctx, std::move(child)));
      global.spend(1);

      if (local_search) {
        BudgetClock local(cfg.tau_s);
        for (int s = 0; s < ctx.n_scenarios() && !local.exhausted(); ++s)
          improve_second_stage(*children.back().state, s, global, local, tabu,
                               child_rng);
      }
      if (local_search)
        update_external_population(ep, children.back().state->solution(),
                                   children.back().obj());
    }

    // Environmental selection over the merged 2P set.
    std::vector<Individual> merged;
    merged.reserve(parents.size() + children.size());
    for (auto& ind : parents) merged.push_back(std::move(ind));
    for (auto& ind : children) merged.push_back(std::move(ind));
    std::vector<ObjTriple> pts;
    pts.reserve(merged.size());
    for (const auto& ind : merged) pts.push_back(ind.obj());
    auto fronts = fast_nondominated_sort(pts);

    std::vector<Individual> next;
    next.reserve(p);
    for (const auto& front : fronts) {
      if (static_cast<int>(next.size()) >= p) break;
      int room = p - static_cast<int>(next.size());
      if (static_cast<int>(front.size()) <= room) {
        for (int idx : front) next.push_back(std::move(merged[idx]));
        continue;
      }
      std::vector<std::pair<double, double>> objs;
      objs.reserve(front.size());
      for (int idx : front)
        objs.emplace_back(static_cast<double>(pts[idx].wo),
                          static_cast<double>(pts[idx].re));
      auto crowd = crowding_distance(objs);
      std::vector<int> order(front.size());
      for (size_t i = 0; i < front.size(); ++i) order[i] = static_cast<int>(i);
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (crowd[a] != crowd[b]) return crowd[a] > crowd[b];
        return front[a] < front[b];
      });
      for (int k = 0; k < room; ++k) next.push_back(std::move(merged[front[order[k]]]));
    }
    parents = std::move(next);
  }

  if (local_search) return ep;

  // Final front 1, duplicates of an objective pair collapsed.
  std::vector<ObjTriple> pts;
  pts.reserve(parents.size());
  for (const auto& ind : parents) pts.push_back(ind.obj());
  auto fronts = fast_nondominated_sort(pts);
  ParetoArchive archive;
  if (!fronts.empty()) {
    for (int idx : fronts[0]) {
      if (pts[idx].vio != 0) continue;
      archive.update(pts[idx].wo, pts[idx].re, parents[idx].state->solution());
    }
  }
  return archive;
}

}  // namespace

ParetoArchive nsga2(const EvalContext& ctx, const EaConfig& config) {
  return ea_core(ctx, config, false);
}

ParetoArchive nsga2(const Instance& instance, const ScenarioSample& sample,
                    const EaConfig& config) {
  EvalContext ctx(instance, sample);
  return ea_core(ctx, config, false);
}

ParetoArchive ls_nsga2(const EvalContext& ctx, const EaConfig& config) {
  return ea_core(ctx, config, true);
}

ParetoArchive ls_nsga2(const Instance& instance, const ScenarioSample& sample,
                       const EaConfig& config) {
  EvalContext ctx(instance, sample);
  return ea_core(ctx, config, true);
}

}  // namespace mmsr
