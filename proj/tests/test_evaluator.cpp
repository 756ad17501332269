#include "mmsr/evaluator.hpp"

#include <algorithm>

#include "doctest.h"
#include "helpers.hpp"
#include "mmsr/rng.hpp"
#include "mmsr/search.hpp"

using namespace mmsr;
using mmsr::testing::identity_perm;
using mmsr::testing::sample_of;

namespace {

std::vector<int> ids_of(const FinalSequence& seq) {
  std::vector<int> out;
  for (const auto& e : seq) out.push_back(e.vehicle_id);
  return out;
}

// Random small instance with failures and a pool, plus a random solution.
struct RandomSetup {
  Instance inst;
  ScenarioSample sample;
  Solution sol;
};

RandomSetup random_setup(Rng& rng, int max_vehicles = 10, int n_scenarios = 3) {
  RandomSetup rs;
  int n = 3 + static_cast<int>(rng.below(max_vehicles - 2));
  std::vector<tu_t> proc;
  for (int i = 0; i < n; ++i) proc.push_back(static_cast<tu_t>(700 + rng.below(600)));
  rs.inst = testing::single_station(proc, 1200, 970,
                                    1 + static_cast<int>(rng.below(4)), 0);
  for (int v = 0; v < n; ++v) rs.inst.vehicles[v].ready_offset = static_cast<int>(rng.below(3));
  int pool = 1 + static_cast<int>(rng.below(2));
  for (int j = 0; j < pool; ++j) {
    int g = 1 + static_cast<int>(rng.below(4));
    testing::add_old_vehicle(rs.inst, {static_cast<tu_t>(700 + rng.below(600))}, g,
                             g + static_cast<int>(rng.below(3)),
                             static_cast<int>(rng.below(3)));
  }
  for (int s = 0; s < n_scenarios; ++s) {
    Scenario sc = testing::no_failure_scenario(rs.inst);
    for (int v = 0; v < n; ++v)
      if (rng.below(4) == 0) sc.exists[v] = 0;
    for (int j = 0; j < pool; ++j)
      if (rng.below(2) == 0) sc.old_present.push_back(j);
    rs.sample.scenarios.push_back(sc);
  }
  rs.sol.first_stage = identity_perm(n);
  for (int i = n - 1; i > 0; --i) {
    int j = static_cast<int>(rng.below(i + 1));
    std::swap(rs.sol.first_stage[i], rs.sol.first_stage[j]);
  }
  auto pos_of = positions_of(rs.sol.first_stage);
  for (const auto& sc : rs.sample.scenarios) {
    auto failed = failed_vehicles(rs.inst, sc);
    ReinsertionPlan plan(failed.size(), 0);
    for (size_t i = 0; i < failed.size(); ++i) {
      if (rng.below(2) == 0) continue;
      int bound = ready_lower_bound(failed[i], pos_of, n);
      if (bound > n) continue;
      plan[i] = bound + static_cast<int>(rng.below(n - bound + 1));
    }
    rs.sol.plans.push_back(plan);
  }
  return rs;
}

}  // namespace

TEST_CASE("single-station recursion on matched loads has no overload") {
  auto [w, total] = station_overload({970, 970, 970}, 1200, 970);
  CHECK(total == 0);
  CHECK(w == std::vector<tu_t>{0, 0, 0});
}

TEST_CASE("the final position pays the regenerative rule") {
  auto [w, total] = station_overload({1170, 1170}, 1200, 970);
  CHECK(w == std::vector<tu_t>{0, 400});
  CHECK(total == 400);
}

TEST_CASE("an overloaded position restarts at the side-by-side point") {
  auto [w, total] = station_overload({2400, 970}, 1200, 970);
  CHECK(w == std::vector<tu_t>{1200, 230});
  CHECK(total == 1430);
}

TEST_CASE("station overload rejects negative loads") {
  CHECK_THROWS_AS(station_overload({-1}, 1200, 970), std::invalid_argument);
  CHECK_THROWS_AS(station_overload({970}, 900, 970), std::invalid_argument);
}

TEST_CASE("an empty plan with no failures reproduces the first stage") {
  Instance inst = testing::single_station({500, 600, 700}, 1200, 970);
  Scenario sc = testing::no_failure_scenario(inst);
  auto seq = build_final_sequence({2, 0, 1}, sc, {}, inst);
  CHECK(ids_of(seq) == std::vector<int>{2, 0, 1});
  for (const auto& e : seq) CHECK(!e.neutral);
}

TEST_CASE("a reinsertion lands before the survivor at its named slot") {
  // five vehicles, the third fails, one pool vehicle inserted at slot 2
  Instance inst = testing::single_station({500, 500, 500, 500, 500}, 1200, 970);
  testing::add_old_vehicle(inst, {500}, 1, 3, 0);
  Scenario sc = testing::scenario_with(inst, {2}, {0});
  ReinsertionPlan plan{0, 2};  // gene order: failed vehicle 2, then pool entry
  auto seq = build_final_sequence(identity_perm(5), sc, plan, inst);
  CHECK(ids_of(seq) == std::vector<int>{0, 5, 1, 3, 4, 2});
  REQUIRE(seq.size() == 6);
  CHECK(seq[5].neutral);
  CHECK(!seq[1].neutral);
}

TEST_CASE("a self-reinsertion past the shifted tail is appended") {
  Instance inst = testing::single_station({500, 500, 500}, 1200, 970);
  inst.vehicles[1].ready_offset = 1;
  Scenario sc = testing::scenario_with(inst, {1});
  ReinsertionPlan plan{3};
  auto seq = build_final_sequence(identity_perm(3), sc, plan, inst);
  CHECK(ids_of(seq) == std::vector<int>{0, 2, 1});
  for (const auto& e : seq) CHECK(!e.neutral);
}

TEST_CASE("a plan below the ready bound is rejected by name") {
  Instance inst = testing::single_station({500, 500, 500}, 1200, 970);
  inst.vehicles[1].ready_offset = 2;
  Scenario sc = testing::scenario_with(inst, {1});
  ReinsertionPlan plan{1};  // bound is min(3, 2+2) = 3
  CHECK_THROWS_WITH_AS(build_final_sequence(identity_perm(3), sc, plan, inst),
                       doctest::Contains("vehicle 1"), std::invalid_argument);
}

TEST_CASE("a failure-free sample evaluates to the deterministic overload") {
  Instance inst = testing::single_station({1170, 1170}, 1200, 970);
  ScenarioSample sample = sample_of({testing::no_failure_scenario(inst)});
  Solution sol;
  sol.first_stage = identity_perm(2);
  sol.plans = {{}};
  auto obj = evaluate(sol, inst, sample);
  CHECK(obj.re == 0.0);
  CHECK(obj.wo == doctest::Approx(40.0));
  CHECK(sol.wo_total == 400);
}

TEST_CASE("one skipped pool vehicle contributes its squared waiting days") {
  Instance inst = testing::single_station({970, 970}, 1200, 970);
  testing::add_old_vehicle(inst, {970}, 3, 5, 0);
  Scenario sc = testing::scenario_with(inst, {}, {0});
  ScenarioSample sample = sample_of({sc});
  Solution sol;
  sol.first_stage = identity_perm(2);
  sol.plans = {{0}};
  auto obj = evaluate(sol, inst, sample);
  CHECK(obj.re == doctest::Approx(16.0));
  CHECK(sol.re_total == 16);
}

TEST_CASE("objectives average the per-scenario evaluations") {
  Instance inst = testing::single_station({1170, 1170, 970}, 1200, 970);
  Scenario a = testing::no_failure_scenario(inst);
  Scenario b = testing::scenario_with(inst, {2});
  ScenarioSample sample = sample_of({a, b});
  Solution sol;
  sol.first_stage = identity_perm(3);
  sol.plans = {{}, {0}};
  auto obj = evaluate(sol, inst, sample);

  // compose the construction and the single-station recursion by hand
  auto wo_of = [&](const Scenario& sc, const ReinsertionPlan& plan) {
    auto seq = build_final_sequence(sol.first_stage, sc, plan, inst);
    std::vector<tu_t> loads;
    for (const auto& e : seq)
      loads.push_back(e.neutral ? inst.cycle : inst.vehicles[e.vehicle_id].processing[0]);
    return station_overload(loads, 1200, 970).second;
  };
  tu_sum_t expect = wo_of(a, {}) + wo_of(b, {0});
  CHECK(sol.wo_total == expect);
  CHECK(obj.wo == doctest::Approx(static_cast<double>(expect) / 20.0));
  CHECK(sol.re_total == 1);  // one skipped current-horizon failure
}

TEST_CASE("cached objectives match a fresh evaluation") {
  Rng rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    RandomSetup rs = random_setup(rng);
    EvalContext ctx(rs.inst, rs.sample);
    SearchState state(ctx, rs.sol);
    Solution copy = state.solution();
    evaluate(ctx, copy);
    CHECK(copy.wo_total == state.solution().wo_total);
    CHECK(copy.re_total == state.solution().re_total);
    CHECK(copy.violation_degree == state.solution().violation_degree);
  }
}

TEST_CASE("swapping vehicles with equal processing rows changes nothing") {
  Instance inst = testing::single_station({800, 800, 900}, 1200, 970);
  ScenarioSample sample = sample_of({testing::no_failure_scenario(inst)});
  EvalContext ctx(inst, sample);
  Solution sol;
  sol.first_stage = identity_perm(3);
  sol.plans = {{}};
  SearchState state(ctx, sol);
  auto before = state.objectives();
  auto cand = state.try_first_stage(apply_operator(sol.first_stage, SeqOp::kSwap, 1, 2),
                                    sol.plans);
  CHECK(cand.wo == before.wo);
  CHECK(cand.re == before.re);
}

TEST_CASE("incremental evaluation equals a cold start on random moves") {
  Rng rng(555);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    RandomSetup rs = random_setup(rng);
    EvalContext ctx(rs.inst, rs.sample);
    SearchState state(ctx, rs.sol);
    const int n = rs.inst.num_positions();
    for (int move = 0; move < 40; ++move) {
      if (rng.below(2) == 0) {
        // first-stage operator with ready repair
        SeqOp ops[4] = {SeqOp::kSwap, SeqOp::kInsertForward, SeqOp::kInsertBackward,
                        SeqOp::kInversion};
        SeqOp op = ops[rng.below(4)];
        int a = 1 + static_cast<int>(rng.below(n));
        int b = 1 + static_cast<int>(rng.below(n - 1));
        if (b >= a) ++b;
        int i = a, j = b;
        if (op == SeqOp::kInsertForward) i = std::min(a, b), j = std::max(a, b);
        if (op == SeqOp::kInsertBackward) i = std::max(a, b), j = std::min(a, b);
        auto cand_first = apply_operator(state.solution().first_stage, op, i, j);
        auto cand_pos = positions_of(cand_first);
        auto plans = state.solution().plans;
        for (int s = 0; s < ctx.n_scenarios(); ++s) {
          const auto& failed = ctx.failed(s);
          for (size_t fi = 0; fi < failed.size(); ++fi) {
            if (failed[fi].is_old || plans[s][fi] == 0) continue;
            int bound = std::min(n, cand_pos[failed[fi].vehicle_id] +
                                        failed[fi].ready_offset);
            if (plans[s][fi] < bound)
              plans[s][fi] = bound + static_cast<int>(rng.below(n - bound + 1));
          }
        }
        auto inc = state.try_first_stage(cand_first, plans);
        Solution fresh;
        fresh.first_stage = cand_first;
        fresh.plans = plans;
        SearchState cold(ctx, fresh);
        REQUIRE(inc == cold.objectives());
        if (rng.below(2) == 0) state.commit_first_stage();
        ++checked;
      } else {
        int s = static_cast<int>(rng.below(ctx.n_scenarios()));
        const auto& failed = ctx.failed(s);
        if (failed.empty()) continue;
        auto plan = state.solution().plans[s];
        size_t gi = rng.below(plan.size());
        int bound = ready_lower_bound(failed[gi], state.pos_of(), n);
        if (rng.below(2) == 0 || bound > n) {
          if (failed[gi].due) continue;
          plan[gi] = 0;
        } else {
          plan[gi] = bound + static_cast<int>(rng.below(n - bound + 1));
        }
        auto inc = state.try_plan(s, plan);
        Solution fresh;
        fresh.first_stage = state.solution().first_stage;
        fresh.plans = state.solution().plans;
        fresh.plans[s] = plan;
        SearchState cold(ctx, fresh);
        REQUIRE(inc == cold.objectives());
        if (rng.below(2) == 0) state.commit_plan(s);
        ++checked;
      }
    }
  }
  CHECK(checked > 1000);
}

TEST_CASE("a move limited to one scenario leaves other terms unchanged") {
  Rng rng(808);
  RandomSetup rs = random_setup(rng, 8, 4);
  EvalContext ctx(rs.inst, rs.sample);
  SearchState state(ctx, rs.sol);
  for (int s = 0; s < ctx.n_scenarios(); ++s) {
    if (ctx.failed(s).empty()) continue;
    auto plan = state.solution().plans[s];
    if (ctx.failed(s)[0].due) continue;
    plan[0] = 0;
    tu_sum_t others_before = state.solution().wo_total - state.cache(s).wo;
    state.try_plan(s, plan);
    state.commit_plan(s);
    tu_sum_t others_after = state.solution().wo_total - state.cache(s).wo;
    CHECK(others_before == others_after);
  }
}

TEST_CASE("work overload separates over scenarios") {
  Rng rng(31337);
  RandomSetup rs = random_setup(rng, 8, 4);
  EvalContext ctx(rs.inst, rs.sample);
  Solution sol = rs.sol;
  evaluate(ctx, sol);
  tu_sum_t sum = 0;
  for (int s = 0; s < ctx.n_scenarios(); ++s) {
    ScenarioSample single = sample_of({rs.sample.scenarios[s]});
    EvalContext sctx(rs.inst, single);
    Solution part;
    part.first_stage = sol.first_stage;
    part.plans = {sol.plans[s]};
    evaluate(sctx, part);
    sum += part.wo_total;
  }
  CHECK(sum == sol.wo_total);
}

TEST_CASE("appending a neutral vehicle to a drained line adds nothing") {
  Rng rng(17);
  int found = 0;
  for (int trial = 0; trial < 300 && found < 30; ++trial) {
    int len = 1 + static_cast<int>(rng.below(6));
    std::vector<tu_t> loads;
    for (int i = 0; i < len; ++i) loads.push_back(static_cast<tu_t>(rng.below(1400)));
    tu_t l = 1200, c = 970;
    auto [w, total] = station_overload(loads, l, c);
    // the state entering the (new) appended slot must be drained
    tu_t z = 0;
    for (int t = 0; t < len; ++t) {
      tu_t zb = z + loads[t];
      tu_t wt = std::max<tu_t>(0, zb - l);
      z = std::max<tu_t>(0, zb - wt - c);
    }
    if (z != 0) continue;
    ++found;
    auto appended = loads;
    appended.push_back(c);
    CHECK(station_overload(appended, l, c).second == total);
  }
  CHECK(found >= 30);
}

TEST_CASE("raising any processing time never lowers the overload") {
  Rng rng(4096);
  for (int trial = 0; trial < 50; ++trial) {
    RandomSetup rs = random_setup(rng);
    EvalContext ctx(rs.inst, rs.sample);
    Solution sol = rs.sol;
    evaluate(ctx, sol);
    Instance bumped = rs.inst;
    int v = static_cast<int>(rng.below(bumped.vehicles.size()));
    bumped.vehicles[v].processing[0] += static_cast<tu_t>(rng.below(400));
    EvalContext ctx2(bumped, rs.sample);
    Solution sol2;
    sol2.first_stage = sol.first_stage;
    sol2.plans = sol.plans;
    evaluate(ctx2, sol2);
    CHECK(sol2.wo_total >= sol.wo_total);
  }
}
