#include "mmsr/feasibility.hpp"

#include <stdexcept>

#include "doctest.h"
#include "helpers.hpp"
#include "mmsr/rng.hpp"
#include "mmsr/search.hpp"

using namespace mmsr;
using mmsr::testing::identity_perm;

namespace {

Instance twenty_vehicle_instance(int lambda, int fmax_pool) {
  std::vector<tu_t> proc(20, 900);
  Instance inst = testing::single_station(proc, 1200, 970, lambda, 0);
  for (int j = 0; j < fmax_pool; ++j)
    testing::add_old_vehicle(inst, {900}, 1 + j % 3, 4, 0);
  return inst;
}

}  // namespace

TEST_CASE("ready bounds for pool and new failures") {
  Instance inst = twenty_vehicle_instance(10, 1);
  auto pos_of = positions_of(identity_perm(20));

  FailedVehicle old_vehicle{inst.old_pool[0].vehicle.id, true, 0, 0, 1, false,
                            &inst.old_pool[0].vehicle};
  CHECK(ready_lower_bound(old_vehicle, pos_of, 20) == 1);

  FailedVehicle fresh{4, false, -1, 10, 0, false, &inst.vehicles[4]};  // position 5
  CHECK(ready_lower_bound(fresh, pos_of, 20) == 15);

  FailedVehicle late{14, false, -1, 10, 0, false, &inst.vehicles[14]};  // position 15
  CHECK(ready_lower_bound(late, pos_of, 20) == 20);
}

TEST_CASE("the contract-checked bound rejects vehicles that did not fail") {
  Instance inst = twenty_vehicle_instance(10, 0);
  Scenario sc = testing::scenario_with(inst, {3});
  CHECK(ready_lower_bound(inst, sc, identity_perm(20), 3) > 0);
  CHECK_THROWS_AS(ready_lower_bound(inst, sc, identity_perm(20), 4),
                  std::invalid_argument);
}

TEST_CASE("an all-skip plan reports only the cap excess") {
  Instance inst = twenty_vehicle_instance(10, 1);
  Scenario sc = testing::scenario_with(inst, {2, 7});  // pool vehicle absent
  auto failed = failed_vehicles(inst, sc);
  ReinsertionPlan plan(failed.size(), 0);
  auto rep = check_plan(plan, failed, positions_of(identity_perm(20)), inst);
  CHECK(rep.lambda_violations == 0);
  CHECK(rep.due_misses == 0);
  CHECK(rep.ready_violations == 0);
  CHECK(rep.fmax_excess == std::max(0, 2 - inst.fmax));
}

TEST_CASE("close targets violate every window that covers them both") {
  Instance inst = twenty_vehicle_instance(10, 2);
  Scenario sc = testing::scenario_with(inst, {}, {0, 1});
  auto failed = failed_vehicles(inst, sc);
  for (auto& o : inst.old_pool) o.vehicle.ready_offset = 0;
  ReinsertionPlan plan{3, 7};
  auto rep = check_plan(plan, failed, positions_of(identity_perm(20)), inst);
  CHECK(rep.lambda_violations == 3);  // window starts 1, 2, 3
  CHECK(count_lambda_violations(plan, 10, 20) == 3);
}

TEST_CASE("skipping a due pool vehicle is a miss") {
  Instance inst = twenty_vehicle_instance(10, 1);
  inst.old_pool[0].wait_days = 4;
  inst.old_pool[0].slack_days = 4;
  Scenario sc = testing::scenario_with(inst, {}, {0});
  auto failed = failed_vehicles(inst, sc);
  ReinsertionPlan plan{0};
  auto rep = check_plan(plan, failed, positions_of(identity_perm(20)), inst);
  CHECK(rep.due_misses == 1);
}

TEST_CASE("lambda conflicts reduce to a distance test when windows exist") {
  CHECK(lambda_conflict(3, 7, 10, 20));
  CHECK(!lambda_conflict(3, 13, 10, 20));
  CHECK(lambda_conflict(19, 20, 10, 20));
  CHECK(!lambda_conflict(1, 2, 10, 5));  // sequence shorter than the window
  CHECK(count_lambda_violations({5, 5}, 3, 10) > 0);
}

TEST_CASE("a feasible plan passes through the repair untouched") {
  Instance inst = twenty_vehicle_instance(5, 1);
  Scenario sc = testing::scenario_with(inst, {0}, {0});
  auto failed = failed_vehicles(inst, sc);
  auto pos_of = positions_of(identity_perm(20));
  inst.vehicles[0].ready_offset = 2;
  ReinsertionPlan plan{5, 15};
  Rng rng(1);
  auto repaired = enhance(plan, failed, pos_of, inst, rng);
  CHECK(repaired == plan);
}

TEST_CASE("a ready violation is repaired without touching other genes") {
  std::vector<tu_t> proc(10, 900);
  Instance inst = testing::single_station(proc, 1200, 970, 2, 0);
  testing::add_old_vehicle(inst, {900}, 1, 4, 0);
  inst.vehicles[6].ready_offset = 3;
  Scenario sc = testing::scenario_with(inst, {6}, {0});
  auto failed = failed_vehicles(inst, sc);
  auto pos_of = positions_of(identity_perm(10));
  ReinsertionPlan plan{2, 5};  // vehicle 6 is ready only from position 10
  Rng rng(3);
  auto repaired = enhance(plan, failed, pos_of, inst, rng);
  auto rep = check_plan(repaired, failed, pos_of, inst);
  CHECK(rep.ready_violations == 0);
  CHECK(rep.due_misses == 0);
  CHECK(rep.fmax_excess == 0);
  CHECK(rep.lambda_violations == 0);
  CHECK(repaired[1] == 5);   // untouched gene
  CHECK(repaired[0] == 10);  // the only ready position
}

TEST_CASE("a zero cap forces conversions even at spacing cost") {
  // lambda equal to the horizon leaves room for a single spaced insert, so
  // converting three skips must sacrifice spacing.
  std::vector<tu_t> proc(6, 900);
  Instance inst = testing::single_station(proc, 1200, 970, 6, 0);
  inst.fmax = 0;
  for (int v = 0; v < 6; ++v) inst.vehicles[v].ready_offset = 0;
  Scenario sc = testing::scenario_with(inst, {0, 1, 2});
  auto failed = failed_vehicles(inst, sc);
  auto pos_of = positions_of(identity_perm(6));
  ReinsertionPlan plan{0, 0, 0};
  Rng rng(5);
  auto repaired = enhance(plan, failed, pos_of, inst, rng);
  auto rep = check_plan(repaired, failed, pos_of, inst);
  CHECK(rep.fmax_excess == 0);
  CHECK(rep.ready_violations == 0);
  CHECK(rep.lambda_violations > 0);
}

namespace {

struct EnhanceCase {
  Instance inst;
  Scenario sc;
  std::vector<FailedVehicle> failed;
  std::vector<int> pos_of;
  ReinsertionPlan plan;
};

EnhanceCase random_enhance_case(Rng& rng) {
  EnhanceCase ec;
  int n = 6 + static_cast<int>(rng.below(10));
  std::vector<tu_t> proc(n, 900);
  ec.inst = testing::single_station(proc, 1200, 970,
                                    1 + static_cast<int>(rng.below(5)), 0);
  for (int v = 0; v < n; ++v)
    ec.inst.vehicles[v].ready_offset = static_cast<int>(rng.below(n));
  int pool = static_cast<int>(rng.below(3));
  for (int j = 0; j < pool; ++j) {
    int g = 1 + static_cast<int>(rng.below(4));
    testing::add_old_vehicle(ec.inst, {900}, g, g + static_cast<int>(rng.below(2)),
                             static_cast<int>(rng.below(n + 2)));
  }
  ec.inst.fmax = static_cast<int>(rng.below(3));
  // keep the pool consistent with fmax by trimming or padding
  while (static_cast<int>(ec.inst.old_pool.size()) > ec.inst.fmax)
    ec.inst.old_pool.pop_back();
  while (static_cast<int>(ec.inst.old_pool.size()) < ec.inst.fmax)
    testing::add_old_vehicle(ec.inst, {900}, 1, 2, 0);
  ec.inst.fmax = static_cast<int>(ec.inst.old_pool.size());

  ec.sc = testing::no_failure_scenario(ec.inst);
  for (int v = 0; v < n; ++v)
    if (rng.below(4) == 0) ec.sc.exists[v] = 0;
  for (int j = 0; j < ec.inst.fmax; ++j)
    if (rng.below(2) == 0) ec.sc.old_present.push_back(j);

  ec.failed = failed_vehicles(ec.inst, ec.sc);
  ec.pos_of = positions_of(identity_perm(n));
  ec.plan.assign(ec.failed.size(), 0);
  for (size_t i = 0; i < ec.failed.size(); ++i)
    if (rng.below(2) == 0) ec.plan[i] = 1 + static_cast<int>(rng.below(n));
  return ec;
}

}  // namespace

TEST_CASE("repair is idempotent and never leaves hard violations") {
  Rng rng(909);
  for (int trial = 0; trial < 300; ++trial) {
    EnhanceCase ec = random_enhance_case(rng);
    Rng r1(trial), r2(trial + 7);
    auto once = enhance(ec.plan, ec.failed, ec.pos_of, ec.inst, r1);
    auto rep1 = check_plan(once, ec.failed, ec.pos_of, ec.inst);
    auto twice = enhance(once, ec.failed, ec.pos_of, ec.inst, r2);
    auto rep2 = check_plan(twice, ec.failed, ec.pos_of, ec.inst);
    CHECK(rep1 == rep2);
    CHECK(rep1.ready_violations == 0);
    // misses and cap excess can only stand for vehicles no position admits
    int unplaceable = 0;
    int unplaceable_due = 0;
    for (size_t i = 0; i < ec.failed.size(); ++i) {
      if (ready_lower_bound(ec.failed[i], ec.pos_of, ec.inst.num_positions()) >
          ec.inst.num_positions()) {
        ++unplaceable;
        if (ec.failed[i].due) ++unplaceable_due;
      }
    }
    CHECK(rep1.due_misses <= unplaceable_due);
    if (rep1.fmax_excess != 0) CHECK(unplaceable > 0);
  }
}

TEST_CASE("violation degree sums the per-scenario window counts") {
  Instance inst = twenty_vehicle_instance(10, 2);
  for (auto& o : inst.old_pool) o.vehicle.ready_offset = 0;
  Scenario a = testing::scenario_with(inst, {}, {0, 1});
  Scenario b = testing::scenario_with(inst, {}, {0, 1});
  ScenarioSample sample = testing::sample_of({a, b});
  Solution sol;
  sol.first_stage = identity_perm(20);
  sol.plans = {{3, 7}, {1, 20}};
  CHECK(violation_degree(sol, inst, sample) == 3);
  sol.plans = {{3, 7}, {5, 6}};
  CHECK(violation_degree(sol, inst, sample) > 3);
  sol.plans = {{1, 11}, {1, 20}};
  CHECK(violation_degree(sol, inst, sample) == 0);
}

TEST_CASE("tabu memory blocks recent rejections until they expire") {
  TabuList tabu(2);
  CHECK(tabu_allows(tabu, 4, 10));
  tabu.reject(4, 10);
  CHECK(!tabu_allows(tabu, 4, 10));
  CHECK(tabu_allows(tabu, 4, 11));
  tabu.reject(5, 1);
  tabu.reject(6, 2);  // evicts the oldest entry
  CHECK(tabu_allows(tabu, 4, 10));
  CHECK(!tabu_allows(tabu, 5, 1));
  CHECK(!tabu_allows(tabu, 6, 2));
}

TEST_CASE("target sampling avoids tabu slots while alternatives exist") {
  Instance inst = twenty_vehicle_instance(1, 0);
  ReinsertionPlan plan{0};
  TabuList tabu(40);
  for (int p = 1; p <= 20; ++p)
    if (p != 13) tabu.reject(9, p);
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial)
    CHECK(sample_insert_target(rng, plan, 0, 1, 20, 1, &tabu, 9) == 13);
  // with every slot tabu the filter is ignored rather than failing
  tabu.reject(9, 13);
  CHECK(sample_insert_target(rng, plan, 0, 1, 20, 1, &tabu, 9) != 0);
}
