#include "mmsr/evolutionary.hpp"

#include <algorithm>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "mmsr/evaluator.hpp"

using namespace mmsr;
using mmsr::testing::identity_perm;
using mmsr::testing::sample_of;

TEST_CASE("single-point crossover keeps the prefix and fills from the mate") {
  CHECK(pmx_single_point({1, 2, 3, 4, 5}, {5, 4, 3, 2, 1}, 2) ==
        std::vector<int>{1, 2, 5, 4, 3});
  std::vector<int> p{3, 1, 4, 2, 0};
  CHECK(pmx_single_point(p, p, 4) == p);
}

TEST_CASE("single-point crossover always yields permutations") {
  Rng rng(44);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 3 + static_cast<int>(rng.below(10));
    std::vector<int> a = identity_perm(n), b = identity_perm(n);
    for (int i = n - 1; i > 0; --i) std::swap(a[i], a[rng.below(i + 1)]);
    for (int i = n - 1; i > 0; --i) std::swap(b[i], b[rng.below(i + 1)]);
    int cut = 1 + static_cast<int>(rng.below(n - 1));
    CHECK(is_permutation_of_instance(pmx_single_point(a, b, cut), n));
  }
}

namespace {

struct CrossFixture {
  Instance inst;
  Scenario sc;
  std::vector<FailedVehicle> failed;
  std::vector<int> pos_of;
};

CrossFixture cross_fixture() {
  CrossFixture f;
  std::vector<tu_t> proc(8, 900);
  f.inst = testing::single_station(proc, 1200, 970, 2, 0);
  for (auto& v : f.inst.vehicles) v.ready_offset = 0;
  testing::add_old_vehicle(f.inst, {900}, 1, 4, 0);
  testing::add_old_vehicle(f.inst, {900}, 2, 5, 0);
  f.sc = testing::scenario_with(f.inst, {1}, {0, 1});
  f.failed = failed_vehicles(f.inst, f.sc);
  f.pos_of = positions_of(identity_perm(8));
  return f;
}

}  // namespace

TEST_CASE("agreeing binary genes are inherited verbatim") {
  CrossFixture f = cross_fixture();
  ReinsertionPlan a{0, 3, 5};
  ReinsertionPlan b{0, 7, 2};
  Rng rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    auto child = uniform_reinsertion_crossover(a, b, f.failed, f.pos_of, f.inst,
                                               nullptr, rng);
    CHECK(child[0] == 0);
    CHECK(child[1] > 0);
    CHECK(child[2] > 0);
  }
}

TEST_CASE("disagreeing genes follow a fair coin and get fresh targets") {
  CrossFixture f = cross_fixture();
  ReinsertionPlan a{4, 0, 0};
  ReinsertionPlan b{0, 0, 6};
  std::set<std::pair<bool, bool>> patterns;
  Rng rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    auto child = uniform_reinsertion_crossover(a, b, f.failed, f.pos_of, f.inst,
                                               nullptr, rng);
    CHECK(child[1] == 0);  // both parents skip
    patterns.insert({child[0] > 0, child[2] > 0});
  }
  // both donors must be observed on each disagreeing gene
  CHECK(patterns.count({true, true}) + patterns.count({true, false}) > 0);
  CHECK(patterns.count({false, true}) + patterns.count({false, false}) > 0);
  CHECK(patterns.size() > 1);
}

TEST_CASE("first-stage mutation reverses a real subsequence") {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> seq = identity_perm(7);
    auto before = seq;
    mutate_first_stage(seq, rng);
    CHECK(is_permutation_of_instance(seq, 7));
    CHECK(seq != before);
  }
}

TEST_CASE("a zero mutation probability never touches the genes") {
  CrossFixture f = cross_fixture();
  ScenarioSample sample = sample_of({f.sc});
  EvalContext ctx(f.inst, sample);
  Solution sol;
  sol.first_stage = identity_perm(8);
  sol.plans = {{0, 3, 5}};
  Rng rng(1);
  CHECK(!mutate_second_stage(sol, ctx, 0.0, rng));
  CHECK(sol.plans[0] == ReinsertionPlan{0, 3, 5});
}

TEST_CASE("a forced mutation flips one binary reinsertion gene") {
  CrossFixture f = cross_fixture();
  ScenarioSample sample = sample_of({f.sc});
  EvalContext ctx(f.inst, sample);
  bool saw_insert_flip = false, saw_skip_flip = false;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Solution sol;
    sol.first_stage = identity_perm(8);
    sol.plans = {{0, 3, 5}};
    Rng rng(seed);
    REQUIRE(mutate_second_stage(sol, ctx, 1.0, rng));
    int skips_now = 0;
    for (int t : sol.plans[0])
      if (t == 0) ++skips_now;
    if (skips_now == 0) saw_skip_flip = true;   // the skipped gene became insert
    if (skips_now == 2) saw_insert_flip = true; // an inserted gene became skip
  }
  CHECK(saw_insert_flip);
  CHECK(saw_skip_flip);
}

TEST_CASE("constrained domination ranks feasibility first") {
  ObjTriple feas_a{10, 20, 0};
  ObjTriple feas_b{10, 30, 0};
  ObjTriple infeas{1, 1, 1};
  ObjTriple infeas_worse{1, 1, 3};
  CHECK(constrained_dominates(feas_a, feas_b));
  CHECK(!constrained_dominates(feas_b, feas_a));
  CHECK(constrained_dominates(feas_b, infeas));
  CHECK(!constrained_dominates(infeas, feas_b));
  CHECK(constrained_dominates(infeas, infeas_worse));
  ObjTriple left{10, 30, 0}, right{30, 10, 0};
  CHECK(!constrained_dominates(left, right));
  CHECK(!constrained_dominates(right, left));
}

TEST_CASE("front sorting matches a brute-force peel") {
  Rng rng(2718);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<ObjTriple> pts;
    int n = 20;
    for (int i = 0; i < n; ++i)
      pts.push_back({static_cast<tu_sum_t>(rng.below(12)),
                     static_cast<std::int64_t>(rng.below(12)),
                     rng.below(4) == 0 ? static_cast<int>(rng.below(3)) : 0});
    auto fronts = fast_nondominated_sort(pts);

    // peel oracle: repeatedly remove the non-dominated subset
    std::vector<int> remaining(n);
    for (int i = 0; i < n; ++i) remaining[i] = i;
    std::vector<std::vector<int>> expect;
    while (!remaining.empty()) {
      std::vector<int> front, rest;
      for (int i : remaining) {
        bool dominated = false;
        for (int j : remaining)
          if (i != j && constrained_dominates(pts[j], pts[i])) {
            dominated = true;
            break;
          }
        (dominated ? rest : front).push_back(i);
      }
      expect.push_back(front);
      remaining = rest;
    }
    REQUIRE(fronts.size() == expect.size());
    for (size_t k = 0; k < fronts.size(); ++k) {
      auto got = fronts[k];
      std::sort(got.begin(), got.end());
      CHECK(got == expect[k]);
    }
  }
}

TEST_CASE("front sorting handles the simple shapes") {
  std::vector<ObjTriple> single{{1, 9, 0}, {5, 5, 0}, {9, 1, 0}};
  CHECK(fast_nondominated_sort(single).size() == 1);
  std::vector<ObjTriple> chain{{1, 1, 0}, {2, 2, 0}, {3, 3, 0}};
  auto fronts = fast_nondominated_sort(chain);
  REQUIRE(fronts.size() == 3);
  CHECK(fronts[0] == std::vector<int>{0});
  CHECK(fronts[2] == std::vector<int>{2});
}

TEST_CASE("crowding rewards boundaries and spreads interior points") {
  auto two = crowding_distance({{0.0, 1.0}, {1.0, 0.0}});
  CHECK(std::isinf(two[0]));
  CHECK(std::isinf(two[1]));

  auto three = crowding_distance({{0.0, 2.0}, {1.0, 1.0}, {2.0, 0.0}});
  CHECK(std::isinf(three[0]));
  CHECK(std::isinf(three[2]));
  CHECK(three[1] == doctest::Approx(2.0));

  auto dupes = crowding_distance({{1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}});
  for (size_t i = 2; i + 2 <= dupes.size(); ++i) {
    CHECK(!std::isnan(dupes[i]));
  }
}

TEST_CASE("external population updates keep a clean non-dominated set") {
  ParetoArchive ep;
  Solution dummy;
  update_external_population(ep, dummy, {10, 10, 0});
  update_external_population(ep, dummy, {12, 12, 0});  // dominated
  CHECK(ep.size() == 1);
  update_external_population(ep, dummy, {10, 10, 0});  // duplicate
  CHECK(ep.size() == 1);
  update_external_population(ep, dummy, {12, 8, 0});  // incomparable
  CHECK(ep.size() == 2);
  update_external_population(ep, dummy, {9, 9, 0});  // dominates the first
  CHECK(ep.size() == 2);
  CHECK(ep.entries()[0].wo_total == 9);
  update_external_population(ep, dummy, {0, 0, 2});  // infeasible is ignored
  CHECK(ep.size() == 2);
}

namespace {

struct EaFixture {
  Instance inst;
  ScenarioSample sample;
};

EaFixture ea_fixture(std::uint64_t seed) {
  GeneratorConfig cfg;
  cfg.n_vehicles = 10;
  cfg.seed = seed;
  cfg.highrisk_ratio_lo = cfg.highrisk_ratio_hi = 0.3;
  cfg.fmax_override = 1;
  cfg.lambda = 2;
  cfg.r_new_lo = 0;
  cfg.r_new_hi = 3;
  cfg.r_old_lo = 0;
  cfg.r_old_hi = 3;
  EaFixture f;
  f.inst = generate_instance(cfg);
  f.sample = sample_scenarios(f.inst, 4, seed + 1);
  return f;
}

}  // namespace

TEST_CASE("the generational solver returns a feasible reproducible front") {
  EaFixture f = ea_fixture(7);
  EvalContext ctx(f.inst, f.sample);
  EaConfig cfg;
  cfg.population = 8;
  cfg.budget = Budget::iters(600);
  cfg.seed = 5;
  ParetoArchive a = nsga2(ctx, cfg);
  ParetoArchive b = nsga2(ctx, cfg);
  REQUIRE(!a.empty());
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a.entries()[i].wo_total == b.entries()[i].wo_total);
    CHECK(a.entries()[i].solution.first_stage == b.entries()[i].solution.first_stage);
  }
  for (const auto& e : a.entries()) {
    CHECK(e.solution.violation_degree == 0);
    Solution copy = e.solution;
    evaluate(ctx, copy);
    CHECK(copy.wo_total == e.wo_total);
    CHECK(copy.re_total == e.re_total);
  }
}

TEST_CASE("longer runs never lose the elite overload value") {
  EaFixture f = ea_fixture(13);
  EvalContext ctx(f.inst, f.sample);
  EaConfig cfg;
  cfg.population = 8;
  cfg.seed = 17;
  cfg.budget = Budget::iters(300);
  auto short_run = nsga2(ctx, cfg);
  cfg.budget = Budget::iters(900);
  auto long_run = nsga2(ctx, cfg);
  auto best_wo = [](const ParetoArchive& a) {
    tu_sum_t best = std::numeric_limits<tu_sum_t>::max();
    for (const auto& e : a.entries()) best = std::min(best, e.wo_total);
    return best;
  };
  REQUIRE(!short_run.empty());
  REQUIRE(!long_run.empty());
  CHECK(best_wo(long_run) <= best_wo(short_run));
}

TEST_CASE("the hybrid returns an external population beyond the final front") {
  EaFixture f = ea_fixture(23);
  EvalContext ctx(f.inst, f.sample);
  EaConfig cfg;
  cfg.population = 4;
  cfg.budget = Budget::iters(500);
  cfg.tau_s = Budget::iters(5);
  cfg.seed = 9;
  ParetoArchive ep = ls_nsga2(ctx, cfg);
  REQUIRE(!ep.empty());
  for (size_t i = 0; i < ep.size(); ++i) {
    for (size_t j = 0; j < ep.size(); ++j) {
      if (i == j) continue;
      CHECK(!(ep.entries()[i].wo_total <= ep.entries()[j].wo_total &&
              ep.entries()[i].re_total <= ep.entries()[j].re_total));
    }
  }
  for (const auto& e : ep.entries()) {
    Solution copy = e.solution;
    evaluate(ctx, copy);
    CHECK(copy.wo_total == e.wo_total);
    CHECK(copy.violation_degree == 0);
  }
}

TEST_CASE("on a failure-free instance the generational solver tracks local search") {
  GeneratorConfig cfg;
  cfg.n_vehicles = 8;
  cfg.seed = 3;
  cfg.highrisk_ratio_lo = cfg.highrisk_ratio_hi = 0.0;
  cfg.fmax_override = 0;
  cfg.lambda = 2;
  Instance inst = generate_instance(cfg);
  ScenarioSample sample = sample_scenarios(inst, 2, 4);
  EvalContext ctx(inst, sample);

  EaConfig ecfg;
  ecfg.population = 8;
  ecfg.budget = Budget::iters(2000);
  ecfg.seed = 2;
  ParetoArchive ea = nsga2(ctx, ecfg);

  StmlsConfig scfg;
  scfg.budget = Budget::iters(2000);
  scfg.seed = 2;
  ParetoArchive ls = solve_one_scenario(inst, scfg);

  REQUIRE(!ea.empty());
  REQUIRE(!ls.empty());
  double ea_wo = static_cast<double>(ea.entries()[0].wo_total) / sample.size();
  double ls_wo = static_cast<double>(ls.entries()[0].wo_total);
  CHECK(ea_wo <= 1.05 * ls_wo + 10.0);
}
