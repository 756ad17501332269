#include "mmsr/simulator.hpp"

#include <algorithm>
#include <map>

#include "mmsr/evaluator.hpp"
#include "mmsr/kernels.hpp"
#include "mmsr/parallel.hpp"
#include "mmsr/rng.hpp"

namespace mmsr {

namespace {

struct Reinstating {
  int failed_idx = 0;
  int ready_at = 0;  // 1-based position; may exceed any reachable position
  int vehicle_id = 0;
};

SimOutcome simulate_impl(const std::vector<int>& first_stage, const Scenario& scenario,
                         const Instance& inst, const LoadMatrix& loads,
                         const std::vector<FailedVehicle>& failed, tu_t threshold) {
  SimOutcome out;
  const int stride = loads.stride;
  auto pos_of = positions_of(first_stage);

  std::vector<Reinstating> waiting;
  for (size_t i = 0; i < failed.size(); ++i)
    waiting.push_back({static_cast<int>(i),
                       ready_lower_bound(failed[i], pos_of, inst.num_positions()),
                       failed[i].vehicle_id});
  std::sort(waiting.begin(), waiting.end(), [](const Reinstating& a, const Reinstating& b) {
    if (a.ready_at != b.ready_at) return a.ready_at < b.ready_at;
    return a.vehicle_id < b.vehicle_id;
  });
  std::vector<char> inserted(failed.size(), 0);

  std::vector<int> rows;
  rows.reserve(first_stage.size() + failed.size());
  for (int v : first_stage)
    if (scenario.exists[v]) rows.push_back(v);

  const int max_len = static_cast<int>(rows.size() + failed.size());
  std::vector<tu_t> z(static_cast<size_t>(max_len + 1) * stride, 0);
  std::vector<tu_t> w_pos(max_len, 0);
  std::vector<tu_sum_t> w_prefix(max_len + 1, 0);
  auto kernel = overload_kernel();

  auto recompute_from = [&](int from) {
    int len = static_cast<int>(rows.size());
    kernel(loads, rows.data(), len, from, z.data(), w_pos.data());
    for (int t = from; t < len; ++t) w_prefix[t + 1] = w_prefix[t] + w_pos[t];
  };
  recompute_from(0);
  tu_sum_t total = w_prefix[rows.size()];

  std::vector<int> cand_rows;
  std::vector<tu_t> cand_z;
  std::vector<tu_t> cand_w;

  int last_insert_pos = -inst.lambda;  // spacing never blocks before the first
  for (int pos = 1; pos <= static_cast<int>(rows.size()); ++pos) {
    if (pos - last_insert_pos < inst.lambda) continue;
    const int p0 = pos - 1;
    for (const auto& cand : waiting) {
      if (inserted[cand.failed_idx] || cand.ready_at > pos) continue;
      // Candidate overload: splice the vehicle in at this position and rerun
      // the recursion over the suffix only.
      int suffix_len = static_cast<int>(rows.size()) - p0 + 1;
      cand_rows.assign(1, cand.vehicle_id);
      cand_rows.insert(cand_rows.end(), rows.begin() + p0, rows.end());
      cand_z.resize(static_cast<size_t>(suffix_len + 1) * stride);
      std::copy_n(z.data() + static_cast<size_t>(p0) * stride, stride, cand_z.data());
      cand_w.resize(suffix_len);
      tu_sum_t suffix =
          kernel(loads, cand_rows.data(), suffix_len, 0, cand_z.data(), cand_w.data());
      tu_sum_t delta = w_prefix[p0] + suffix - total;
      if (delta > threshold) continue;

      rows.insert(rows.begin() + p0, cand.vehicle_id);
      recompute_from(p0);
      total = w_prefix[rows.size()];
      inserted[cand.failed_idx] = 1;
      out.log.push_back({cand.vehicle_id, pos, delta});
      last_insert_pos = pos;
      ++out.reinserted;
      break;  // continue the walk from the next position
    }
  }

  out.wo = total;
  for (size_t i = 0; i < failed.size(); ++i) {
    if (!inserted[i]) {
      std::int64_t days = failed[i].wait_days + 1;
      out.re += days * days;
    }
  }
  return out;
}

}  // namespace

SimOutcome simulate_dynamic(const std::vector<int>& first_stage,
                            const Scenario& scenario, const Instance& inst,
                            tu_t threshold) {
  LoadMatrix loads = build_load_matrix(inst);
  return simulate_impl(first_stage, scenario, inst, loads,
                       failed_vehicles(inst, scenario), threshold);
}

std::vector<SimRow> run_simulation_suite(const std::vector<LabeledSequence>& sequences,
                                         const Instance& inst, const SimConfig& cfg,
                                         int jobs) {
  ScenarioSample test =
      sample_scenarios(inst, cfg.n_test_scenarios, Rng::mix(cfg.seed, 0x7e575e71u));
  LoadMatrix loads = build_load_matrix(inst);
  std::vector<std::vector<FailedVehicle>> failed;
  failed.reserve(test.scenarios.size());
  for (const auto& sc : test.scenarios) failed.push_back(failed_vehicles(inst, sc));

  const int n_seq = static_cast<int>(sequences.size());
  const int n_scen = test.size();
  const int n_thr = static_cast<int>(cfg.thresholds.size());
  struct Slot {
    tu_sum_t wo = 0;
    std::int64_t re = 0;
  };
  std::vector<Slot> slots(static_cast<size_t>(n_seq) * n_scen * n_thr);

  parallel_for(n_seq * n_scen, jobs, [&](int flat) {
    int si = flat / n_scen;
    int sc = flat % n_scen;
    for (int ti = 0; ti < n_thr; ++ti) {
      SimOutcome o = simulate_impl(sequences[si].first_stage, test.scenarios[sc], inst,
                                   loads, failed[sc], cfg.thresholds[ti]);
      slots[(static_cast<size_t>(si) * n_scen + sc) * n_thr + ti] = {o.wo, o.re};
    }
  });

  std::vector<std::string> variant_order;
  for (const auto& s : sequences)
    if (std::find(variant_order.begin(), variant_order.end(), s.variant) ==
        variant_order.end())
      variant_order.push_back(s.variant);

  std::vector<SimRow> rows;
  for (const auto& variant : variant_order) {
    for (int ti = 0; ti < n_thr; ++ti) {
      tu_sum_t wo_sum = 0;
      std::int64_t re_sum = 0;
      std::int64_t count = 0;
      for (int si = 0; si < n_seq; ++si) {
        if (sequences[si].variant != variant) continue;
        for (int sc = 0; sc < n_scen; ++sc) {
          const Slot& s = slots[(static_cast<size_t>(si) * n_scen + sc) * n_thr + ti];
          wo_sum += s.wo;
          re_sum += s.re;
          ++count;
        }
      }
      if (count == 0) continue;
      rows.push_back({variant, cfg.thresholds[ti],
                      static_cast<double>(wo_sum) / (kTuScale * static_cast<double>(count)),
                      static_cast<double>(re_sum) / static_cast<double>(count)});
    }
  }
  return rows;
}

}  // namespace mmsr
