#include "mmsr/model.hpp"

#include <algorithm>
#include <cstdio>

namespace mmsr {

namespace {

std::string msg(const char* fmt, long long a, long long b = 0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), fmt, a, b);
  return buf;
}

}  // namespace

std::vector<std::string> validate_instance(const Instance& inst) {
  std::vector<std::string> out;
  const int k = inst.num_stations();
  const int n = inst.num_positions();

  if (inst.cycle <= 0) out.push_back("cycle must be positive");
  if (inst.lambda < 1) out.push_back("lambda must be at least 1");
  if (inst.fmax < 0) out.push_back("fmax must be non-negative");
  if (inst.lead_time < 1) out.push_back("lead time must be at least 1");

  for (const auto& s : inst.stations) {
    if (s.length < inst.cycle)
      out.push_back(msg("station %lld length below cycle", s.id));
    if (s.length > kTuMax)
      out.push_back(msg("station %lld length exceeds supported maximum", s.id));
  }

  std::vector<char> seen(static_cast<size_t>(n) > 0 ? n : 0, 0);
  for (const auto& v : inst.vehicles) {
    if (v.id < 0 || v.id >= n) {
      out.push_back(msg("vehicle %lld id outside dense range 0..%lld", v.id, n - 1));
    } else if (seen[v.id]++) {
      out.push_back(msg("vehicle %lld id duplicated", v.id));
    }
    if (static_cast<int>(v.processing.size()) != k)
      out.push_back(msg("vehicle %lld has %lld processing entries", v.id,
                        static_cast<long long>(v.processing.size())));
    for (tu_t p : v.processing) {
      if (p < 0 || p > kTuMax) {
        out.push_back(msg("vehicle %lld has out-of-range processing time", v.id));
        break;
      }
    }
    if (v.failure_prob < 0.0 || v.failure_prob > 1.0)
      out.push_back(msg("vehicle %lld failure probability outside [0,1]", v.id));
    if (v.ready_offset < 0)
      out.push_back(msg("vehicle %lld ready offset negative", v.id));
  }

  if (static_cast<int>(inst.old_pool.size()) != inst.fmax)
    out.push_back(msg("old_pool size %lld differs from fmax %lld",
                      static_cast<long long>(inst.old_pool.size()), inst.fmax));
  for (size_t i = 0; i < inst.old_pool.size(); ++i) {
    const auto& o = inst.old_pool[i];
    if (o.wait_days < 1 || o.wait_days > o.slack_days || o.slack_days > inst.lead_time)
      out.push_back(msg("old_pool entry %lld violates 1 <= g <= d <= lead time",
                        static_cast<long long>(i)));
    if (static_cast<int>(o.vehicle.processing.size()) != k)
      out.push_back(msg("old_pool entry %lld has wrong station count",
                        static_cast<long long>(i)));
    if (o.vehicle.ready_offset < 0)
      out.push_back(msg("old_pool entry %lld ready offset negative",
                        static_cast<long long>(i)));
  }

  return out;
}

std::vector<int> positions_of(const std::vector<int>& first_stage) {
  std::vector<int> pos(first_stage.size(), 0);
  for (size_t i = 0; i < first_stage.size(); ++i) {
    int v = first_stage[i];
    if (v >= 0 && v < static_cast<int>(pos.size())) pos[v] = static_cast<int>(i) + 1;
  }
  return pos;
}

bool is_permutation_of_instance(const std::vector<int>& seq, int n_vehicles) {
  if (static_cast<int>(seq.size()) != n_vehicles) return false;
  std::vector<char> seen(n_vehicles, 0);
  for (int v : seq) {
    if (v < 0 || v >= n_vehicles || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

}  // namespace mmsr
