#include "mmsr/kernels.hpp"

#include <cstdlib>
#include <stdexcept>

namespace mmsr {

LoadMatrix build_load_matrix(const Instance& inst) {
  LoadMatrix m;
  m.n_stations = inst.num_stations();
  m.stride = ((m.n_stations + 7) / 8) * 8;
  m.cycle = inst.cycle;

  int total_rows = inst.num_positions() + static_cast<int>(inst.old_pool.size()) + 1;
  m.rows.assign(static_cast<size_t>(total_rows) * m.stride, 0);
  auto fill_row = [&](int row, const std::vector<tu_t>& p) {
    tu_t* dst = m.rows.data() + static_cast<size_t>(row) * m.stride;
    for (int k = 0; k < m.n_stations; ++k) dst[k] = p[k];
  };
  for (const auto& v : inst.vehicles) fill_row(v.id, v.processing);
  for (const auto& o : inst.old_pool) {
    if (o.vehicle.id < 0 || o.vehicle.id >= total_rows - 1)
      throw std::invalid_argument("old pool vehicle id collides with load matrix layout");
    fill_row(o.vehicle.id, o.vehicle.processing);
  }
  m.neutral_row = total_rows - 1;
  {
    tu_t* dst = m.rows.data() + static_cast<size_t>(m.neutral_row) * m.stride;
    for (int k = 0; k < m.n_stations; ++k) dst[k] = inst.cycle;
  }

  m.lengths.assign(m.stride, inst.cycle);
  for (int k = 0; k < m.n_stations; ++k) m.lengths[k] = inst.stations[k].length;
  return m;
}

tu_sum_t overload_run_scalar(const LoadMatrix& loads, const int* row_ids, int len,
                             int first, tu_t* z, tu_t* w_pos) {
  const int stride = loads.stride;
  const tu_t c = loads.cycle;
  const tu_t* l = loads.lengths.data();
  tu_sum_t total = 0;
  for (int t = first; t < len; ++t) {
    const tu_t* b = loads.row(row_ids[t]);
    const tu_t* zt = z + static_cast<size_t>(t) * stride;
    tu_t* zn = z + static_cast<size_t>(t + 1) * stride;
    tu_t wsum = 0;
    if (t + 1 == len) {
      for (int k = 0; k < stride; ++k) {
        tu_t zb = zt[k] + b[k];
        tu_t w = zb - c;
        if (w < 0) w = 0;
        wsum += w;
        zn[k] = 0;
      }
    } else {
      for (int k = 0; k < stride; ++k) {
        tu_t zb = zt[k] + b[k];
        tu_t w = zb - l[k];
        if (w < 0) w = 0;
        tu_t zx = zb - w - c;
        if (zx < 0) zx = 0;
        wsum += w;
        zn[k] = zx;
      }
    }
    w_pos[t] = wsum;
    total += wsum;
  }
  return total;
}

OverloadKernelFn overload_kernel() {
  static OverloadKernelFn fn = [] {
    const char* env = std::getenv("MMSR_KERNEL");
#ifdef MMSR_HAVE_AVX2
    if (env != nullptr && std::string(env) == "scalar") return &overload_run_scalar;
    if (env != nullptr && std::string(env) == "avx2") return &overload_run_avx2;
    if (__builtin_cpu_supports("avx2")) return &overload_run_avx2;
#else
    (void)env;
#endif
    return &overload_run_scalar;
  }();
  return fn;
}

std::string overload_kernel_name() {
#ifdef MMSR_HAVE_AVX2
  if (overload_kernel() == &overload_run_avx2) return "avx2";
#endif
  return "scalar";
}

}  // namespace mmsr
