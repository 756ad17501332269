#pragma once

#include <string>
#include <vector>

#include "mmsr/model.hpp"

namespace mmsr {

// Station loads padded to 8-lane groups so one vector op covers all stations
// of a position. Row i < total vehicle count is that vehicle's processing
// times; the extra final row is the neutral vehicle (cycle at every station,
// zero in padding lanes).
struct LoadMatrix {
  int n_stations = 0;
  int stride = 8;
  int neutral_row = 0;
  tu_t cycle = 0;
  std::vector<tu_t> rows;     // (rows_count) x stride
  std::vector<tu_t> lengths;  // stride entries, padded with the cycle

  const tu_t* row(int idx) const { return rows.data() + static_cast<size_t>(idx) * stride; }
  int row_of_vehicle(int vehicle_id) const { return vehicle_id; }
};

LoadMatrix build_load_matrix(const Instance& instance);

// Runs the overload recursion over positions [first, len) of a final sequence
// described by per-position row ids into `loads`.
//   z:     (len + 1) * stride entries; the caller fills row `first` with the
//          operator start state entering that position; rows first+1..len are
//          written (row len is the regenerative all-zero state).
//   w_pos: per-position overload summed across stations, entries [first, len).
// Returns the sum of w_pos over [first, len). The last position uses the
// regenerative rule w = max(0, z + b - c); earlier positions use
// w = max(0, z + b - l), z' = max(0, z + b - w - c).
using OverloadKernelFn = tu_sum_t (*)(const LoadMatrix& loads, const int* row_ids,
                                      int len, int first, tu_t* z, tu_t* w_pos);

tu_sum_t overload_run_scalar(const LoadMatrix& loads, const int* row_ids, int len,
                             int first, tu_t* z, tu_t* w_pos);

#ifdef MMSR_HAVE_AVX2
tu_sum_t overload_run_avx2(const LoadMatrix& loads, const int* row_ids, int len,
                           int first, tu_t* z, tu_t* w_pos);
#endif

// Best kernel for this machine; MMSR_KERNEL=scalar|avx2 overrides.
OverloadKernelFn overload_kernel();
std::string overload_kernel_name();

}  // namespace mmsr
