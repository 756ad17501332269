#include "mmsr/archive.hpp"

#include <algorithm>

namespace mmsr {

bool ParetoArchive::update(tu_sum_t wo, std::int64_t re, const Solution& solution) {
  for (const auto& e : entries_) {
    if (e.wo_total <= wo && e.re_total <= re) return false;  // dominated or duplicate
  }
  std::erase_if(entries_, [&](const ArchiveEntry& e) {
    return wo <= e.wo_total && re <= e.re_total;
  });
  ArchiveEntry entry{wo, re, solution};
  auto it = std::lower_bound(entries_.begin(), entries_.end(), entry,
                             [](const ArchiveEntry& a, const ArchiveEntry& b) {
                               if (a.wo_total != b.wo_total) return a.wo_total < b.wo_total;
                               return a.re_total < b.re_total;
                             });
  entries_.insert(it, std::move(entry));
  return true;
}

}  // namespace mmsr
