#pragma once

#include <cstdint>
#include <vector>

#include "mmsr/model.hpp"

namespace mmsr {

struct ArchiveEntry {
  tu_sum_t wo_total = 0;
  std::int64_t re_total = 0;
  Solution solution;
};

// Mutually non-dominated set of feasible solutions, kept sorted by
// (wo, re). Equal objective pairs are kept once.
class ParetoArchive {
 public:
  // Rejects dominated or duplicate candidates, evicts entries the candidate
  // dominates. Returns true when the candidate entered the archive.
  bool update(tu_sum_t wo_total, std::int64_t re_total, const Solution& solution);

  const std::vector<ArchiveEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<ArchiveEntry> entries_;
};

}  // namespace mmsr
