#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mmsr/archive.hpp"
#include "mmsr/model.hpp"

namespace mmsr {

struct ArchiveMeta {
  std::string instance;
  std::string algo;
  std::string budget;
  std::uint64_t seed = 0;
  int sample_n = 1;
};

void write_archive(const std::string& path, const ArchiveMeta& meta,
                   const ParetoArchive& archive);

struct LoadedArchiveRow {
  tu_sum_t wo_total = 0;
  std::int64_t re_total = 0;
  int sample_n = 1;
  std::vector<int> first_stage;
  std::vector<ReinsertionPlan> plans;  // targets in canonical failed order
};

struct LoadedArchive {
  ArchiveMeta meta;
  std::vector<LoadedArchiveRow> rows;
};

LoadedArchive read_archive(const std::string& path);

}  // namespace mmsr
