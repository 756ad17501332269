#include "mmsr/archive_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mmsr/tu.hpp"

namespace mmsr {

namespace {

std::string meta_value(const std::string& line, const std::string& key) {
  const std::string needle = key + "=";
  size_t at = line.find(needle);
  if (at == std::string::npos) return "";
  size_t start = at + needle.size();
  size_t end = line.find(' ', start);
  return line.substr(start, end == std::string::npos ? std::string::npos : end - start);
}

}  // namespace

void write_archive(const std::string& path, const ArchiveMeta& meta,
                   const ParetoArchive& archive) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "# mmsr-archive v1 instance=" << meta.instance << " algo=" << meta.algo
      << " seed=" << meta.seed << " n=" << meta.sample_n << " budget=" << meta.budget
      << "\n";
  out << "wo,re,wo_total,re_total,n,first_stage,plans\n";
  char buf[64];
  for (const auto& e : archive.entries()) {
    double wo_mean = static_cast<double>(e.wo_total) /
                     (kTuScale * static_cast<double>(meta.sample_n));
    double re_mean =
        static_cast<double>(e.re_total) / static_cast<double>(meta.sample_n);
    std::snprintf(buf, sizeof(buf), "%.1f,%.6g,", wo_mean, re_mean);
    out << buf << e.wo_total << "," << e.re_total << "," << meta.sample_n << ",";
    for (size_t i = 0; i < e.solution.first_stage.size(); ++i) {
      if (i != 0) out << ' ';
      out << e.solution.first_stage[i];
    }
    out << ",";
    for (size_t s = 0; s < e.solution.plans.size(); ++s) {
      if (s != 0) out << '|';
      out << s << ':';
      // Genes are serialized as position targets in canonical failed order;
      // the vehicle ids come from the scenario context on reload.
      for (size_t i = 0; i < e.solution.plans[s].size(); ++i) {
        if (i != 0) out << ' ';
        out << e.solution.plans[s][i];
      }
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

LoadedArchive read_archive(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  LoadedArchive out;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# mmsr-archive v1", 0) != 0)
    throw std::runtime_error(path + ": not an archive file");
  out.meta.instance = meta_value(line, "instance");
  out.meta.algo = meta_value(line, "algo");
  out.meta.budget = meta_value(line, "budget");
  out.meta.seed = std::strtoull(meta_value(line, "seed").c_str(), nullptr, 10);
  out.meta.sample_n = std::atoi(meta_value(line, "n").c_str());
  if (!std::getline(in, line))  // header row
    throw std::runtime_error(path + ": missing header row");

  int lineno = 2;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    size_t pos = 0;
    while (true) {
      size_t comma = line.find(',', pos);
      fields.push_back(line.substr(pos, comma == std::string::npos ? std::string::npos
                                                                   : comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (fields.size() != 7)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad row");
    LoadedArchiveRow row;
    row.wo_total = std::strtoll(fields[2].c_str(), nullptr, 10);
    row.re_total = std::strtoll(fields[3].c_str(), nullptr, 10);
    row.sample_n = std::atoi(fields[4].c_str());
    {
      std::istringstream is(fields[5]);
      int v;
      while (is >> v) row.first_stage.push_back(v);
    }
    {
      size_t at = 0;
      const std::string& plans = fields[6];
      while (at < plans.size()) {
        size_t bar = plans.find('|', at);
        std::string part =
            plans.substr(at, bar == std::string::npos ? std::string::npos : bar - at);
        size_t colon = part.find(':');
        if (colon == std::string::npos)
          throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                   ": bad plan serialization");
        ReinsertionPlan plan;
        std::istringstream is(part.substr(colon + 1));
        int target;
        while (is >> target) plan.push_back(target);
        row.plans.push_back(std::move(plan));
        if (bar == std::string::npos) break;
        at = bar + 1;
      }
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace mmsr
