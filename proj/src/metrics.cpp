#include "mmsr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace mmsr {

NormalizationBounds compute_bounds(const std::vector<Front>& fronts) {
  NormalizationBounds b;
  bool first = true;
  for (const auto& front : fronts) {
    for (const auto& p : front) {
      if (first) {
        b = {p.wo, p.wo, p.re, p.re};
        first = false;
        continue;
      }
      b.wo_min = std::min(b.wo_min, p.wo);
      b.wo_max = std::max(b.wo_max, p.wo);
      b.re_min = std::min(b.re_min, p.re);
      b.re_max = std::max(b.re_max, p.re);
    }
  }
  return b;
}

Front normalize(const Front& points, const NormalizationBounds& b) {
  Front out;
  out.reserve(points.size());
  double wo_range = b.wo_max - b.wo_min;
  double re_range = b.re_max - b.re_min;
  for (const auto& p : points) {
    ObjectivePoint q;
    q.wo = wo_range > 0.0 ? (p.wo - b.wo_min) / wo_range : 0.0;
    q.re = re_range > 0.0 ? (p.re - b.re_min) / re_range : 0.0;
    out.push_back(q);
  }
  return out;
}

double css(const Front& x, const Front& y) {
  if (y.empty()) throw std::invalid_argument("css of an empty reference front");
  int covered = 0;
  for (const auto& b : y) {
    for (const auto& a : x) {
      if (a.wo <= b.wo && a.re <= b.re) {
        ++covered;
        break;
      }
    }
  }
  return static_cast<double>(covered) / static_cast<double>(y.size());
}

namespace {

std::vector<double> ideal_distances(const Front& front, const ObjectivePoint& ideal) {
  std::vector<double> d;
  d.reserve(front.size());
  for (const auto& p : front)
    d.push_back(std::hypot(p.wo - ideal.wo, p.re - ideal.re));
  return d;
}

Front dedupe(const Front& front) {
  std::set<std::pair<double, double>> seen;
  Front out;
  for (const auto& p : front)
    if (seen.insert({p.wo, p.re}).second) out.push_back(p);
  return out;
}

}  // namespace

double mid(const Front& front, const ObjectivePoint& ideal) {
  if (front.empty()) throw std::invalid_argument("mid of an empty front");
  auto d = ideal_distances(front, ideal);
  double sum = 0.0;
  for (double v : d) sum += v;
  return sum / static_cast<double>(d.size());
}

double sns(const Front& front, const ObjectivePoint& ideal) {
  if (front.empty()) throw std::invalid_argument("sns of an empty front");
  if (front.size() == 1) return 0.0;
  auto d = ideal_distances(front, ideal);
  double mean = 0.0;
  for (double v : d) mean += v;
  mean /= static_cast<double>(d.size());
  double ss = 0.0;
  for (double v : d) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(d.size() - 1));
}

int nns(const Front& front) { return static_cast<int>(dedupe(front).size()); }

Front eaf_surface(const std::vector<Front>& runs, double level) {
  if (runs.empty()) throw std::invalid_argument("eaf of zero runs");
  if (level <= 0.0 || level > 1.0) throw std::invalid_argument("eaf level outside (0,1]");
  const int need = static_cast<int>(std::ceil(level * static_cast<double>(runs.size())));

  // Per run, the best (lowest) second objective among points with first
  // objective <= x, evaluated on the merged grid of observed x values.
  std::vector<Front> sorted_runs(runs);
  std::set<double> xs_set;
  for (auto& r : sorted_runs) {
    std::sort(r.begin(), r.end(), [](const ObjectivePoint& a, const ObjectivePoint& b) {
      return a.wo < b.wo;
    });
    for (const auto& p : r) xs_set.insert(p.wo);
  }
  std::vector<double> xs(xs_set.begin(), xs_set.end());

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<size_t> cursor(sorted_runs.size(), 0);
  std::vector<double> best_re(sorted_runs.size(), inf);
  Front surface;
  double last_y = inf;
  for (double x : xs) {
    std::vector<double> ys;
    ys.reserve(sorted_runs.size());
    for (size_t r = 0; r < sorted_runs.size(); ++r) {
      while (cursor[r] < sorted_runs[r].size() && sorted_runs[r][cursor[r]].wo <= x) {
        best_re[r] = std::min(best_re[r], sorted_runs[r][cursor[r]].re);
        ++cursor[r];
      }
      ys.push_back(best_re[r]);
    }
    std::sort(ys.begin(), ys.end());
    double y = ys[need - 1];
    if (y == inf) continue;
    if (surface.empty() || y < last_y) {
      surface.push_back({x, y});
      last_y = y;
    }
  }
  return surface;
}

}  // namespace mmsr
