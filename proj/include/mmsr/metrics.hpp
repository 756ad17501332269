#pragma once

#include <vector>

#include "mmsr/model.hpp"

namespace mmsr {

using Front = std::vector<ObjectivePoint>;

struct NormalizationBounds {
  double wo_min = 0.0, wo_max = 0.0;
  double re_min = 0.0, re_max = 0.0;
};

// Min/max per objective over the union of the given fronts.
NormalizationBounds compute_bounds(const std::vector<Front>& fronts);

// (v - min) / (max - min); a zero-range objective maps to 0.
Front normalize(const Front& points, const NormalizationBounds& bounds);

// Fraction of Y weakly dominated by some point of X. Throws on empty Y.
double css(const Front& x, const Front& y);

// Mean Euclidean distance to the ideal point.
double mid(const Front& front, const ObjectivePoint& ideal);

// Sample standard deviation (n-1) of the distances around their mean;
// singleton fronts yield 0.
double sns(const Front& front, const ObjectivePoint& ideal);

// Front size after collapsing duplicate objective pairs.
int nns(const Front& front);

// Boundary of the region weakly attained by at least ceil(level * #runs)
// runs, as a monotone staircase over the observed first-objective grid.
Front eaf_surface(const std::vector<Front>& runs, double level);

}  // namespace mmsr
