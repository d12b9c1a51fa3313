#pragma once
// Labeled point collections shared by the two samplers and the record layer.
#include <vector>

namespace critwin {

struct LabeledPoint {
    double x;  // scaled size / excursion length
    int label; // complexity (graph) or Poisson mark count (excursions)
};

// sorted nonincreasing by x
using PointSample = std::vector<LabeledPoint>;

} // namespace critwin
