#pragma once
// Direct construction of the limit process: reflect W(s) + lambda s - s^2/2 at
// its running minimum and read excursion lengths off the positive part, with
// Poisson(area) marks per excursion.
#include <cstdint>
#include <vector>

#include "critwin/points.hpp"

namespace critwin {

struct PathConfig {
    double step = 5e-5;          // Euler step h; must satisfy h <= min_excursion/20
    double horizon = 0.0;        // 0 = auto_horizon(lambda)
    std::uint64_t seed = 1;
    double min_excursion = 0.05; // record only excursions at least this long
    bool noise = true;           // false: drift only (test hook)
};

struct ExcursionRecord {
    double start;
    double length;
    double area; // trapezoidal integral of the reflected path over the excursion
    int mark_count;
};

// past the drift parabola's peak and 4 units into decay: drift(T) <= -(lambda^2/2 + 4)
double auto_horizon(double lambda);

// one path, replication `rep` of cfg.seed's family; runs past the horizon
// until any open excursion closes
std::vector<ExcursionRecord> sample_excursions(double lambda, const PathConfig& cfg,
                                               std::uint64_t rep = 0);

// lengths sorted nonincreasing, labels = mark counts
PointSample excursion_point_sample(const std::vector<ExcursionRecord>& records);

} // namespace critwin
