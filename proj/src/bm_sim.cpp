#include "critwin/bm_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "critwin/rng.hpp"

namespace critwin {

double auto_horizon(double lambda) {
    double decay = 8.0 / std::cbrt(std::max(1.0, std::abs(lambda)));
    return std::max(12.0, 2.0 * lambda + decay + 4.0);
}

std::vector<ExcursionRecord> sample_excursions(double lambda, const PathConfig& cfg,
                                               std::uint64_t rep) {
    if (!(cfg.step > 0.0) || !(cfg.min_excursion > 0.0))
        throw std::invalid_argument("sample_excursions: step and min_excursion must be > 0");
    if (cfg.step > cfg.min_excursion / 20.0)
        throw std::invalid_argument("sample_excursions: step must be <= min_excursion/20");
    double T = cfg.horizon > 0.0 ? cfg.horizon : auto_horizon(lambda);
    if (lambda * T - 0.5 * T * T > -(0.5 * lambda * lambda + 4.0))
        throw std::invalid_argument("sample_excursions: horizon not past the drift peak");

    Pcg64 rng(cfg.seed, rep);
    double h = cfg.step;
    double sqrt_h = std::sqrt(h);

    std::vector<ExcursionRecord> out;
    double w = 0.0;      // Brownian part
    double run_min = 0.0;
    double b_prev = 0.0;
    bool inside = false;
    double start = 0.0, area = 0.0;
    std::int64_t steps_in = 0;

    double hard_stop = 4.0 * T + 128.0;
    std::int64_t i = 0;
    while (true) {
        ++i;
        double s = static_cast<double>(i) * h;
        if (!inside && s > T)
            break;
        if (s > hard_stop)
            break; // drops an astronomically unlikely never-closing excursion
        if (cfg.noise)
            w += sqrt_h * rng.normal();
        double v = w + s * (lambda - 0.5 * s); // drift applied exactly
        run_min = std::min(run_min, v);
        double b = v - run_min;
        if (b > 0.0) {
            if (!inside) {
                inside = true;
                start = s;
                area = 0.0;
                steps_in = 0;
            }
            area += 0.5 * (b_prev + b) * h;
            ++steps_in;
        } else if (inside) {
            inside = false;
            area += 0.5 * b_prev * h; // closing trapezoid down to zero
            double len = static_cast<double>(steps_in) * h;
            if (len >= cfg.min_excursion) {
                int marks = static_cast<int>(rng.poisson(area));
                out.push_back({start, len, area, marks});
            }
        }
        b_prev = b;
    }
    return out;
}

PointSample excursion_point_sample(const std::vector<ExcursionRecord>& records) {
    PointSample pts;
    pts.reserve(records.size());
    for (const auto& r : records)
        pts.push_back({r.length, r.mark_count});
    std::stable_sort(pts.begin(), pts.end(),
                     [](const LabeledPoint& a, const LabeledPoint& b) { return a.x > b.x; });
    return pts;
}

} // namespace critwin
