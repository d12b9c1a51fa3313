#pragma once
// G(n, p) at p = 1/n + lambda n^{-4/3}: sparse edge sampling, component
// extraction, and the empirical statistics that the analytic modules predict.
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "critwin/points.hpp"

namespace critwin {

struct WindowConfig {
    std::int64_t n = 1000;
    double lambda = 0.0;
    std::uint64_t seed = 1;
    std::int64_t replications = 1;
};

struct ComponentSummary {
    std::int64_t size;
    std::int64_t edges;
    std::int64_t complexity; // edges - size + 1; 0 = tree, 1 = unicyclic
    double scaled_size;      // n^{-2/3} size
};

struct EmpiricalStats {
    double z_eps = 0.0;         // sum of scaled sizes >= eps
    std::int64_t chi_eps = 0;   // how many there are
    PointSample labeled_points; // those points, nonincreasing, with complexity labels
    std::map<int, std::int64_t> per_label_counts;
};

double edge_probability(std::int64_t n, double lambda); // throws if outside (0,1)

// one draw, replication `rep` of cfg.seed's family; components sorted by
// size nonincreasing, ties broken by smallest contained vertex
std::vector<ComponentSummary> sample_components(const WindowConfig& cfg, std::uint64_t rep);

// closed threshold: scaled size >= eps.  open_threshold switches to > eps.
EmpiricalStats empirical_stats(const std::vector<ComponentSummary>& components,
                               double eps, std::int64_t n, bool open_threshold = false);

struct TreeUnicyclicRow {
    std::int64_t k;
    double t_k; // expected count of k-vertex tree components
    double u_k; // expected count of k-vertex unicyclic components
};
std::vector<TreeUnicyclicRow> tree_unicyclic_expectations(std::int64_t n, double lambda,
                                                          std::int64_t k_max);

struct LabelFrequencies {
    std::map<int, double> frequency; // per complexity label, sums to 1
    std::int64_t observed = 0;       // components that fell in the window
    bool sufficient = false;         // at least 100 observed
};
LabelFrequencies label_frequency_check(const WindowConfig& cfg, double window_lo,
                                       double window_hi);

namespace detail {
// component extraction from an explicit edge list (test hook; sample_components
// routes through this after skip-sampling)
std::vector<ComponentSummary> components_from_edges(
    std::int64_t n, const std::vector<std::pair<std::int64_t, std::int64_t>>& edges);
// number of connected unicyclic graphs on k labeled vertices:
//   (1/2) sum_{r=3}^{k} k! / (k-r)! * k^{k-r-1}
double log_unicyclic_count(std::int64_t k);
} // namespace detail

} // namespace critwin
