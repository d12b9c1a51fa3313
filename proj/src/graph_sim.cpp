#include "critwin/graph_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "critwin/parallel.hpp"
#include "critwin/rng.hpp"

namespace critwin {

double edge_probability(std::int64_t n, double lambda) {
    if (n < 1000)
        throw std::invalid_argument("edge_probability: n must be >= 1000");
    double nd = static_cast<double>(n);
    double p = 1.0 / nd + lambda / (nd * std::cbrt(nd));
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("edge_probability: p = 1/n + lambda n^{-4/3} outside (0,1)");
    return p;
}

namespace detail {

double log_unicyclic_count(std::int64_t k) {
    if (k < 3)
        return -std::numeric_limits<double>::infinity();
    double kd = static_cast<double>(k);
    double logk = std::log(kd);
    double lgk1 = std::lgamma(kd + 1.0);
    double peak = -std::numeric_limits<double>::infinity();
    std::vector<double> lt;
    lt.reserve(static_cast<size_t>(k - 2));
    for (std::int64_t r = 3; r <= k; ++r) {
        double v = lgk1 - std::lgamma(static_cast<double>(k - r) + 1.0)
                 + static_cast<double>(k - r - 1) * logk;
        lt.push_back(v);
        peak = std::max(peak, v);
    }
    double acc = 0.0;
    for (double v : lt)
        acc += std::exp(v - peak);
    return std::log(0.5) + peak + std::log(acc);
}

std::vector<ComponentSummary> components_from_edges(
    std::int64_t n, const std::vector<std::pair<std::int64_t, std::int64_t>>& edges) {
    if (n < 1 || n > std::numeric_limits<std::int32_t>::max())
        throw std::invalid_argument("components_from_edges: n out of range");
    auto nn = static_cast<std::int32_t>(n);
    std::vector<std::int32_t> parent(static_cast<size_t>(nn));
    std::vector<std::int32_t> csize(static_cast<size_t>(nn), 1);
    std::vector<std::int32_t> cedges(static_cast<size_t>(nn), 0);
    for (std::int32_t v = 0; v < nn; ++v)
        parent[static_cast<size_t>(v)] = v;

    auto find = [&](std::int32_t v) {
        while (parent[static_cast<size_t>(v)] != v) {
            parent[static_cast<size_t>(v)] = parent[static_cast<size_t>(parent[static_cast<size_t>(v)])];
            v = parent[static_cast<size_t>(v)];
        }
        return v;
    };

    for (const auto& [ia, ja] : edges) {
        if (ia < 0 || ja < 0 || ia >= n || ja >= n || ia == ja)
            throw std::invalid_argument("components_from_edges: bad edge");
        std::int32_t a = find(static_cast<std::int32_t>(ia));
        std::int32_t b = find(static_cast<std::int32_t>(ja));
        if (a == b) {
            ++cedges[static_cast<size_t>(a)]; // cycle edge raises complexity
            continue;
        }
        if (csize[static_cast<size_t>(a)] < csize[static_cast<size_t>(b)])
            std::swap(a, b);
        parent[static_cast<size_t>(b)] = a;
        csize[static_cast<size_t>(a)] += csize[static_cast<size_t>(b)];
        cedges[static_cast<size_t>(a)] += cedges[static_cast<size_t>(b)] + 1;
    }

    double scale = std::pow(static_cast<double>(n), -2.0 / 3.0);
    std::vector<ComponentSummary> out;
    std::vector<std::uint8_t> seen(static_cast<size_t>(nn), 0);
    for (std::int32_t v = 0; v < nn; ++v) {
        std::int32_t r = find(v);
        if (seen[static_cast<size_t>(r)])
            continue;
        seen[static_cast<size_t>(r)] = 1;
        std::int64_t sz = csize[static_cast<size_t>(r)];
        std::int64_t ed = cedges[static_cast<size_t>(r)];
        out.push_back({sz, ed, ed - sz + 1, static_cast<double>(sz) * scale});
    }
    // first-seen order is ascending by smallest contained vertex; keep it on ties
    std::stable_sort(out.begin(), out.end(),
                     [](const ComponentSummary& a, const ComponentSummary& b) {
                         return a.size > b.size;
                     });
    return out;
}

} // namespace detail

std::vector<ComponentSummary> sample_components(const WindowConfig& cfg, std::uint64_t rep) {
    double p = edge_probability(cfg.n, cfg.lambda);
    Pcg64 rng(cfg.seed, rep);

    double log1mp = std::log1p(-p);
    std::int64_t pairs = cfg.n * (cfg.n - 1) / 2;
    std::vector<std::pair<std::int64_t, std::int64_t>> edges;
    edges.reserve(static_cast<size_t>(static_cast<double>(pairs) * p * 1.1) + 16);

    // geometric skip over the lexicographic pair sequence; row i starts at
    // offset(i) = i (2n - i - 1) / 2
    auto offset = [n = cfg.n](std::int64_t i) { return i * (2 * n - i - 1) / 2; };
    std::int64_t m = -1;
    while (true) {
        double u = rng.uniform();
        auto gap = static_cast<std::int64_t>(std::floor(std::log(u) / log1mp)) + 1;
        m += gap;
        if (m >= pairs)
            break;
        double nd = static_cast<double>(cfg.n);
        double md = static_cast<double>(m);
        auto i = static_cast<std::int64_t>(
            std::floor((2.0 * nd - 1.0 - std::sqrt((2.0 * nd - 1.0) * (2.0 * nd - 1.0)
                                                   - 8.0 * md)) / 2.0));
        i = std::clamp<std::int64_t>(i, 0, cfg.n - 2);
        while (i > 0 && offset(i) > m)
            --i;
        while (i < cfg.n - 2 && offset(i + 1) <= m)
            ++i;
        std::int64_t j = i + 1 + (m - offset(i));
        edges.emplace_back(i, j);
    }
    return detail::components_from_edges(cfg.n, edges);
}

EmpiricalStats empirical_stats(const std::vector<ComponentSummary>& components,
                               double eps, std::int64_t n, bool open_threshold) {
    (void)n; // sizes arrive already scaled; kept for interface symmetry
    EmpiricalStats st;
    for (const auto& c : components) {
        bool in = open_threshold ? c.scaled_size > eps : c.scaled_size >= eps;
        if (!in)
            continue;
        st.z_eps += c.scaled_size;
        st.chi_eps += 1;
        st.labeled_points.push_back({c.scaled_size, static_cast<int>(c.complexity)});
        st.per_label_counts[static_cast<int>(c.complexity)] += 1;
    }
    std::stable_sort(st.labeled_points.begin(), st.labeled_points.end(),
                     [](const LabeledPoint& a, const LabeledPoint& b) { return a.x > b.x; });
    return st;
}

std::vector<TreeUnicyclicRow> tree_unicyclic_expectations(std::int64_t n, double lambda,
                                                          std::int64_t k_max) {
    double p = edge_probability(n, lambda);
    double nd = static_cast<double>(n);
    if (k_max < 1 || static_cast<double>(k_max) > std::cbrt(nd) * std::cbrt(nd))
        throw std::invalid_argument("tree_unicyclic_expectations: k_max outside [1, n^{2/3}]");

    double logp = std::log(p);
    double log1mp = std::log1p(-p);
    double lgn1 = std::lgamma(nd + 1.0);
    std::vector<TreeUnicyclicRow> rows;
    rows.reserve(static_cast<size_t>(k_max));
    for (std::int64_t k = 1; k <= k_max; ++k) {
        double kd = static_cast<double>(k);
        double log_choose = lgn1 - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0);
        double absent = (nd - kd) * kd + 0.5 * kd * (kd - 1.0) - kd + 1.0;
        double log_t = log_choose + (kd - 2.0) * std::log(kd) + (kd - 1.0) * logp
                     + absent * log1mp;
        double log_u = detail::log_unicyclic_count(k) - (kd - 2.0) * std::log(kd)
                     + logp - log1mp + log_t;
        rows.push_back({k, std::exp(log_t), std::exp(log_u)});
    }
    return rows;
}

LabelFrequencies label_frequency_check(const WindowConfig& cfg, double window_lo,
                                       double window_hi) {
    if (!(0.0 < window_lo && window_lo < window_hi))
        throw std::invalid_argument("label_frequency_check: need 0 < lo < hi");
    if (cfg.replications < 1)
        throw std::invalid_argument("label_frequency_check: needs replications >= 1");

    auto reps = static_cast<std::size_t>(cfg.replications);
    std::vector<std::map<int, std::int64_t>> slot(reps);
    parallel_for(reps, [&](std::size_t r) {
        auto comps = sample_components(cfg, r);
        for (const auto& c : comps)
            if (c.scaled_size >= window_lo && c.scaled_size <= window_hi)
                slot[r][static_cast<int>(c.complexity)] += 1;
    });

    std::map<int, std::int64_t> counts;
    std::int64_t total = 0;
    for (const auto& s : slot)
        for (const auto& [label, cnt] : s) {
            counts[label] += cnt;
            total += cnt;
        }

    LabelFrequencies out;
    out.observed = total;
    out.sufficient = total >= 100;
    for (const auto& [label, cnt] : counts)
        out.frequency[label] = static_cast<double>(cnt) / static_cast<double>(total);
    return out;
}

} // namespace critwin
