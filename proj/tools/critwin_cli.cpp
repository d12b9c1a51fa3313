#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "critwin/bm_sim.hpp"
#include "critwin/branching.hpp"
#include "critwin/errors.hpp"
#include "critwin/extremes.hpp"
#include "critwin/graph_sim.hpp"
#include "critwin/intensity.hpp"
#include "critwin/moments.hpp"
#include "critwin/parallel.hpp"
#include "critwin/records.hpp"

namespace {

using namespace critwin;

constexpr double kPi = 3.14159265358979323846;

void emit(const ExperimentManifest& m, const Table& t) {
    if (m.output_path.empty())
        std::cout << render_table(m, t);
    else
        write_table(m.output_path, m, t);
}

std::vector<double> linspace(double lo, double hi, std::int64_t points) {
    if (points < 1)
        throw std::invalid_argument("grid needs at least one point");
    std::vector<double> xs;
    xs.reserve(static_cast<size_t>(points));
    if (points == 1) {
        xs.push_back(lo);
        return xs;
    }
    for (std::int64_t i = 0; i < points; ++i)
        xs.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
    return xs;
}

struct SimCommon {
    std::int64_t n = 100000;
    double lambda = 0.0;
    double eps = 0.1;
    std::int64_t reps = 10;
    std::uint64_t seed = 1;
};

std::vector<SimRecord> run_graph(const SimCommon& sc) {
    WindowConfig cfg{sc.n, sc.lambda, sc.seed, sc.reps};
    std::vector<SimRecord> recs(static_cast<size_t>(sc.reps));
    parallel_for(recs.size(), [&](std::size_t r) {
        auto comps = sample_components(cfg, r);
        auto st = empirical_stats(comps, sc.eps, sc.n);
        recs[r] = {"graph",  sc.seed,   sc.n,       sc.lambda, sc.eps,
                   static_cast<std::int64_t>(r), st.z_eps, st.chi_eps, st.labeled_points};
    });
    return recs;
}

struct BmExtra {
    double step = 5e-5;
    double horizon = 0.0;
    double min_excursion = 0.05;
};

std::vector<SimRecord> run_bm(const SimCommon& sc, const BmExtra& bx) {
    PathConfig pc{bx.step, bx.horizon, sc.seed, bx.min_excursion, true};
    std::vector<SimRecord> recs(static_cast<size_t>(sc.reps));
    parallel_for(recs.size(), [&](std::size_t r) {
        auto ex = sample_excursions(sc.lambda, pc, r);
        auto pts = excursion_point_sample(ex);
        SimRecord rec;
        rec.sampler = "bm";
        rec.seed = sc.seed;
        rec.n = 0;
        rec.lambda = sc.lambda;
        rec.eps = sc.eps;
        rec.rep = static_cast<std::int64_t>(r);
        for (const auto& p : pts)
            if (p.x >= sc.eps) {
                rec.z_eps += p.x;
                rec.chi_eps += 1;
                rec.points.push_back(p);
            }
        recs[r] = std::move(rec);
    });
    return recs;
}

void mean_var(const std::vector<double>& v, double* mean, double* var) {
    double s = 0.0;
    for (double x : v)
        s += x;
    *mean = s / static_cast<double>(v.size());
    double q = 0.0;
    for (double x : v)
        q += (x - *mean) * (x - *mean);
    *var = v.size() > 1 ? q / static_cast<double>(v.size() - 1) : 0.0;
}

int run(int argc, char** argv) {
    CLI::App app{"critical-window component-size toolkit"};
    app.require_subcommand(1);

    std::string out;
    std::string format = "csv";
    double abs_tol = 1e-9, rel_tol = 1e-8;
    auto add_common = [&](CLI::App* sub, bool with_tols = true) {
        sub->add_option("--out", out, "output file (stdout if omitted)");
        sub->add_option("--format", format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        if (with_tols) {
            sub->add_option("--abs-tol", abs_tol, "quadrature absolute tolerance");
            sub->add_option("--rel-tol", rel_tol, "quadrature relative tolerance");
        }
    };
    auto base_manifest = [&](const std::string& cmd) {
        ExperimentManifest m;
        m.command = cmd;
        m.output_path = out;
        m.format = format;
        m.tolerances["abs_tol"] = abs_tol;
        m.tolerances["rel_tol"] = rel_tol;
        return m;
    };
    auto quad_spec = [&] {
        QuadratureSpec s;
        s.abs_tol = abs_tol;
        s.rel_tol = rel_tol;
        return s;
    };

    // intensity: tabulate the total intensity, per-label intensities and the
    // label distribution over an x-grid
    double lambda = 0.0, eps = 0.01;
    double x_min = 0.1, x_max = 3.0;
    std::int64_t points = 30, labels = 3;
    auto* c_int = app.add_subcommand("intensity", "tabulate point intensities over x");
    c_int->add_option("--lambda", lambda, "window location");
    c_int->add_option("--x-min", x_min, "grid start")->check(CLI::PositiveNumber);
    c_int->add_option("--x-max", x_max, "grid end");
    c_int->add_option("--points", points, "grid size");
    c_int->add_option("--labels", labels, "label columns to emit")->check(CLI::Range(1, 32));
    add_common(c_int, false);
    c_int->callback([&] {
        auto m = base_manifest("intensity");
        m.lambda = lambda;
        m.tolerances["x_min"] = x_min;
        m.tolerances["x_max"] = x_max;
        m.tolerances["grid_points"] = static_cast<double>(points);
        m.tolerances["labels"] = static_cast<double>(labels);
        IntensityParams ip;
        ip.lambda = lambda;
        Table t;
        t.columns = {"x", "intensity_total"};
        for (std::int64_t l = 0; l < labels; ++l)
            t.columns.push_back("intensity_label_" + std::to_string(l));
        for (std::int64_t l = 0; l < labels; ++l)
            t.columns.push_back("label_mass_" + std::to_string(l));
        t.columns.push_back("label_tail_mass");
        for (double x : linspace(x_min, x_max, points)) {
            std::vector<double> row{x, intensity_total(x, ip)};
            for (std::int64_t l = 0; l < labels; ++l)
                row.push_back(intensity_label(x, static_cast<int>(l), ip));
            auto ld = label_distribution(x, ip);
            for (std::int64_t l = 0; l < labels; ++l)
                row.push_back(ld.masses[static_cast<size_t>(l)]);
            row.push_back(ld.tail_mass);
            t.rows.push_back(std::move(row));
        }
        emit(m, t);
    });

    // weight-moments: exact E zeta / Var zeta next to the small-eps forms
    auto* c_wm = app.add_subcommand("weight-moments", "weight of points above eps");
    c_wm->add_option("--lambda", lambda, "window location");
    c_wm->add_option("--eps", eps, "threshold")->check(CLI::PositiveNumber);
    add_common(c_wm);
    c_wm->callback([&] {
        auto m = base_manifest("weight-moments");
        m.lambda = lambda;
        m.eps = eps;
        IntensityParams ip;
        ip.lambda = lambda;
        auto spec = quad_spec();
        double ew = expected_weight(eps, ip, spec);
        double asym = u_eps(lambda, eps, spec);
        double wv = weight_variance(eps, ip, spec);
        double var_asym = std::sqrt(2.0 / kPi) * std::sqrt(eps); // critical small-eps scale
        Table t;
        t.columns = {"eps",           "expected_weight", "u_eps_asym", "weight_delta",
                     "weight_variance", "var_smalleps_asym", "var_delta"};
        t.rows.push_back({eps, ew, asym, ew - asym, wv, var_asym, wv - var_asym});
        emit(m, t);
    });

    // count-moments: exact E chi / Var chi next to the small-eps forms
    auto* c_cm = app.add_subcommand("count-moments", "number of points above eps");
    c_cm->add_option("--lambda", lambda, "window location");
    c_cm->add_option("--eps", eps, "threshold")->check(CLI::PositiveNumber);
    add_common(c_cm);
    c_cm->callback([&] {
        auto m = base_manifest("count-moments");
        m.lambda = lambda;
        m.eps = eps;
        IntensityParams ip;
        ip.lambda = lambda;
        auto spec = quad_spec();
        double ec = expected_count(eps, ip, spec);
        double asym = std::sqrt(2.0 / (9.0 * kPi)) * std::pow(eps, -1.5); // critical scale
        double cv = count_variance(eps, ip, spec);
        Table t;
        t.columns = {"eps", "expected_count", "count_smalleps_asym", "count_delta",
                     "count_variance", "variance_over_mean"};
        t.rows.push_back({eps, ec, asym, ec - asym, cv, cv / ec});
        emit(m, t);
    });

    // factorial-moments
    std::int64_t k_max = 4;
    auto* c_fm = app.add_subcommand("factorial-moments", "M_k of the count above eps");
    c_fm->add_option("--lambda", lambda, "window location");
    c_fm->add_option("--eps", eps, "threshold a")->check(CLI::PositiveNumber);
    c_fm->add_option("--k-max", k_max, "highest moment")->check(CLI::Range(0, 64));
    add_common(c_fm);
    c_fm->callback([&] {
        auto m = base_manifest("factorial-moments");
        m.lambda = lambda;
        m.eps = eps;
        m.tolerances["k_max"] = static_cast<double>(k_max);
        auto fm = factorial_moments(lambda, eps, static_cast<int>(k_max), quad_spec());
        Table t;
        t.columns = {"k", "m_k", "certified_abs_err"};
        for (size_t k = 0; k < fm.values.size(); ++k)
            t.rows.push_back({static_cast<double>(k), fm.values[k], fm.certified_abs_err[k]});
        emit(m, t);
    });

    // largest-cdf: P(largest <= x) and k-th largest densities over a grid
    std::int64_t kcols = 1;
    auto* c_lc = app.add_subcommand("largest-cdf", "distribution of the largest points");
    c_lc->add_option("--lambda", lambda, "window location");
    c_lc->add_option("--x-min", x_min, "grid start")->check(CLI::PositiveNumber);
    c_lc->add_option("--x-max", x_max, "grid end");
    c_lc->add_option("--points", points, "grid size");
    c_lc->add_option("--k", kcols, "density columns h_1..h_k")->check(CLI::Range(1, 8));
    add_common(c_lc);
    c_lc->callback([&] {
        auto m = base_manifest("largest-cdf");
        m.lambda = lambda;
        m.tolerances["x_min"] = x_min;
        m.tolerances["x_max"] = x_max;
        m.tolerances["grid_points"] = static_cast<double>(points);
        m.tolerances["k"] = static_cast<double>(kcols);
        auto spec = quad_spec();
        Table t;
        t.columns = {"x", "largest_cdf"};
        for (std::int64_t k = 1; k <= kcols; ++k)
            t.columns.push_back("h_" + std::to_string(k));
        for (double x : linspace(x_min, x_max, points)) {
            std::vector<double> row{x, largest_cdf(x, lambda, spec)};
            for (std::int64_t k = 1; k <= kcols; ++k)
                row.push_back(kth_largest_density(static_cast<int>(k), x, lambda, spec));
            t.rows.push_back(std::move(row));
        }
        emit(m, t);
    });

    // branching: u_eps in both forms plus a Borel pmf table
    double mean = 1.0;
    auto* c_br = app.add_subcommand("branching", "progeny law and u_eps");
    c_br->add_option("--lambda", lambda, "u_eps location");
    c_br->add_option("--eps", eps, "u_eps threshold")->check(CLI::PositiveNumber);
    c_br->add_option("--mean", mean, "Borel offspring mean")->check(CLI::PositiveNumber);
    c_br->add_option("--k-max", k_max, "Borel table size")->check(CLI::Range(1, 100000));
    add_common(c_br);
    c_br->callback([&] {
        auto m = base_manifest("branching");
        m.lambda = lambda;
        m.eps = eps;
        m.tolerances["mean"] = mean;
        m.tolerances["k_max"] = static_cast<double>(k_max);
        auto spec = quad_spec();
        double u1 = u_eps(lambda, eps, spec);
        double u2 = u_eps_smallx(lambda, eps, spec);
        Table t;
        t.columns = {"k", "borel_pmf", "u_eps", "u_eps_smallx"};
        for (std::int64_t k = 1; k <= k_max; ++k)
            t.rows.push_back({static_cast<double>(k), borel_pmf(k, mean), u1, u2});
        emit(m, t);
    });

    // simulate-graph
    SimCommon sc;
    auto* c_sg = app.add_subcommand("simulate-graph", "G(n,p) replications to JSON-lines");
    c_sg->add_option("--n", sc.n, "vertex count")->check(CLI::Range(std::int64_t{1000}, std::int64_t{100000000}));
    c_sg->add_option("--lambda", sc.lambda, "window location");
    c_sg->add_option("--eps", sc.eps, "point threshold")->check(CLI::PositiveNumber);
    c_sg->add_option("--reps", sc.reps, "replications")->check(CLI::PositiveNumber);
    c_sg->add_option("--seed", sc.seed, "RNG seed");
    c_sg->add_option("--out", out, "output file")->required();
    c_sg->callback([&] {
        ExperimentManifest m;
        m.command = "simulate-graph";
        m.lambda = sc.lambda;
        m.eps = sc.eps;
        m.n = sc.n;
        m.replications = sc.reps;
        m.seed = sc.seed;
        m.output_path = out;
        m.format = "json";
        write_records(out, m, run_graph(sc));
    });

    // simulate-bm
    BmExtra bx;
    auto* c_sb = app.add_subcommand("simulate-bm", "reflected-path replications to JSON-lines");
    c_sb->add_option("--lambda", sc.lambda, "drift location");
    c_sb->add_option("--eps", sc.eps, "point threshold (>= min excursion)");
    c_sb->add_option("--step", bx.step, "Euler step")->check(CLI::PositiveNumber);
    c_sb->add_option("--horizon", bx.horizon, "time horizon (0 = auto)");
    c_sb->add_option("--min-excursion", bx.min_excursion, "recording cutoff")
        ->check(CLI::PositiveNumber);
    c_sb->add_option("--reps", sc.reps, "paths")->check(CLI::PositiveNumber);
    c_sb->add_option("--seed", sc.seed, "RNG seed");
    c_sb->add_option("--out", out, "output file")->required();
    c_sb->callback([&] {
        if (sc.eps < bx.min_excursion)
            sc.eps = bx.min_excursion;
        ExperimentManifest m;
        m.command = "simulate-bm";
        m.lambda = sc.lambda;
        m.eps = sc.eps;
        m.n = 0;
        m.replications = sc.reps;
        m.seed = sc.seed;
        m.output_path = out;
        m.format = "json";
        m.tolerances["step"] = bx.step;
        m.tolerances["horizon"] = bx.horizon;
        m.tolerances["min_excursion"] = bx.min_excursion;
        write_records(out, m, run_bm(sc, bx));
    });

    // compare: empirical moments from records (or an inline run) vs analytic
    std::string sampler = "graph", records_path;
    auto* c_cp = app.add_subcommand("compare", "z-scores of simulation vs analytic moments");
    c_cp->add_option("--sampler", sampler, "graph or bm")
        ->check(CLI::IsMember({"graph", "bm"}));
    c_cp->add_option("--records", records_path, "JSON-lines records (simulates inline if omitted)");
    c_cp->add_option("--n", sc.n, "vertex count (graph)");
    c_cp->add_option("--lambda", sc.lambda, "window location");
    c_cp->add_option("--eps", sc.eps, "point threshold");
    c_cp->add_option("--reps", sc.reps, "replications");
    c_cp->add_option("--seed", sc.seed, "RNG seed");
    c_cp->add_option("--step", bx.step, "Euler step (bm)");
    c_cp->add_option("--min-excursion", bx.min_excursion, "recording cutoff (bm)");
    add_common(c_cp);
    c_cp->callback([&] {
        std::vector<SimRecord> recs;
        if (!records_path.empty()) {
            auto loaded = read_records(records_path);
            recs = std::move(loaded.records);
            if (!recs.empty()) {
                sampler = recs.front().sampler;
                sc.lambda = recs.front().lambda;
                sc.eps = recs.front().eps;
                sc.reps = static_cast<std::int64_t>(recs.size());
            }
        } else if (sampler == "graph") {
            recs = run_graph(sc);
        } else {
            recs = run_bm(sc, bx);
        }
        if (recs.size() < 2)
            throw std::invalid_argument("compare: needs at least 2 replications");

        std::vector<double> zs, chis;
        zs.reserve(recs.size());
        chis.reserve(recs.size());
        for (const auto& r : recs) {
            zs.push_back(r.z_eps);
            chis.push_back(static_cast<double>(r.chi_eps));
        }
        double mz, vz, mc, vc;
        mean_var(zs, &mz, &vz);
        mean_var(chis, &mc, &vc);

        IntensityParams ip;
        ip.lambda = sc.lambda;
        auto spec = quad_spec();
        double ew = expected_weight(sc.eps, ip, spec);
        double wv = weight_variance(sc.eps, ip, spec);
        double ec = expected_count(sc.eps, ip, spec);
        double cv = count_variance(sc.eps, ip, spec);

        double R = static_cast<double>(recs.size());
        double se_mz = std::sqrt(vz / R);
        double se_mc = std::sqrt(vc / R);
        double se_vz = vz * std::sqrt(2.0 / (R - 1.0)); // normal-approx SE of a sample variance
        double se_vc = vc * std::sqrt(2.0 / (R - 1.0));

        auto m = base_manifest("compare");
        m.lambda = sc.lambda;
        m.eps = sc.eps;
        m.n = sampler == "graph" ? sc.n : 0;
        m.replications = sc.reps;
        m.seed = sc.seed;
        Table t;
        // quantity ids: 0 mean weight, 1 var weight, 2 mean count, 3 var count
        t.columns = {"quantity_id", "empirical", "analytic", "std_error", "z_score"};
        t.rows.push_back({0, mz, ew, se_mz, (mz - ew) / se_mz});
        t.rows.push_back({1, vz, wv, se_vz, (vz - wv) / se_vz});
        t.rows.push_back({2, mc, ec, se_mc, (mc - ec) / se_mc});
        t.rows.push_back({3, vc, cv, se_vc, (vc - cv) / se_vc});
        emit(m, t);
    });

    // identities: residuals that should vanish
    auto* c_id = app.add_subcommand("identities", "exact-identity residuals");
    c_id->add_option("--lambda", lambda, "window location");
    c_id->add_option("--eps", eps, "u_eps threshold")->check(CLI::PositiveNumber);
    add_common(c_id);
    c_id->callback([&] {
        auto m = base_manifest("identities");
        m.lambda = lambda;
        m.eps = eps;
        auto spec = quad_spec();
        double sjw = weight_identity_residual(lambda, spec);
        double cubic = cubic_identity_residual(lambda, spec);
        auto uni = unicyclic_weight(lambda, spec);
        double ue_gap = u_eps(lambda, eps, spec) - u_eps_smallx(lambda, eps, spec);
        Table t;
        t.columns = {"lambda", "weight_identity_residual", "cubic_identity_residual",
                     "unicyclic_gap", "ue_form_gap"};
        t.rows.push_back({lambda, sjw, cubic, uni.left - uni.right, ue_gap});
        emit(m, t);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        nlohmann::ordered_json err;
        err["error"] = e.what();
        std::cerr << err.dump() << '\n';
        return 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const BracketNotConverged& e) {
        nlohmann::ordered_json err;
        err["error"] = e.what();
        err["best_value"] = e.best_value;
        err["best_bound"] = e.best_bound;
        err["lower"] = e.lower;
        err["upper"] = e.upper;
        std::cerr << err.dump() << '\n';
        return 3;
    } catch (const NumericError& e) {
        nlohmann::ordered_json err;
        err["error"] = e.what();
        err["best_value"] = e.best_value;
        err["best_bound"] = e.best_bound;
        std::cerr << err.dump() << '\n';
        return 3;
    } catch (const std::exception& e) {
        nlohmann::ordered_json err;
        err["error"] = e.what();
        std::cerr << err.dump() << '\n';
        return 3;
    }
}
