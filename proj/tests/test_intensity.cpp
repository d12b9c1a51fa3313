#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "critwin/errors.hpp"
#include "critwin/intensity.hpp"
#include "oracles.hpp"

using namespace critwin;

TEST_CASE("drift polynomial: two algebraic forms and the lower bound") {
    for (double lam : {-3.0, -1.0, 0.0, 0.5, 2.0, 7.0}) {
        for (double x = 0.05; x < 9.0; x += 0.31) {
            double f = drift_F(x, lam);
            double expanded = x * x * x / 24.0 + x * (x - 2.0 * lam) * (x - 2.0 * lam) / 8.0;
            CHECK(f == doctest::Approx(expanded).epsilon(1e-12));
            CHECK(f >= x * x * x / 24.0 - 1e-12 * std::max(1.0, std::fabs(f)));
        }
    }
    CHECK(drift_F(1.0, 0.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("total intensity matches the independent evaluation") {
    IntensityParams p;
    CHECK(intensity_total(1.0, p) == doctest::Approx(0.63985255825306).epsilon(1e-11));
    for (double lam : {-2.0, 0.0, 1.5}) {
        IntensityParams q;
        q.lambda = lam;
        for (double x : {0.3, 1.0, 2.0, 3.0}) {
            double ref = static_cast<double>(oracle::total_intensity(x, lam));
            CHECK(intensity_total(x, q) == doctest::Approx(ref).epsilon(1e-9));
            CHECK(log_intensity_total(x, lam) == doctest::Approx(std::log(ref)).epsilon(1e-9));
        }
    }
}

TEST_CASE("per-label intensities sum to the total") {
    for (double lam : {-1.0, 0.0, 2.0}) {
        IntensityParams p;
        p.lambda = lam;
        for (double x : {0.2, 0.7, 1.3, 2.4}) {
            double ref0 = static_cast<double>(oracle::label_intensity(x, 0, lam));
            CHECK(intensity_label(x, 0, p) == doctest::Approx(ref0).epsilon(1e-10));
            double ref2 = static_cast<double>(oracle::label_intensity(x, 2, lam));
            CHECK(intensity_label(x, 2, p) == doctest::Approx(ref2).epsilon(1e-10));
            double sum = 0.0;
            for (int l = 0; l <= p.max_label; ++l)
                sum += intensity_label(x, l, p);
            CHECK(sum == doctest::Approx(intensity_total(x, p)).epsilon(1e-8));
        }
    }
    IntensityParams p;
    CHECK(intensity_label(1.0, 0, p) == doctest::Approx(0.337697349646).epsilon(1e-10));
}

TEST_CASE("label distribution is a probability law") {
    IntensityParams p;
    p.lambda = 0.7;
    for (double x : {0.4, 1.0, 2.2}) {
        auto ld = label_distribution(x, p);
        CHECK(ld.x == x);
        double sum = ld.tail_mass;
        for (double m : ld.masses) {
            CHECK(m >= 0.0);
            sum += m;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        // P_x(l) = w_l x^{3l/2} / Psi(x^{3/2}); label 0 means no excess edges
        double t = std::pow(x, 1.5);
        double p0 = 1.0 / static_cast<double>(oracle::psi_series(t));
        CHECK(ld.masses[0] == doctest::Approx(p0).epsilon(1e-9));
        // distribution does not depend on lambda
        IntensityParams q;
        q.lambda = -2.0;
        CHECK(label_distribution(x, q).masses[1] == doctest::Approx(ld.masses[1]).epsilon(1e-12));
    }
}

TEST_CASE("palm shift") {
    CHECK(palm_shift(1.5, 0.4) == 1.1);
    CHECK(palm_shift(-2.0, 1.0) == -3.0);
}

TEST_CASE("envelope dominates pointwise and in the tail") {
    for (double lam : {-5.0, 0.0, 5.0, 10.0}) {
        for (double q : {0.0, 1.0, 3.0, 4.5}) {
            for (double x = 0.1; x < 30.0; x *= 1.6) {
                double lhs = q * std::log(x) + log_intensity_total(x, lam);
                CHECK(lhs <= env_log_bound(x, lam, q) + 1e-10);
            }
        }
        // numeric tail vs the certified bound at the earliest admissible cutoff
        double X = env_tail_start(lam);
        for (double q : {0.0, 2.0}) {
            double tail = static_cast<double>(oracle::simpson(
                [&](long double x) {
                    return powl(x, static_cast<long double>(q)) *
                           oracle::total_intensity(x, lam);
                },
                X, X + 40.0L, 60000));
            CHECK(tail <= env_tail_bound(X, lam, q));
        }
    }
    CHECK(env_tail_start(-7.0) == 4.0);
    CHECK(env_tail_start(3.0) == 12.0);
}

TEST_CASE("cutoff picker meets its tolerance and respects the floor") {
    for (double lam : {-3.0, 0.0, 2.0}) {
        for (double tol : {1e-6, 1e-12, 1e-60}) {
            double X = pick_cutoff(lam, 1.0, tol, 0.5);
            CHECK(X >= env_tail_start(lam));
            CHECK(env_tail_bound(X, lam, 1.0) <= tol);
        }
    }
    CHECK(pick_cutoff(0.0, 1.0, 1e-6, 25.0) >= 25.0);
}
