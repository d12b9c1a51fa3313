#include "critwin/moments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "critwin/errors.hpp"
#include "critwin/wright.hpp"

namespace critwin {

namespace {

constexpr double kLogInv2Pi = -0.91893853320467274178;

double lam_total(double x, double lambda) {
    return std::exp(log_intensity_total(x, lambda));
}

} // namespace

namespace detail {

Integral intensity_integral(double q, double lambda, double a, const QuadratureSpec& spec) {
    if (a < 0.0)
        throw std::invalid_argument("intensity_integral: a must be >= 0");
    if (a == 0.0 && q <= 1.5)
        throw std::invalid_argument("intensity_integral: divergent at 0 for q <= 3/2");
    auto f = [lambda, q](double x) {
        return std::pow(x, q) * lam_total(x, lambda);
    };
    if (spec.upper_cutoff > 0.0) {
        // caller owns the truncation error
        Integral r = integrate(f, a, spec.upper_cutoff, spec);
        return r;
    }
    double lo = std::max(env_tail_start(lambda), a + 1.0);
    double X = pick_cutoff(lambda, q, spec.abs_tol, lo);
    Integral r = integrate(f, a, X, spec);
    double tail = env_tail_bound(X, lambda, q);
    // When the whole integral sits far below abs_tol (deep subcritical windows,
    // large a) the first pass stops immediately with O(1) relative error.
    // Re-run against a scale-aware absolute target so the value keeps its digits.
    if (r.value > 0.0 && r.err_bound + tail > 2.0 * spec.rel_tol * r.value) {
        double goal = std::max(0.25 * spec.rel_tol * r.value, 1e-280);
        if (goal < spec.abs_tol) {
            X = pick_cutoff(lambda, q, goal, X);
            QuadratureSpec tight = spec;
            tight.abs_tol = goal;
            r = integrate(f, a, X, tight);
            tail = env_tail_bound(X, lambda, q);
        }
    }
    return {r.value, r.err_bound + tail};
}

} // namespace detail

double expected_weight(double eps, const IntensityParams& params, const QuadratureSpec& spec) {
    if (eps <= 0.0)
        throw std::invalid_argument("expected_weight: eps must be > 0");
    return detail::intensity_integral(1.0, params.lambda, eps, spec).value;
}

double expected_count(double eps, const IntensityParams& params, const QuadratureSpec& spec) {
    if (eps <= 0.0)
        throw std::invalid_argument("expected_count: eps must be > 0");
    return detail::intensity_integral(0.0, params.lambda, eps, spec).value;
}

double power_moment(double q, const IntensityParams& params, const QuadratureSpec& spec) {
    if (q < 2.0)
        throw std::invalid_argument("power_moment: needs q >= 2");
    return detail::intensity_integral(q, params.lambda, 0.0, spec).value;
}

// Var zeta(eps) = int_eps^inf dx x Lambda(x) int_0^eps dy y Lambda(y) (1 - e^{-dF})
// with dF = F(y, lambda - x) - F(y, lambda) = (x y / 2)(x + y - 2 lambda).
// The x^2-diagonal term cancels against the shifted-window weight identity,
// which is what folds the outer integral down to the same x Lambda kernel.
double weight_variance(double eps, const IntensityParams& params, const QuadratureSpec& spec) {
    if (eps <= 0.0)
        throw std::invalid_argument("weight_variance: eps must be > 0");
    double lambda = params.lambda;

    QuadratureSpec inner_spec = spec;
    inner_spec.abs_tol = std::max(spec.abs_tol * 1e-2, 1e-13);
    inner_spec.upper_cutoff = 0.0;

    auto inner = [&](double x) {
        auto h = [&](double y) {
            double dF = 0.5 * x * y * (x + y - 2.0 * lambda);
            return y * lam_total(y, lambda) * (-std::expm1(-dF));
        };
        return integrate(h, 0.0, eps, inner_spec).value;
    };

    // |inner(x)| <= int_0^eps y Lambda dy once x is past the envelope start
    double small_mass = integrate([&](double y) { return y * lam_total(y, lambda); },
                                  0.0, eps, inner_spec).value;
    double tail_tol = spec.abs_tol / std::max(small_mass, 1e-12);
    double X = pick_cutoff(lambda, 1.0, tail_tol, std::max(env_tail_start(lambda), eps + 1.0));

    auto g = [&](double x) { return x * lam_total(x, lambda) * inner(x); };
    return integrate(g, eps, X, spec).value;
}

double count_variance(double eps, const IntensityParams& params, const QuadratureSpec& spec) {
    FactorialMomentTable t = factorial_moments(params.lambda, eps, 2, spec);
    return t.values[2] + t.values[1] - t.values[1] * t.values[1];
}

namespace {

// D_a = C (2 pi)^{-1/2} int_a^inf x^{-5/2} e^{-(4/33) x^3} dx bounds
// M_1(mu, a) <= D_a e^{-a mu^2 / 2} for mu <= 0: combine the Psi envelope
// with F(x, mu) >= x^3/6 + x mu^2 / 2 on mu <= 0.
double decay_amplitude(double a, const QuadratureSpec& spec) {
    constexpr double c = 4.0 / 33.0;
    double X0 = std::max(a, 4.0) + 2.0;
    auto f = [](double x) { return std::pow(x, -2.5) * std::exp(-c * x * x * x); };
    double body = integrate(f, a, X0, spec).value;
    double tail = std::pow(X0, -4.5) * std::exp(-c * X0 * X0 * X0) / (3.0 * c);
    return std::exp(psi_envelope_log_c() + kLogInv2Pi) * (body + tail);
}

// uniform 4-point cubic (Catmull-Rom) on a clamped grid; 0 beyond the cap
struct LevelTable {
    double du = 0.0;
    std::vector<double> v;

    double operator()(double u) const {
        double s = u / du;
        auto n = static_cast<std::ptrdiff_t>(v.size());
        auto j = static_cast<std::ptrdiff_t>(std::floor(s));
        if (j >= n - 1)
            return 0.0;
        if (j < 0)
            j = 0;
        double t = s - static_cast<double>(j);
        auto at = [&](std::ptrdiff_t i) { return v[std::clamp<std::ptrdiff_t>(i, 0, n - 1)]; };
        double p0 = at(j - 1), p1 = at(j), p2 = at(j + 1), p3 = at(j + 2);
        return 0.5 * (2.0 * p1 + t * (p2 - p0)
                      + t * t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3)
                      + t * t * t * (3.0 * (p1 - p2) + p3 - p0));
    }
};

} // namespace

// M_k(lambda - u, a) is tabulated level by level on a shared u-grid:
// G_k(u) = int_a^X Lambda^{lambda-u}(x) G_{k-1}(u + x) dx.  Each level shifts
// the argument up by at least a, so evaluating M_K(lambda) = G_K(0) only ever
// probes u <= (K-1) X.  The grid is capped at the earlier of that reach and
// the Gaussian decay cap where M_1(lambda - u, a) has fallen below e^{-42} D_a.
FactorialMomentTable factorial_moments(double lambda, double a, int K,
                                       const QuadratureSpec& spec) {
    if (a <= 0.0)
        throw std::invalid_argument("factorial_moments: a must be > 0");
    if (K < 0 || K > 64)
        throw std::invalid_argument("factorial_moments: K out of range");

    FactorialMomentTable out;
    out.lambda = lambda;
    out.a = a;
    out.values.assign(static_cast<size_t>(K) + 1, 1.0);
    out.certified_abs_err.assign(static_cast<size_t>(K) + 1, 0.0);
    if (K == 0)
        return out;

    double X = pick_cutoff(lambda, 0.0, spec.abs_tol,
                           std::max(env_tail_start(lambda), a + 1.0));
    double tail0 = env_tail_bound(X, lambda, 0.0);

    // one level integral; prev == nullptr means G_0 == 1
    auto level_integral = [&](double u, const LevelTable* prev) {
        double mu = lambda - u;
        auto f = [&](double x) {
            double w = prev ? (*prev)(u + x) : 1.0;
            return w == 0.0 ? 0.0 : lam_total(x, mu) * w;
        };
        return integrate(f, a, X, spec);
    };

    if (K == 1) {
        Integral m1 = level_integral(0.0, nullptr);
        out.values[1] = m1.value;
        out.certified_abs_err[1] = m1.err_bound + tail0;
        return out;
    }

    double d_a = decay_amplitude(a, spec);
    double decay_cap = std::max(lambda, 0.0)
                     + std::sqrt(2.0 * (std::max(std::log(d_a), 0.0) + 42.0) / a);
    double u_cap = std::min(static_cast<double>(K - 1) * X, decay_cap);
    bool decay_binds = decay_cap < static_cast<double>(K - 1) * X;

    auto n = std::max<std::ptrdiff_t>(4, static_cast<std::ptrdiff_t>(std::ceil(u_cap / 0.04)) + 1);
    double du = u_cap / static_cast<double>(n - 1);

    LevelTable prev; // level k-1 while building level k
    prev.du = du;
    double g1_at_0 = 0.0;    // M_1(lambda, a), the error amplification factor
    double prev_err = 0.0;   // certified abs error of the prev table, interp included
    double prev_sup = 1.0;   // sup of level k-2 (P_{k-2}), for the clamp bound
    double clamp_mass = decay_binds
        ? d_a * std::exp(-0.5 * a * (u_cap - std::max(lambda, 0.0))
                               * (u_cap - std::max(lambda, 0.0)))
        : 0.0;

    for (int k = 1; k <= K; ++k) {
        const LevelTable* src = (k == 1) ? nullptr : &prev;
        double sup_src = (k <= 1) ? 1.0 : *std::max_element(prev.v.begin(), prev.v.end());

        Integral at0 = level_integral(0.0, src);
        double q_err = at0.err_bound + tail0 * std::max(sup_src, 1.0);
        double clamp_err = (k >= 2) ? g1_at_0 * prev_sup * clamp_mass : 0.0;
        double node_err = q_err + g1_at_0 * prev_err + clamp_err;

        out.values[k] = at0.value;
        out.certified_abs_err[k] = node_err;

        if (k == K)
            break;

        LevelTable next;
        next.du = du;
        next.v.resize(static_cast<size_t>(n));
        next.v[0] = at0.value;
        double max_q = q_err;
        for (std::ptrdiff_t j = 1; j < n; ++j) {
            Integral r = level_integral(static_cast<double>(j) * du, src);
            next.v[static_cast<size_t>(j)] = r.value;
            max_q = std::max(max_q, r.err_bound + tail0 * std::max(sup_src, 1.0));
        }

        // measure the interpolation error of the fresh table at a few midpoints
        double interp_err = 0.0;
        for (int p = 1; p <= 5; ++p) {
            auto j = (n - 1) * p / 6;
            double um = (static_cast<double>(j) + 0.5) * du;
            double direct = level_integral(um, src).value;
            interp_err = std::max(interp_err, std::abs(next(um) - direct));
        }

        if (k == 1)
            g1_at_0 = at0.value;
        prev_sup = sup_src;
        prev_err = max_q + g1_at_0 * prev_err + clamp_err + 2.0 * interp_err;
        prev = std::move(next);
    }
    return out;
}

// int_0^inf x (Lambda^lambda - Lambda^0) dx - lambda; the integrand collapses to
// x Lambda^0(x) expm1(-D) with D = F(x, lambda) - F(x, 0) = (lambda x / 2)(lambda - x)
double weight_identity_residual(double lambda, const QuadratureSpec& spec) {
    if (lambda == 0.0)
        return 0.0;
    auto f = [lambda](double x) {
        double d = 0.5 * lambda * x * (lambda - x);
        return x * lam_total(x, 0.0) * std::expm1(-d);
    };
    double lo = std::max(env_tail_start(lambda), env_tail_start(0.0));
    double X = std::max(pick_cutoff(lambda, 1.0, spec.abs_tol, lo),
                        pick_cutoff(0.0, 1.0, spec.abs_tol, lo));
    return integrate(f, 0.0, X, spec).value - lambda;
}

double cubic_identity_residual(double lambda, const QuadratureSpec& spec) {
    IntensityParams p;
    p.lambda = lambda;
    double i3 = power_moment(3.0, p, spec);
    double i2 = power_moment(2.0, p, spec);
    return i3 - 2.0 - 2.0 * lambda * i2;
}

UnicyclicPair unicyclic_weight(double lambda, const QuadratureSpec& spec) {
    IntensityParams p;
    p.lambda = lambda;
    // x Lambda_1(x) = (2 pi)^{-1/2} w_1 e^{-F}; the right side integrates the
    // bare e^{-F}, so both sides share the tail int_X e^{-x^3/24} <= 8 e^{-X^3/24}/X^2
    double X = std::max(9.0, env_tail_start(lambda));
    while (8.0 * std::exp(-X * X * X / 24.0) / (X * X) > spec.abs_tol)
        X *= 1.25;

    UnicyclicPair out;
    out.left = integrate([&](double x) { return x * intensity_label(x, 1, p); },
                         0.0, X, spec).value;
    out.right = 0.25 * integrate([&](double x) { return std::exp(-drift_F(x, lambda)); },
                                 0.0, X, spec).value;
    return out;
}

} // namespace critwin
