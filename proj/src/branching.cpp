#include "critwin/branching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "critwin/errors.hpp"
#include "critwin/parallel.hpp"

namespace critwin {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// int_X^inf x^{-3/2} e^{-d x} dx, closed form
double power_exp_tail(double X, double d) {
    if (d == 0.0)
        return 2.0 / std::sqrt(X);
    return 2.0 / std::sqrt(X) * std::exp(-d * X)
         - 2.0 * std::sqrt(kPi * d) * std::erfc(std::sqrt(d * X));
}
} // namespace

double log_borel_pmf(std::int64_t k, double m) {
    if (k < 1)
        throw std::invalid_argument("borel_pmf: k must be >= 1");
    if (!(m > 0.0) || !std::isfinite(m))
        throw std::invalid_argument("borel_pmf: mean must be positive and finite");
    double kd = static_cast<double>(k);
    return (kd - 1.0) * (std::log(kd) + std::log(m)) - kd * m - std::lgamma(kd + 1.0);
}

double borel_pmf(std::int64_t k, double m) { return std::exp(log_borel_pmf(k, m)); }

double survival_probability(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("survival_probability: alpha must be positive and finite");
    if (alpha <= 1.0)
        return 0.0;
    // f(q) = 1 - q - e^{-alpha q} has f(0) = 0, f'(0) = alpha - 1 > 0 and
    // f(1) < 0, so the survival probability is the unique root in (0, 1)
    auto f = [alpha](double q) { return 1.0 - q - std::exp(-alpha * q); };
    double lo = 0.0, hi = 1.0;
    double q = std::clamp(2.0 * (alpha - 1.0) / (alpha * alpha), 1e-12, 1.0 - 1e-12);
    for (int it = 0; it < 200; ++it) {
        double fq = f(q);
        // convergence must be checked before q moves, or a bisection step
        // can overwrite an exact root
        if (std::abs(fq) < 1e-16 || hi - lo < 1e-15 * std::max(q, 1e-300))
            break;
        if (fq > 0.0)
            lo = q;
        else
            hi = q;
        double fpq = alpha * std::exp(-alpha * q) - 1.0;
        double qn = (fpq != 0.0) ? q - fq / fpq : q;
        q = (qn > lo && qn < hi) ? qn : 0.5 * (lo + hi);
    }
    return q;
}

namespace {
QuadratureSpec tightened(const QuadratureSpec& spec) {
    QuadratureSpec t = spec;
    t.abs_tol = std::min(spec.abs_tol, 1e-12);
    t.rel_tol = std::min(spec.rel_tol, 1e-12);
    return t;
}

double u_eps_body(double lambda, double eps, const QuadratureSpec& spec, double* err) {
    double c = 0.5 * lambda * lambda;
    double X = std::max(4.0, 4.0 * eps);
    auto g = [c](double x) { return std::pow(x, -1.5) * std::exp(-c * x); };
    Integral body = integrate(g, eps, X, spec);
    *err = body.err_bound;
    return 2.0 * std::max(lambda, 0.0)
         + kInvSqrt2Pi * (body.value + power_exp_tail(X, c));
}

double u_eps_smallx_body(double lambda, double eps, const QuadratureSpec& spec, double* err) {
    double c = 0.5 * lambda * lambda;
    auto g = [c](double x) { return std::pow(x, -1.5) * (-std::expm1(-c * x)); };
    Integral body = integrate(g, 0.0, eps, spec);
    *err = body.err_bound;
    return std::sqrt(2.0 / kPi) / std::sqrt(eps) + lambda + kInvSqrt2Pi * body.value;
}
} // namespace

double u_eps(double lambda, double eps, const QuadratureSpec& spec) {
    if (eps <= 0.0)
        throw std::invalid_argument("u_eps: eps must be > 0");
    QuadratureSpec t = tightened(spec);
    double e1 = 0.0, e2 = 0.0;
    double v1 = u_eps_body(lambda, eps, t, &e1);
    double v2 = u_eps_smallx_body(lambda, eps, t, &e2);
    double slack = kInvSqrt2Pi * (e1 + e2) + 5e-11 * std::max(1.0, std::abs(v1));
    if (std::abs(v1 - v2) > slack)
        throw NumericError("u_eps: the two integral forms disagree beyond combined error",
                           v1, std::abs(v1 - v2));
    return v1;
}

double u_eps_smallx(double lambda, double eps, const QuadratureSpec& spec) {
    if (eps <= 0.0)
        throw std::invalid_argument("u_eps_smallx: eps must be > 0");
    double e2 = 0.0;
    return u_eps_smallx_body(lambda, eps, tightened(spec), &e2);
}

// n^{1/3} P(T(Po(1 + lambda n^{-1/3})) >= eps n^{2/3}).  The pmf is summed
// exactly to a width-driven K; past K, Stirling brackets close the tail:
//   pmf(k, m) = (2 pi)^{-1/2} m^{-1} k^{-3/2} e^{-k d} e^{-theta_k},
//   d = m - 1 - ln m,  theta_k in (1/(12k+1), 1/(12k)),
//   sum_{k > K} k^{-3/2} e^{-kd} bracketed by integrals from K+1 and K+1/2.
// For m > 1 the escape-to-infinity mass (survival probability) joins the tail.
double progeny_tail_scaled(double lambda, double eps, std::int64_t n) {
    if (n < 1000)
        throw std::invalid_argument("progeny_tail_scaled: n must be >= 1000");
    if (eps <= 0.0)
        throw std::invalid_argument("progeny_tail_scaled: eps must be > 0");
    double n13 = std::cbrt(static_cast<double>(n));
    double m = 1.0 + lambda / n13;
    if (m <= 0.0)
        throw std::invalid_argument("progeny_tail_scaled: offspring mean must be positive");

    auto k0 = static_cast<std::int64_t>(std::ceil(eps * n13 * n13));
    k0 = std::max<std::int64_t>(k0, 1);
    // critical-case bracket width ~ 0.4 K^{-3/2}; drive the scaled width to 1e-8
    double want = std::pow(0.4 * n13 / 1e-8, 2.0 / 3.0);
    auto K = static_cast<std::int64_t>(std::min(want, 1e9));
    K = std::max(K, k0 + 1000);

    constexpr std::int64_t kChunk = 1 << 16;
    std::int64_t count = K - k0 + 1;
    auto chunks = static_cast<std::size_t>((count + kChunk - 1) / kChunk);
    std::vector<long double> slot(chunks, 0.0L);
    parallel_for(chunks, [&](std::size_t ci) {
        std::int64_t a = k0 + static_cast<std::int64_t>(ci) * kChunk;
        std::int64_t b = std::min(a + kChunk, K + 1);
        double logm = std::log(m);
        long double acc = 0.0L;
        for (std::int64_t k = a; k < b; ++k) {
            double kd = static_cast<double>(k);
            acc += std::exp((kd - 1.0) * (std::log(kd) + logm) - kd * m
                            - std::lgamma(kd + 1.0));
        }
        slot[ci] = acc;
    });
    long double body = 0.0L;
    for (long double s : slot)
        body += s;

    double d = m - 1.0 - std::log(m); // >= 0, zero only at criticality
    double Kd = static_cast<double>(K);
    double rem_hi = kInvSqrt2Pi / m * power_exp_tail(Kd + 0.5, d);
    double rem_lo = kInvSqrt2Pi / m * power_exp_tail(Kd + 1.0, d)
                  * (1.0 - 1.0 / (12.0 * (Kd + 1.0)));
    rem_lo = std::max(rem_lo, 0.0);
    rem_hi = std::max(rem_hi, rem_lo);

    double inf_mass = lambda > 0.0 ? survival_probability(m) : 0.0;
    return n13 * (static_cast<double>(body) + 0.5 * (rem_lo + rem_hi) + inf_mass);
}

} // namespace critwin
