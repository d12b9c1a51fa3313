#include "critwin/extremes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "critwin/errors.hpp"
#include "critwin/intensity.hpp"

namespace critwin {

namespace {

constexpr int kMaxMoments = 12;
constexpr double kTargetWidth = 1e-3;

double ifactorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i)
        f *= i;
    return f; // exact in double through 12!
}

// P(N(a, inf) = m) = sum_{j >= m} (-1)^{j-m} M_j / (m! (j-m)!).  Partial sums
// bracket the probability: even tails overshoot, odd tails undershoot, and the
// certified moment errors widen the bracket on each side.
ProbabilityBracket jordan_bracket(double lambda, double a, int m,
                                  const QuadratureSpec& spec) {
    if (m < 0 || m > kMaxMoments - 2)
        throw std::invalid_argument("count_probability: m outside bracketable range");
    FactorialMomentTable t = factorial_moments(lambda, a, kMaxMoments, spec);

    double mfact = ifactorial(m);
    double s = 0.0, err = 0.0;
    double lower = 0.0, upper = 1.0;
    for (int j = m; j <= kMaxMoments; ++j) {
        double c = 1.0 / (mfact * ifactorial(j - m));
        err += t.certified_abs_err[static_cast<size_t>(j)] * c;
        double term = t.values[static_cast<size_t>(j)] * c;
        if ((j - m) % 2 == 0) {
            s += term;
            upper = std::min(upper, s + err);
        } else {
            s -= term;
            lower = std::max(lower, s - err);
        }
        if (j > m && upper - lower <= kTargetWidth) {
            double mid = std::clamp(0.5 * (lower + upper), 0.0, 1.0);
            return {mid, std::max(0.5 * (upper - lower), 0.0)};
        }
    }
    throw BracketNotConverged("probability bracket still open after 12 moments",
                              lower, upper);
}

} // namespace

ProbabilityBracket void_probability(double lambda, double a, const QuadratureSpec& spec) {
    if (a <= 0.0)
        throw std::invalid_argument("void_probability: a must be > 0");
    return jordan_bracket(lambda, a, 0, spec);
}

ProbabilityBracket count_probability(double lambda, double a, int m,
                                     const QuadratureSpec& spec) {
    if (a <= 0.0)
        throw std::invalid_argument("count_probability: a must be > 0");
    return jordan_bracket(lambda, a, m, spec);
}

double kth_largest_density(int k, double x, double lambda, const QuadratureSpec& spec) {
    if (k < 1)
        throw std::invalid_argument("kth_largest_density: k must be >= 1");
    if (x <= 0.0)
        throw std::invalid_argument("kth_largest_density: x must be > 0");
    // points above x beyond the k-th largest live in the process reweighted by
    // the point at x, i.e. the lambda - x window
    ProbabilityBracket pc = jordan_bracket(palm_shift(lambda, x), x, k - 1, spec);
    return pc.value * std::exp(log_intensity_total(x, lambda));
}

double largest_cdf(double x, double lambda, const QuadratureSpec& spec) {
    if (x <= 0.0)
        return 0.0; // the process has points a.s.
    return void_probability(lambda, x, spec).value;
}

GumbelParams gumbel_params(double lambda) {
    double al = std::abs(lambda);
    if (al <= std::exp(1.0))
        throw std::invalid_argument("gumbel_params: requires |lambda| > e");
    constexpr double kPi = 3.14159265358979323846;
    double a = 3.0 * std::log(al) - 2.5 * std::log(std::log(al))
             - 0.5 * std::log(3888.0 * kPi);
    return {lambda, a};
}

double gumbel_point(const GumbelParams& p, double s) {
    return 2.0 * (p.a + s) / (p.lambda * p.lambda);
}

double gumbel_cdf(double s) { return std::exp(-std::exp(-s)); }

double kth_record_cdf(int k, double s) {
    if (k < 1)
        throw std::invalid_argument("kth_record_cdf: k must be >= 1");
    // e^{-m} sum_{j<k} m^j / j! with m = e^{-s}, summed in log space
    double logm = -s;
    double m = std::exp(logm);
    double peak = -std::numeric_limits<double>::infinity();
    std::vector<double> lt(static_cast<size_t>(k));
    for (int j = 0; j < k; ++j) {
        lt[static_cast<size_t>(j)] = -m + j * logm - std::lgamma(j + 1.0);
        peak = std::max(peak, lt[static_cast<size_t>(j)]);
    }
    if (!std::isfinite(peak))
        return 0.0;
    double acc = 0.0;
    for (double v : lt)
        acc += std::exp(v - peak);
    return std::exp(peak) * acc;
}

NormalApproxParams normal_approx_params(double lambda) {
    if (lambda <= 0.0)
        throw std::invalid_argument("normal_approx_params: requires lambda > 0");
    return {2.0 * lambda, std::sqrt(2.0 / lambda)};
}

} // namespace critwin
