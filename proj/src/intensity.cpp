#include "critwin/intensity.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace critwin {
namespace {

constexpr double kLogInv2Pi = -0.91893853320467274178032973640562; // -ln(2*pi)/2

// Cubic-Hermite spline of ln Psi(t) on a uniform t-grid, so the quadrature
// hot path pays an interpolation instead of a series sum.  Knot derivatives
// are Psi'/Psi = (sum l w_l t^{l-1})/(sum w_l t^l), evaluated in log space.
struct PsiSpline {
    double t_max, dt;
    std::vector<double> val, der;
};

PsiSpline build_psi_spline() {
    PsiSpline s;
    s.t_max = psi_series_limit();
    s.dt = 0.02;
    std::size_t n = static_cast<std::size_t>(s.t_max / s.dt) + 1;
    s.val.resize(n + 1);
    s.der.resize(n + 1);
    const auto& logw = detail::log_wright_table();
    for (std::size_t i = 0; i <= n; ++i) {
        double t = i * s.dt;
        s.val[i] = log_psi(t);
        if (t == 0.0) {
            s.der[i] = std::exp(logw[1]); // Psi'(0) = w_1
            continue;
        }
        // d/dt ln Psi = exp(ln sum l w_l t^(l-1) - ln Psi)
        double logt = std::log(t);
        double peak = -1e308;
        std::vector<double> terms;
        terms.reserve(256);
        for (std::size_t l = 1; l < logw.size(); ++l) {
            double lt = std::log(static_cast<double>(l)) + logw[l] + (l - 1.0) * logt;
            terms.push_back(lt);
            if (lt > peak) peak = lt;
            else if (lt < peak - 45.0) break;
        }
        double acc = 0;
        for (double lt : terms) acc += std::exp(lt - peak);
        s.der[i] = std::exp(peak + std::log(acc) - s.val[i]);
    }
    return s;
}

const PsiSpline& psi_spline() {
    static PsiSpline s = build_psi_spline();
    return s;
}

double log_psi_fast(double t) {
    const PsiSpline& s = psi_spline();
    if (t >= s.t_max) return log_psi(t);
    double pos = t / s.dt;
    std::size_t i = static_cast<std::size_t>(pos);
    if (i + 1 >= s.val.size()) return log_psi(t);
    double u = pos - i;
    double h = s.dt;
    double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
    double h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
    return h00 * s.val[i] + h10 * h * s.der[i] + h01 * s.val[i + 1] + h11 * h * s.der[i + 1];
}

} // namespace

double drift_F(double x, double lambda) {
    if (!(x >= 0.0)) throw std::invalid_argument("drift_F: x must be >= 0");
    double d = x - lambda;
    return (d * d * d + lambda * lambda * lambda) / 6.0;
}

double log_intensity_total(double x, double lambda) {
    if (!(x > 0.0)) throw std::invalid_argument("intensity: x must be > 0");
    double t = std::pow(x, 1.5);
    return kLogInv2Pi - 2.5 * std::log(x) + log_psi_fast(t) - drift_F(x, lambda);
}

double intensity_total(double x, const IntensityParams& params) {
    // psi_tol is honored implicitly: the spline/series path is certified well
    // below the default 1e-9; tighter requests than the series can deliver
    // would throw from psi() itself, so probe it once for out-of-range tol.
    if (params.psi_tol < 1e-13)
        throw PrecisionUnachievable("intensity_total: psi tolerance below supported range",
                                    0.0, 1e-13);
    return std::exp(log_intensity_total(x, params.lambda));
}

double intensity_label(double x, int label, const IntensityParams& params) {
    if (!(x > 0.0)) throw std::invalid_argument("intensity: x must be > 0");
    if (label < 0) throw std::invalid_argument("intensity: label must be >= 0");
    const auto& logw = detail::log_wright_table();
    if (static_cast<std::size_t>(label) >= logw.size())
        throw std::invalid_argument("intensity: label beyond coefficient table");
    double lg = logw[label] + (1.5 * label - 2.5) * std::log(x)
              + kLogInv2Pi - drift_F(x, params.lambda);
    return std::exp(lg);
}

LabelDistribution label_distribution(double x, const IntensityParams& params) {
    if (!(x > 0.0)) throw std::invalid_argument("label_distribution: x must be > 0");
    if (params.max_label < 0) throw std::invalid_argument("label_distribution: max_label < 0");
    const auto& logw = detail::log_wright_table();
    double t = std::pow(x, 1.5);
    double logpsi = log_psi(t);
    double logt = (t > 0) ? std::log(t) : 0.0;
    LabelDistribution out;
    out.x = x;
    out.masses.resize(params.max_label + 1);
    double acc = 0;
    for (int l = 0; l <= params.max_label; ++l) {
        double m = std::exp(logw[l] + l * logt - logpsi); // w_l t^l / Psi
        out.masses[l] = m;
        acc += m;
    }
    out.tail_mass = 1.0 - acc;
    return out;
}

double palm_shift(double lambda, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("palm_shift: s must be > 0");
    return lambda - s;
}

double env_log_bound(double x, double lambda, double q) {
    return (q - 2.5) * std::log(x) + x * x * x / 22.0 + psi_envelope_log_c()
         + kLogInv2Pi - drift_F(x, lambda);
}

double env_tail_start(double lambda) { return std::max(4.0, 4.0 * lambda); }

double env_tail_bound(double X, double lambda, double q) {
    // On x >= max(4, 4 lambda): (x - 2 lambda)^2 >= x^2/4, so
    //   F >= x^3/24 + x^3/32  and  Psi(x^{3/2}) e^{-F} <= C e^{-c x^3}
    // with c = 7/96 - 1/22.  Then for m = q - 5/2 <= 2,
    //   int_X^inf x^m e^{-c x^3} dx <= X^{m-2} e^{-c X^3} / (3c).
    if (X < env_tail_start(lambda) || q > 4.5)
        throw std::invalid_argument("env_tail_bound: outside certified range");
    constexpr double c = 7.0 / 96.0 - 1.0 / 22.0;
    double lg = psi_envelope_log_c() + kLogInv2Pi + (q - 4.5) * std::log(X)
              - c * X * X * X - std::log(3.0 * c);
    return std::exp(lg);
}

double pick_cutoff(double lambda, double q, double tol, double lo) {
    double X = std::max(env_tail_start(lambda), 4.0);
    while (env_tail_bound(X, lambda, q) > tol) {
        X *= 1.25;
        if (X > 1e4)
            throw NumericError("pick_cutoff: no certified cutoff below 1e4", X,
                               env_tail_bound(X / 1.25, lambda, q));
    }
    return std::max(X, lo);
}

} // namespace critwin
