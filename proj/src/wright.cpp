#include "critwin/wright.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <limits>

namespace critwin {
namespace {

constexpr std::size_t kTableLen = 2401;      // holds w_0 .. w_2400
constexpr double kSeriesLimit = 140.0;       // certified series range for log_psi
constexpr double kRatioSafety = 1.02;        // padding on the 1/sqrt(12 l) ratio law

struct Table {
    std::vector<double> logw;       // ln w_l
    std::vector<double> ratio_sup;  // sup_{j >= l} w_{j+1}/w_j (incl. off-table bound)
    double env_log_c;               // envelope constant, see psi_envelope_log_c
};

double log_sum_exp(const std::vector<double>& v, std::size_t count) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < count; ++i)
        if (v[i] > m) m = v[i];
    double s = 0;
    for (std::size_t i = 0; i < count; ++i) s += std::exp(v[i] - m);
    return m + std::log(s);
}

Table build_table() {
    const std::size_t n_max = kTableLen - 1;
    std::vector<double> logk(kTableLen);
    logk[1] = std::log(0.125); // K_1 = (3-4)/4 * K_0 = 1/8; K_0 = -1/2 never enters again
    std::vector<double> terms;
    terms.reserve(kTableLen);
    for (std::size_t n = 2; n <= n_max; ++n) {
        terms.clear();
        terms.push_back(std::log((3.0 * n - 4.0) / 4.0) + logk[n - 1]);
        for (std::size_t j = 1; j < n; ++j)
            terms.push_back(logk[j] + logk[n - j]);
        logk[n] = log_sum_exp(terms, terms.size());
    }

    Table t;
    t.logw.resize(kTableLen);
    t.logw[0] = 0.0;
    const double c = std::log(4.0) + 0.5 * std::log(M_PI);
    for (std::size_t n = 1; n <= n_max; ++n)
        t.logw[n] = c + logk[n] - std::lgamma((3.0 * n - 1.0) / 2.0) - 0.5 * n * std::log(2.0);

    // suffix ratio bound; past the table the ratio law w_{l+1}/w_l ~ 1/sqrt(12 l)
    // holds with margin (asserted in the test suite), padded by kRatioSafety
    t.ratio_sup.resize(kTableLen);
    double off_table = kRatioSafety / std::sqrt(12.0 * (n_max + 1));
    double running = off_table;
    t.ratio_sup[n_max] = running;
    for (std::size_t l = n_max; l-- > 0;) {
        double r = std::exp(t.logw[l + 1] - t.logw[l]);
        if (r > running) running = r;
        t.ratio_sup[l] = running;
    }

    // envelope constant: C = sum_l w_l * sup_t t^l exp(-t^2/22)
    //                      = 1 + sum_{l>=1} w_l (11 l / e)^(l/2)
    double m = 0.0; // log of the l = 0 term
    std::vector<double> env_terms{0.0};
    for (std::size_t l = 1; l <= n_max; ++l) {
        double lt = t.logw[l] + 0.5 * l * (std::log(11.0 * l) - 1.0);
        env_terms.push_back(lt);
        if (lt > m) m = lt;
        if (lt < m - 60.0) break; // geometric decay (11/12)^(l/2); done
    }
    t.env_log_c = log_sum_exp(env_terms, env_terms.size());
    return t;
}

const Table& table() {
    static Table t = build_table();
    return t;
}

} // namespace

namespace detail {

const std::vector<double>& log_wright_table() { return table().logw; }

double wright_ratio_bound(std::size_t l) {
    const Table& t = table();
    if (l < t.ratio_sup.size()) return t.ratio_sup[l];
    return kRatioSafety / std::sqrt(12.0 * (l + 1));
}

} // namespace detail

WrightCoefficients wright_coefficients(int order) {
    if (order < 0 || order > 200)
        throw std::invalid_argument("wright_coefficients: order must be in [0, 200]");
    const auto& logw = table().logw;
    WrightCoefficients out;
    out.order = order;
    out.values.resize(order + 1);
    for (int l = 0; l <= order; ++l) out.values[l] = std::exp(logw[l]);
    return out;
}

MgfEvaluation psi(double t, double tol) {
    if (!(t >= 0.0)) throw std::invalid_argument("psi: t must be >= 0");
    if (!(tol > 0.0)) throw std::invalid_argument("psi: tol must be > 0");
    if (t == 0.0) return {t, 1.0, 0, 0.0};

    const auto& logw = table().logw;
    const double logt = std::log(t);
    double sum = 0.0, term = 0.0, best_bound = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < logw.size(); ++l) {
        term = std::exp(logw[l] + l * logt);
        sum += term;
        if (!std::isfinite(sum))
            throw PrecisionUnachievable("psi: value overflows double; use log_psi", sum, best_bound);
        double q = detail::wright_ratio_bound(l) * t;
        if (q < 1.0) {
            double tail = term * q / (1.0 - q);
            best_bound = std::min(best_bound, tail);
            if (tail <= tol * sum)
                return {t, sum, static_cast<int>(l), tail};
        }
    }
    throw PrecisionUnachievable("psi: requested tolerance unachievable at maximum order",
                                sum, best_bound);
}

double psi_series_limit() { return kSeriesLimit; }

double log_psi(double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("log_psi: t must be >= 0");
    if (t == 0.0) return 0.0;
    if (t > kSeriesLimit) {
        // second-order expansion of the known growth Psi(t) ~ (t^2/2) e^{t^2/24};
        // log error < 4.3/t^2 here, shrinking as t grows
        return t * t / 24.0 + 2.0 * std::log(t) - std::log(2.0);
    }
    const auto& logw = table().logw;
    const double logt = std::log(t);
    // terms are unimodal in l: climb to the peak, then stop 45 e-folds down
    double peak = -std::numeric_limits<double>::infinity();
    std::size_t stop = logw.size();
    for (std::size_t l = 0; l < logw.size(); ++l) {
        double lt = logw[l] + l * logt;
        if (lt > peak) peak = lt;
        else if (lt < peak - 45.0) { stop = l + 1; break; }
    }
    double s = 0.0;
    for (std::size_t l = 0; l < stop; ++l)
        s += std::exp(logw[l] + l * logt - peak);
    return peak + std::log(s);
}

double psi_envelope_log_c() { return table().env_log_c; }

} // namespace critwin
