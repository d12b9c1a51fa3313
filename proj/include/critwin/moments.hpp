#pragma once
// Exact moment formulas for the limiting point process:
//   expected_weight   E zeta_eps  = int_eps^inf x Lambda(x) dx
//   weight_variance   Var zeta    = int_eps^inf int_0^eps x y Lambda(x)
//                                   (Lambda^l(y) - Lambda^{l-x}(y)) dy dx
//   expected_count    E chi_eps   = int_eps^inf Lambda(x) dx
//   count_variance    M_2 + M_1 - M_1^2
//   factorial_moments M_k(l, a)   = int_a^inf Lambda^l(x) M_{k-1}(l - x, a) dx
// plus the identity residuals used as cross-checks:
//   int_0^inf x (Lambda^l - Lambda^0) dx = lambda
//   int_0^inf x^3 Lambda dx = 2 + 2 lambda int_0^inf x^2 Lambda dx
//   int_0^inf x Lambda_1 dx = 1/4 int_0^inf e^{-F} dx
#include <vector>
#include "critwin/intensity.hpp"
#include "critwin/quadrature.hpp"

namespace critwin {

struct FactorialMomentTable {
    double lambda;
    double a;
    std::vector<double> values;            // M_0 = 1, M_1, ..., M_K
    std::vector<double> certified_abs_err; // per entry
};

double expected_weight(double eps, const IntensityParams& params, const QuadratureSpec& spec);
double weight_variance(double eps, const IntensityParams& params, const QuadratureSpec& spec);
double expected_count(double eps, const IntensityParams& params, const QuadratureSpec& spec);
double count_variance(double eps, const IntensityParams& params, const QuadratureSpec& spec);

FactorialMomentTable factorial_moments(double lambda, double a, int K,
                                       const QuadratureSpec& spec);

// int_0^inf x^q Lambda dx with certified tail, q >= 2 (finite at the origin)
double power_moment(double q, const IntensityParams& params, const QuadratureSpec& spec);

double weight_identity_residual(double lambda, const QuadratureSpec& spec);
double cubic_identity_residual(double lambda, const QuadratureSpec& spec);

struct UnicyclicPair {
    double left;  // int x Lambda_1 dx
    double right; // 1/4 int e^{-F} dx
};
UnicyclicPair unicyclic_weight(double lambda, const QuadratureSpec& spec);

namespace detail {
// int_a^cutoff x^q Lambda^lambda dx plus certified tail; the workhorse
Integral intensity_integral(double q, double lambda, double a, const QuadratureSpec& spec);
} // namespace detail

} // namespace critwin
