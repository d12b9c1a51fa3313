#pragma once
// Poisson branching-process side of the window: Borel total-progeny law,
// survival probability above criticality, and the u_eps normalization that
// the small-point regime of the intensity integrates against.
#include <cstdint>

#include "critwin/quadrature.hpp"

namespace critwin {

// P(total progeny of Poisson(m) branching = k) = k^{k-1} m^{k-1} e^{-km} / k!.
// Defective for m > 1: the missing mass is the survival probability.
double borel_pmf(std::int64_t k, double m);
double log_borel_pmf(std::int64_t k, double m);

// positive root of q = 1 - e^{-alpha q}; 0 for alpha <= 1
double survival_probability(double alpha);

// u_eps(lambda, eps) = 2 max(lambda, 0)
//                      + (2 pi)^{-1/2} int_eps^inf x^{-3/2} e^{-lambda^2 x / 2} dx,
// evaluated by quadrature plus the exact erfc tail past a fixed cutoff.
// Also evaluates the rearranged form below and throws NumericError if the two
// disagree beyond their combined quadrature error.
double u_eps(double lambda, double eps, const QuadratureSpec& spec = {});

// same quantity rearranged around the eps -> 0 singularity:
//   sqrt(2/pi) eps^{-1/2} + lambda
//     + (2 pi)^{-1/2} int_0^eps x^{-3/2} (1 - e^{-lambda^2 x / 2}) dx
double u_eps_smallx(double lambda, double eps, const QuadratureSpec& spec = {});

// n^{1/3} P(T(Po(1 + lambda n^{-1/3})) >= eps n^{2/3}), n >= 1000: the exact
// finite-n tail that converges to u_eps(lambda, eps).  Sums the pmf to a
// width-driven cutoff, closes with a Stirling-bracketed remainder, and adds
// the escape-to-infinity mass when the mean is supercritical.
double progeny_tail_scaled(double lambda, double eps, std::int64_t n);

} // namespace critwin
