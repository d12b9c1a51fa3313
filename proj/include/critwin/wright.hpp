#pragma once
// Moment generating function Psi(t) = E exp(t*L) of the normalized Brownian
// excursion area L, via its Taylor coefficients w_l = E L^l / l!.
//
// The moments come from the Takacs recurrence for the excursion-area moments:
//   K_0 = -1/2,   K_n = (3n-4)/4 * K_{n-1} + sum_{j=1}^{n-1} K_j K_{n-j},
//   E L^n = 4*sqrt(pi) * n! / (Gamma((3n-1)/2) * 2^(n/2)) * K_n.
// K_n > 0 for n >= 1, so everything past n = 1 runs in log space.
#include <vector>
#include "critwin/errors.hpp"

namespace critwin {

struct WrightCoefficients {
    std::vector<double> values; // w_0 .. w_L
    int order;                  // L
};

struct MgfEvaluation {
    double argument;
    double value;
    int truncation_order;
    double tail_bound; // absolute bound on the omitted series tail
};

// w_0..w_L; L <= 200 (the library keeps a much longer table internally).
WrightCoefficients wright_coefficients(int order);

// Series evaluation with a certified geometric tail bound; tol is relative
// (tail_bound <= tol * value on success, and Psi >= 1 always).  Throws
// PrecisionUnachievable when the bound cannot be met, or when the value
// itself overflows double.
MgfEvaluation psi(double t, double tol);

// log Psi(t).  Certified to ~1e-9 relative through t <= 140 (series path);
// beyond that switches to the second-order asymptotic
//   log Psi ~ t^2/24 + 2 log t - log 2,
// whose absolute log error is below 4.3/t^2 ~ 2.2e-4 at the switch point and
// decreases.  Callers that need hard certification gate large arguments away
// with the envelope below before this branch can matter.
double log_psi(double t);

// largest t the certified series path supports
double psi_series_limit();

// Certified global envelope: Psi(t) <= exp(psi_envelope_log_c() + t^2/22)
// for all t >= 0.  The constant is sum_l w_l * sup_t t^l exp(-t^2/22)
// evaluated over the internal table; past the table the term ratio is below
// 1.02*sqrt(11/12) < 1, so the remainder adds nothing at double precision.
double psi_envelope_log_c();

namespace detail {
// natural logs of w_0..w_N (internal table, N ~ 2400); w_0 = 1 -> 0.
const std::vector<double>& log_wright_table();
// suffix bound on the coefficient ratio w_{l+1}/w_l, valid for all l' >= l
// including indices past the table end
double wright_ratio_bound(std::size_t l);
} // namespace detail

} // namespace critwin
