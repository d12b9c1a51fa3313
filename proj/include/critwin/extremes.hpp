#pragma once
// Order statistics of the point process: exact void/count probabilities via
// inclusion-exclusion over factorial moments, the density of the k-th largest
// point, and the two closed-form approximation regimes for the largest point
// (Gumbel far below the window, normal far above it).
#include "critwin/moments.hpp"
#include "critwin/quadrature.hpp"

namespace critwin {

struct ProbabilityBracket {
    double value; // midpoint of the final bracket
    double bound; // half-width plus certified integration error
};

// P(no point exceeds a).  Alternating partial sums of sum (-1)^j M_j / j!
// bracket the probability; stops once the bracket is tighter than 1e-3.
// Throws BracketNotConverged (carrying the bracket) if 12 moments do not
// close it, which happens when M_1(lambda, a) is large.
ProbabilityBracket void_probability(double lambda, double a,
                                    const QuadratureSpec& spec = {});

// P(exactly m points exceed a), same bracketing applied to the Jordan
// inversion sum_{j >= m} (-1)^{j-m} M_j / (m! (j-m)!).
ProbabilityBracket count_probability(double lambda, double a, int m,
                                     const QuadratureSpec& spec = {});

// density of the k-th largest point at x > 0:
//   h_k(x) = P(exactly k-1 points of the (lambda - x)-shifted process
//             exceed x) * Lambda^lambda(x)
double kth_largest_density(int k, double x, double lambda,
                           const QuadratureSpec& spec = {});

// P(largest point <= x); 0 for x <= 0 (the process a.s. has points)
double largest_cdf(double x, double lambda, const QuadratureSpec& spec = {});

// Subcritical (lambda << 0) regime: the largest point, mapped through
// x = 2 (a_lambda + s) / lambda^2, is asymptotically standard Gumbel with
//   a_lambda = 3 ln|lambda| - (5/2) ln ln|lambda| - (1/2) ln(3888 pi).
// Requires |lambda| > e so the double logarithm is positive.
struct GumbelParams {
    double lambda;
    double a;
};
GumbelParams gumbel_params(double lambda);
double gumbel_point(const GumbelParams& p, double s);
double gumbel_cdf(double s);
// P(k-th largest <= point(s)) in the same limit: e^{-e^{-s}} sum_{j<k} e^{-js}/j!
double kth_record_cdf(int k, double s);

// Supercritical (lambda >> 0) regime: the largest point is approximately
// normal with mean 2 lambda and variance 2 / lambda.  Requires lambda > 0.
struct NormalApproxParams {
    double mean;
    double sd;
};
NormalApproxParams normal_approx_params(double lambda);

} // namespace critwin
