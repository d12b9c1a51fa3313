#pragma once
// Adaptive Gauss-Kronrod 15(7) on finite intervals, worst-panel-first.
// Semi-infinite integrals are handled by the callers: they choose a certified
// cutoff from the intensity envelope and add the tail bound to the error.
#include <functional>
#include "critwin/errors.hpp"

namespace critwin {

struct QuadratureSpec {
    double abs_tol = 1e-9;
    double rel_tol = 1e-8;
    double upper_cutoff = 0.0; // 0 = choose per (lambda, tol) from the envelope
    int max_subdivisions = 4000;
};

struct Integral {
    double value;
    double err_bound;
};

// integral of f over [a, b], 0 <= a < b.  When a < 1 the substitution x = u^2
// is applied first, which removes endpoint singularities up to x^{-3/2}
// (Kronrod nodes are interior, so f is never evaluated at the endpoints).
// Throws NumericError (carrying the best estimate and bound) if the
// subdivision budget is exhausted before max(abs_tol, rel_tol*|value|) is met.
Integral integrate(const std::function<double(double)>& f, double a, double b,
                   const QuadratureSpec& spec);

// same, but never substitutes (for integrands already smooth at a)
Integral integrate_plain(const std::function<double(double)>& f, double a, double b,
                         const QuadratureSpec& spec);

} // namespace critwin
