#pragma once
// Intensity of the limiting point process of critical-window component sizes:
//   F(x, lambda) = x^3/6 - x^2 lambda/2 + x lambda^2/2   (drift polynomial)
//   Lambda_l(x)  = (2 pi)^{-1/2} w_l x^{3l/2 - 5/2} e^{-F}          (label l)
//   Lambda(x)    = (2 pi)^{-1/2} x^{-5/2} Psi(x^{3/2}) e^{-F}       (total)
// plus the label law P_x(l) = w_l x^{3l/2} / Psi(x^{3/2}) and the parameter
// shift lambda -> lambda - s that conditioning on a point of size s induces.
#include <vector>
#include "critwin/wright.hpp"

namespace critwin {

struct IntensityParams {
    double lambda = 0.0;
    double psi_tol = 1e-9;
    int max_label = 64;
};

struct LabelDistribution {
    double x;
    std::vector<double> masses; // l = 0 .. max_label
    double tail_mass;
};

// ((x - lambda)^3 + lambda^3) / 6; always >= x^3/24 >= 0
double drift_F(double x, double lambda);

double intensity_label(double x, int label, const IntensityParams& params);
double intensity_total(double x, const IntensityParams& params);
// log of the total intensity (-inf when it underflows to zero)
double log_intensity_total(double x, double lambda);

LabelDistribution label_distribution(double x, const IntensityParams& params);

double palm_shift(double lambda, double s); // lambda - s

// --- certified envelope, used for cutoffs and pointwise gating -------------
// ln upper bound on x^q * Lambda^lambda(x), valid for all x > 0:
//   (q - 5/2) ln x + x^3/22 + env_c - F(x, lambda)
double env_log_bound(double x, double lambda, double q);
// certified bound on int_X^inf x^q Lambda dx for X >= env_tail_start(lambda),
// q <= 4.5 (uses F >= x^3/24 + x^3/32 on that range)
double env_tail_bound(double X, double lambda, double q);
double env_tail_start(double lambda); // max(4, 4*lambda)
// smallest cutoff X >= lo with env_tail_bound(X) <= tol; steps up geometrically
double pick_cutoff(double lambda, double q, double tol, double lo);

} // namespace critwin
