#pragma once

#include <span>
#include <utility>
#include <vector>

namespace resolab {

struct BoundParams {
    double Q = 0.0;      // L1 budget
    double Q_p = 0.0;    // Lp budget
    double p = 2.0;
    double kappa = 1.0;
    double rho = 2.0;
    double nu = 1.0 / 12.0;
    double gamma = 0.5;
    double R = 0.0;
    double eps = 0.0;

    // Fills kappa, nu, gamma and rho = 2 kappa from (Q, p).
    static BoundParams make(double Q, double Q_p, double p, double R, double eps);
};

double kappa(double Q);
double nu_exponent(double p);
double gamma_exponent(double p);

// log(2 kappa) + 6 rho + 2 e r
double jensen_bound(double rho, double kappa, double r);

// R^{-1/3}
double factorization_envelope(double R);

// (log R)^{(2p-2)/(2p-1)} R^{-(p-1)^2/(6p(2p-1))}
double stability_shape(double R, double p);
// eps R^{1/6} log R exp(17 e eps R^{1/6})
double perturbation_shape(double R, double eps);
// sum of the two terms above
double stability_envelope(double R, double eps, double p);
// 17 e eps R^{1/6}
double log_w_bound(double R, double eps);

// C1 (2Q)^n / (n-1)! (1 - (x+t)/2)^{n-1}, n >= 1
double series_term_bound(double C1, double Q, int n, double x, double t);
// C1 (1 + 8 Q e^{2Q})
double correction_envelope_bound(double C1, double Q);

// min(1, 1/(t Rband^{1/6}))
double pv_envelope(double t, double Rband);
// min(1, 1/(t Rband^nu))
double band_tail_envelope(double t, double Rband, double p);

struct ConstantFit {
    double C = 0.0;
    double residual = 0.0;           // || empirical - C shape ||_2
    double relative_residual = 0.0;  // residual / ||empirical||_2 (0 when data is all zero)
};

// Least-squares C >= 0 for empirical ~ C * shape from at least 3 (shape, empirical) pairs.
ConstantFit fit_constant(std::span<const std::pair<double, double>> pairs);

} // namespace resolab
