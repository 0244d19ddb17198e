#include "resolab/bounds.hpp"

#include "resolab/types.hpp"

#include <algorithm>
#include <cmath>

namespace resolab {

namespace {

void check_p(double p)
{
    if (!(p > 1.0 && p <= 2.0)) throw PreconditionError("p must lie in (1, 2]");
}

void check_R(double R)
{
    if (!(R >= std::exp(1.0) * (1.0 - 1e-15))) throw PreconditionError("envelope requires R >= e");
}

} // namespace

BoundParams BoundParams::make(double Q, double Q_p, double p, double R, double eps)
{
    check_p(p);
    BoundParams b;
    b.Q = Q;
    b.Q_p = Q_p;
    b.p = p;
    b.kappa = resolab::kappa(Q);
    b.rho = 2.0 * b.kappa;
    b.nu = nu_exponent(p);
    b.gamma = gamma_exponent(p);
    b.R = R;
    b.eps = eps;
    return b;
}

double kappa(double Q)
{
    if (!(Q >= 0.0)) throw PreconditionError("kappa: Q must be >= 0");
    return 1.0 + 2.0 * Q * std::exp(2.0 * Q);
}

double nu_exponent(double p)
{
    check_p(p);
    return (p - 1.0) / (6.0 * p);
}

double gamma_exponent(double p)
{
    check_p(p);
    return (p - 1.0) / p;
}

double jensen_bound(double rho, double kappa_value, double r)
{
    if (!(kappa_value >= 1.0)) throw PreconditionError("jensen_bound: kappa must be >= 1");
    if (!(rho >= 2.0 * kappa_value * (1.0 - 1e-15))) throw PreconditionError("jensen_bound: requires rho >= 2 kappa");
    if (!(r >= 0.0)) throw PreconditionError("jensen_bound: r must be >= 0");
    return std::log(2.0 * kappa_value) + 6.0 * rho + 2.0 * std::exp(1.0) * r;
}

double factorization_envelope(double R)
{
    check_R(R);
    return std::pow(R, -1.0 / 3.0);
}

double stability_shape(double R, double p)
{
    check_R(R);
    check_p(p);
    const double L = std::log(R);
    return std::pow(L, (2.0 * p - 2.0) / (2.0 * p - 1.0)) *
           std::pow(R, -(p - 1.0) * (p - 1.0) / (6.0 * p * (2.0 * p - 1.0)));
}

double perturbation_shape(double R, double eps)
{
    check_R(R);
    if (!(eps >= 0.0 && eps < 0.75)) throw PreconditionError("perturbation envelope requires eps in [0, 3/4)");
    const double s = eps * std::pow(R, 1.0 / 6.0);
    return s * std::log(R) * std::exp(17.0 * std::exp(1.0) * s);
}

double stability_envelope(double R, double eps, double p)
{
    return stability_shape(R, p) + perturbation_shape(R, eps);
}

double log_w_bound(double R, double eps)
{
    return 17.0 * std::exp(1.0) * eps * std::pow(R, 1.0 / 6.0);
}

double series_term_bound(double C1, double Q, int n, double x, double t)
{
    if (n < 1) throw PreconditionError("series_term_bound: n must be >= 1");
    const double s = std::max(0.0, 1.0 - 0.5 * (x + t));
    return C1 * std::pow(2.0 * Q, n) / std::tgamma(static_cast<double>(n)) * std::pow(s, n - 1);
}

double correction_envelope_bound(double C1, double Q)
{
    return C1 * (1.0 + 8.0 * Q * std::exp(2.0 * Q));
}

double pv_envelope(double t, double Rband)
{
    if (t <= 0.0) return 1.0;
    return std::min(1.0, 1.0 / (t * std::pow(Rband, 1.0 / 6.0)));
}

double band_tail_envelope(double t, double Rband, double p)
{
    if (t <= 0.0) return 1.0;
    return std::min(1.0, 1.0 / (t * std::pow(Rband, nu_exponent(p))));
}

ConstantFit fit_constant(std::span<const std::pair<double, double>> pairs)
{
    if (pairs.size() < 3) throw PreconditionError("fit_constant: needs at least 3 pairs");
    double ss = 0.0, se = 0.0, ee = 0.0;
    for (const auto& [s, e] : pairs) {
        if (!(s > 0.0)) throw PreconditionError("fit_constant: shapes must be positive");
        ss += s * s;
        se += s * e;
        ee += e * e;
    }
    ConstantFit f;
    f.C = std::max(0.0, se / ss);
    double r2 = 0.0;
    for (const auto& [s, e] : pairs) r2 += (e - f.C * s) * (e - f.C * s);
    f.residual = std::sqrt(r2);
    f.relative_residual = ee > 0.0 ? f.residual / std::sqrt(ee) : 0.0;
    return f;
}

} // namespace resolab
