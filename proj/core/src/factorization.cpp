#include "resolab/factorization.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace resolab {

namespace {

constexpr cplx I(0.0, 1.0);

// -sum_{k>=2} w^k / k
cplx log_e_series(cplx w)
{
    cplx pw = w * w, s = 0.0;
    for (int k = 2; k < 80; ++k) {
        const cplx t = pw / static_cast<double>(k);
        s -= t;
        if (std::abs(t) < 1e-17 * std::max(std::abs(s), 1e-300)) break;
        pw *= w;
    }
    return s;
}

cplx expm1_complex(cplx a)
{
    if (std::abs(a) > 0.1) return std::exp(a) - 1.0;
    cplx term = a, s = a;
    for (int k = 2; k < 30; ++k) {
        term *= a / static_cast<double>(k);
        s += term;
        if (std::abs(term) < 1e-18 * std::abs(s)) break;
    }
    return s;
}

ZeroSet strip_origin(const ZeroSet& zs, int& n0)
{
    ZeroSet out = zs;
    out.zeros.clear();
    for (const auto& z : zs.zeros) {
        if (z.z == cplx(0.0))
            n0 += z.multiplicity;
        else
            out.zeros.push_back(z);
    }
    return out;
}

cplx poly_eval(const std::vector<cplx>& c, cplx z)
{
    cplx s = 0.0;
    for (size_t k = c.size(); k-- > 0;) s = s * z + c[k];
    return s;
}

cplx poly_deriv(const std::vector<cplx>& c, cplx z)
{
    cplx s = 0.0;
    for (size_t k = c.size(); k-- > 1;) s = s * z + static_cast<double>(k) * c[k];
    return s;
}

} // namespace

cplx log_elementary_factor(cplx w)
{
    if (std::abs(w) < 0.5) return log_e_series(w);
    return std::log(1.0 - w) + w;
}

cplx elementary_factor(cplx w)
{
    if (std::abs(w) < 1e-8) return std::exp(log_e_series(w));
    return (1.0 - w) * std::exp(w);
}

cplx elementary_factor_minus_1(cplx w)
{
    if (std::abs(w) < 0.1) return expm1_complex(log_e_series(w));
    return elementary_factor(w) - 1.0;
}

cplx log_truncated_product(const ZeroSet& zs, cplx z)
{
    cplx s = 0.0;
    for (const auto& zn : zs.zeros) {
        if (zn.z == cplx(0.0)) throw PreconditionError("truncated_product: zero at the origin must be carried by n0");
        s += static_cast<double>(zn.multiplicity) * log_elementary_factor(z / zn.z);
    }
    return s;
}

cplx truncated_product(const ZeroSet& zs, cplx z)
{
    if (zs.total_multiplicity() > 64) return std::exp(log_truncated_product(zs, z));
    cplx p = 1.0;
    for (const auto& zn : zs.zeros) {
        if (zn.z == cplx(0.0)) throw PreconditionError("truncated_product: zero at the origin must be carried by n0");
        const cplx e = elementary_factor(z / zn.z);
        for (int k = 0; k < zn.multiplicity; ++k) p *= e;
    }
    return p;
}

FactorizedJost::FactorizedJost(ZeroSet zs, int n0, std::vector<cplx> exponent, double window)
    : n0_(n0), exponent_(std::move(exponent)), window_(window)
{
    if (n0 < 0) throw PreconditionError("FactorizedJost: n0 must be >= 0");
    zs_ = strip_origin(zs, n0_);
}

cplx FactorizedJost::value(cplx z) const
{
    const cplx L = poly_eval(exponent_, z) + log_truncated_product(zs_, z);
    cplx v = std::exp(L);
    for (int k = 0; k < n0_; ++k) v *= z;
    return v;
}

std::pair<cplx, cplx> FactorizedJost::value_and_derivative(cplx z) const
{
    const cplx v = value(z);
    cplx dlog = poly_deriv(exponent_, z);
    if (n0_ > 0) dlog += static_cast<double>(n0_) / z;
    for (const auto& zn : zs_.zeros) dlog -= static_cast<double>(zn.multiplicity) * z / (zn.z * (zn.z - z));
    return {v, v * dlog};
}

AxisTarget unit_target()
{
    return [](double) { return cplx(1.0); };
}

std::vector<cplx> axis_log_residual(const ZeroSet& nonzero, int n0, const AxisTarget& target, double R,
                                    const std::vector<double>& heights)
{
    if (heights.empty()) return {};
    for (double y : heights)
        if (!(y > 0.0)) throw PreconditionError("calibration heights must be positive");
    auto raw = [&](double y) {
        const cplx z(0.0, y);
        const cplx t = target(y);
        if (t == cplx(0.0) || !std::isfinite(std::abs(t))) {
            std::ostringstream msg;
            msg << "calibration target vanishes or is not finite at y=" << y;
            throw NumericalError(msg.str());
        }
        return std::log(t) - static_cast<double>(n0) * std::log(z) - log_truncated_product(nonzero, z);
    };
    std::vector<size_t> order(heights.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return heights[a] > heights[b]; });

    double y = std::max(10.0 * std::max(1.0, std::cbrt(R)), heights[order.front()]);
    cplx cur = raw(y);
    std::vector<cplx> out(heights.size());
    const double two_pi = 2.0 * pi;
    for (size_t idx : order) {
        const double goal = heights[idx];
        while (y > goal) {
            double dy = std::min(y - goal, 0.05 * std::max(1.0, y));
            for (;;) {
                const double yn = std::max(goal, y - dy);
                cplx v = raw(yn);
                const double k = std::round((cur.imag() - v.imag()) / two_pi);
                v.imag(v.imag() + k * two_pi);
                if (std::abs(v.imag() - cur.imag()) < pi / 4.0) {
                    cur = v;
                    y = yn;
                    break;
                }
                dy *= 0.5;
                if (dy < 1e-10 * std::max(1.0, y))
                    throw NumericalError("calibration: log continuation stalled on the imaginary axis");
            }
        }
        out[idx] = cur;
    }
    return out;
}

FactorizedJost normalize(const ZeroSet& zs, const AxisTarget& target, double R)
{
    if (!(R > 0.0)) throw PreconditionError("normalize: R must be positive");
    int n0 = 0;
    const ZeroSet nz = strip_origin(zs, n0);
    const double y1 = 3.0 * std::cbrt(R), y2 = 6.0 * std::cbrt(R);
    if (y1 == y2) throw PreconditionError("normalize: singular calibration system");
    const auto phi = axis_log_residual(nz, n0, target, R, {y1, y2});
    const cplx a1 = (phi[0] - phi[1]) / (I * (y1 - y2));
    const cplx a0 = phi[0] - a1 * (I * y1);
    return FactorizedJost(nz, n0, {a0, a1}, std::cbrt(R));
}

FactorizedJost calibrate(const ZeroSet& zs, const AxisTarget& target, double R, const CalibrationOptions& opt)
{
    if (!(R > 0.0)) throw PreconditionError("calibrate: R must be positive");
    const int ncols = opt.poly_degree + 1 + opt.laurent_terms;
    if (opt.poly_degree < 0 || opt.laurent_terms < 0 || opt.heights < ncols || !(opt.span > 1.0))
        throw PreconditionError("calibrate: invalid options");
    int n0 = 0;
    const ZeroSet nz = strip_origin(zs, n0);
    const double base = std::pow(R, opt.height_exponent);
    std::vector<double> ys(opt.heights);
    for (int k = 0; k < opt.heights; ++k) ys[k] = base * (1.0 + (opt.span - 1.0) * k / (opt.heights - 1));
    const auto phi = axis_log_residual(nz, n0, target, R, ys);

    Eigen::MatrixXcd A(opt.heights, ncols);
    Eigen::VectorXcd b(opt.heights);
    for (int r = 0; r < opt.heights; ++r) {
        const cplx z(0.0, ys[r]);
        for (int k = 0; k <= opt.poly_degree; ++k) A(r, k) = std::pow(z, k);
        for (int k = 1; k <= opt.laurent_terms; ++k) A(r, opt.poly_degree + k) = std::pow(z, -k);
        b(r) = phi[r];
    }
    Eigen::VectorXd colscale(ncols);
    for (int c = 0; c < ncols; ++c) {
        colscale(c) = A.col(c).cwiseAbs().maxCoeff();
        A.col(c) /= colscale(c);
    }
    const Eigen::VectorXcd x = A.colPivHouseholderQr().solve(b);
    std::vector<cplx> exponent(opt.poly_degree + 1);
    for (int k = 0; k <= opt.poly_degree; ++k) exponent[k] = x(k) / colscale(k);
    return FactorizedJost(nz, n0, std::move(exponent), std::pow(R, 1.0 / 6.0));
}

cplx ratio_W(const ZeroSet& zs, const ZeroSet& zs_tilde, cplx z)
{
    const auto a = zs.expanded();
    const auto b = zs_tilde.expanded();
    if (a.size() != b.size()) throw PreconditionError("ratio_W: zero sets are not paired (different sizes)");
    cplx L = 0.0;
    for (size_t k = 0; k < a.size(); ++k) {
        if (z == b[k]) throw PreconditionError("ratio_W: z hits a perturbed zero (pole)");
        L += std::log((z - a[k]) / (z - b[k]));
    }
    return std::exp(L);
}

double tail_bound_pi(double R, cplx z, double kappa)
{
    if (!(R > 0.0)) throw PreconditionError("tail_bound_pi: R must be positive");
    if (std::abs(z) > R / 2.0) throw PreconditionError("tail_bound_pi: requires |z| <= R/2");
    if (R < 18.0 * kappa) throw PreconditionError("tail_bound_pi: requires R >= 18 kappa");
    const double a = 72.0 * std::norm(z) / R;
    return a * std::exp(a);
}

} // namespace resolab
